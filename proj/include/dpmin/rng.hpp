#ifndef DPMIN_RNG_HPP
#define DPMIN_RNG_HPP

#include <cstdint>

namespace dpmin {

// SplitMix64.  Chosen over std::mt19937 + distributions because the standard
// pins the engine but not the distributions; all sampled experiments must be
// byte-reproducible from the seed alone, on any compiler.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform-ish in [0, n).  Modulo bias is irrelevant at the sample sizes
    // used here and the mapping is platform-stable.
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    // Integer in [lo, hi], inclusive.
    long long range(long long lo, long long hi) {
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

private:
    std::uint64_t state_;
};

}  // namespace dpmin

#endif  // DPMIN_RNG_HPP
