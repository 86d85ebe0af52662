#ifndef DPMIN_PADIC_HPP
#define DPMIN_PADIC_HPP

#include <string>
#include <string_view>

#include "dpmin/extint.hpp"
#include "dpmin/rational.hpp"

namespace dpmin {

// Finite-precision p-adic number stored as (valuation, unit residue,
// precision): the value is p^val * unit known modulo p^(val + precision).
//
// Three states:
//   Zero    - exactly 0 (valuation +inf),
//   Fuzzy   - congruent to 0 modulo p^bound but otherwise unknown; produced
//             by catastrophic cancellation.  Any query that needs the
//             valuation or unit throws PrecisionError rather than guessing.
//   Regular - valuation and unit residue known.
//
// Precision renormalizes explicitly through arithmetic; unit * unit products
// stay inside int64 because construction rejects p^precision > 2^31.
class PadicApprox {
public:
    // Placeholder zero over p = 2 at one digit; fields are meant to be
    // assigned before use.
    PadicApprox() : p_(2), prec_(1) {}

    // Exact zero.
    static PadicApprox zero(long long p, int precision);

    // p^val * unit truncated to `precision` unit digits; unit must not be
    // divisible by p.
    static PadicApprox from_parts(long long p, long long val, long long unit, int precision);

    static PadicApprox from_integer(long long p, const BigInt& n, int precision);
    static PadicApprox from_rational(long long p, const Rat& q, int precision);

    long long prime() const { return p_; }
    int precision() const { return prec_; }

    bool is_zero() const { return kind_ == Kind::Zero; }
    bool is_fuzzy() const { return kind_ == Kind::Fuzzy; }
    bool is_regular() const { return kind_ == Kind::Regular; }

    // Exact valuation; +inf for Zero.  Throws PrecisionError when Fuzzy.
    ExtInt valuation() const;

    // Largest b such that the value is known to satisfy v >= b (+inf for Zero).
    ExtInt valuation_lower_bound() const;

    // Unit residue modulo p^k, 1 <= k <= precision.  Regular only.
    long long unit_mod(int k) const;

    // Full stored unit residue (mod p^precision).  Regular only.
    long long unit() const;

    PadicApprox operator+(const PadicApprox& o) const;
    PadicApprox operator-() const;
    // Identical representations subtract to exact zero ("equal at stored
    // precision" is the library's equality notion).
    PadicApprox operator-(const PadicApprox& o) const;
    PadicApprox operator*(const PadicApprox& o) const;
    PadicApprox scaled(const Rat& q) const;

    // Equality at the shared stored precision.
    bool equal_at_precision(const PadicApprox& o) const;

    std::string to_string() const;

    // Parses "p^v * u", "u", or "0" (p and precision supplied by caller).
    static PadicApprox parse(std::string_view text, long long p, int precision);

private:
    enum class Kind { Zero, Fuzzy, Regular };

    PadicApprox(long long p, int prec) : p_(p), prec_(prec) {}

    long long p_ = 0;
    int prec_ = 1;
    Kind kind_ = Kind::Zero;
    long long val_ = 0;        // Regular
    long long unit_ = 0;       // Regular: in [1, p^prec), not divisible by p
    long long zero_bound_ = 0; // Fuzzy: value is 0 mod p^zero_bound_
};

// p^e as long long; throws PrecisionError if it would exceed 2^31.
long long pow_ll(long long p, long long e);

// Inverse of u modulo m (gcd(u, m) = 1).
long long inverse_mod(long long u, long long m);

}  // namespace dpmin

#endif  // DPMIN_PADIC_HPP
