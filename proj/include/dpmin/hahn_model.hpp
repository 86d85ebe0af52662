#ifndef DPMIN_HAHN_MODEL_HPP
#define DPMIN_HAHN_MODEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpmin/hahn_series.hpp"
#include "dpmin/rational.hpp"

namespace dpmin {

// ---------------------------------------------------------------------------
// The ordered-group-with-P model on finite-support series.
//
// P = { x : v(x) is an integer }.  Convex components of P among positives are
// C_n = { x > 0 : v(x) = n }, of the complement G_n = { x > 0 : n-1 < v(x) < n }.
// A class [a] is a component united with its mirror image; classes are
// discretely ordered by absolute value with least element [0].
//
// Conventions (the two axioms 0 is awkward for):
//   * 0 forms its own class, the left endpoint of the class order.
//   * P(0) is true, even though v(0) = +inf is not an integer; the group
//     axiom list wants 0 in P and openness of P fails at the single point 0
//     in this concrete reading.
// ---------------------------------------------------------------------------

class ClassId {
public:
    static ClassId zero_class();
    // Elements with v = n exactly.
    static ClassId integer_class(long long n);
    // Elements with n-1 < v < n.
    static ClassId gap_class(long long n);

    bool is_zero() const { return zero_; }
    bool is_integer() const { return !zero_ && integer_; }
    bool is_gap() const { return !zero_ && !integer_; }
    long long index() const { return n_; }

    // Position on the discrete ladder; larger rank = larger class (bigger
    // elements, smaller valuations).  Adjacent classes differ by exactly 1.
    // Precondition: !is_zero().
    long long rank() const;

    friend bool operator==(const ClassId& a, const ClassId& b) {
        if (a.zero_ || b.zero_) return a.zero_ == b.zero_;
        return a.rank() == b.rank();
    }
    friend bool operator!=(const ClassId& a, const ClassId& b) { return !(a == b); }
    friend bool operator<(const ClassId& a, const ClassId& b) {
        if (a.zero_) return !b.zero_;
        if (b.zero_) return false;
        return a.rank() < b.rank();
    }
    friend bool operator<=(const ClassId& a, const ClassId& b) { return a == b || a < b; }

    std::string to_string() const;

private:
    bool zero_ = true;
    bool integer_ = false;
    long long n_ = 0;
};

// v(a) integral (or a = 0, by convention).
bool hseries_P(const HahnSeries& a);

ClassId class_of(const HahnSeries& a);

// Same convex component: equal class, same strict sign (or both zero).
bool same_component(const HahnSeries& a, const HahnSeries& b);

struct Lemma51Report {
    std::size_t checked = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Checks, on the concrete pair (a, b):
//   1. [a] < [b]  implies  a + b in [b],
//   2. [a] = [b]  implies  [a + b] <= [a],
//   3. [q a] = [a] for a fixed set of nonzero rationals q, and
//      [q1 a + q2 b] <= max([a], [b]) over the same set.
Lemma51Report check_lemma51(const HahnSeries& a, const HahnSeries& b);

// Exactly-n-alternations relation, computed on the class ladder with sign
// handling.  Returns 0 when [x, y] stays inside one component (R_0, which is
// symmetric), n >= 1 when x < y with exactly n component boundaries strictly
// between, and nullopt otherwise (x >= y without R_0, or the pair straddles
// 0 where components accumulate and no finite count exists).
std::optional<long long> compute_Rn(const HahnSeries& x, const HahnSeries& y);

// Independent oracle: builds a monomial sample meeting every component
// between x and y and measures the longest strictly-alternating increasing
// chain.  Component counts above `chain_bound` are reported as nullopt.
// Shares no code with the ladder computation.
std::optional<long long> rn_chain_oracle(const HahnSeries& x, const HahnSeries& y,
                                         long long chain_bound = 64);

struct AxiomCheck {
    std::string axiom;
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::vector<std::string> examples;  // first few counterexamples
};

struct AxiomSuiteReport {
    std::vector<AxiomCheck> checks;
    bool all_ok() const {
        for (const auto& c : checks)
            if (c.violations) return false;
        return true;
    }
};

// Samples series and checks every finitely checkable axiom instance:
// 0 in P, P symmetry under negation, positive-combination convexity inside a
// component (both the P and non-P versions), the R_0 characterization, R_n
// agreement with the chain oracle, and the constructive up/down witnesses
// for R_1.
AxiomSuiteReport axiom_suite(std::uint64_t seed, std::size_t sample_size);

// Seeded series sampler shared by the harness and the experiment layer.
HahnSeries sample_series(class Rng& rng, int max_terms = 3);

}  // namespace dpmin

#endif  // DPMIN_HAHN_MODEL_HPP
