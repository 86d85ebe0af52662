#ifndef DPMIN_PADIC_MODEL_HPP
#define DPMIN_PADIC_MODEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpmin/extint.hpp"
#include "dpmin/formula.hpp"
#include "dpmin/padic.hpp"
#include "dpmin/structure.hpp"

namespace dpmin {

// ---------------------------------------------------------------------------
// RV_k quotients and the annulus / power-coset / cell toolkit.
//
// RV_k = K^x / (1 + m^k); two nonzero elements have the same image exactly
// when their valuations agree and unit residues agree mod p^k.  pi_k(0) is a
// separate infinite point.  Level 0 is treated as the trivial quotient (no
// information); it only appears in minimality probes at k - 1 = 0.
// ---------------------------------------------------------------------------

struct RVClass {
    bool infinite = false;  // image of values indistinguishable from 0
    long long valuation = 0;
    long long unit_mod_pk = 0;
    int k = 1;

    friend bool operator==(const RVClass& a, const RVClass& b) {
        if (a.infinite || b.infinite) return a.infinite == b.infinite;
        return a.valuation == b.valuation && a.unit_mod_pk == b.unit_mod_pk && a.k == b.k;
    }
    friend bool operator!=(const RVClass& a, const RVClass& b) { return !(a == b); }
};

// Quotient map.  Requires k >= 1 and (for regular values) k <= precision.
RVClass pi_k(const PadicApprox& x, int k);

// Evaluates both sides of:  pi_k(x - z) = pi_k(y - z)  iff  v(x-y) >= v(y-z) + k
// and reports whether they agree.  Preconditions: x != z and y != z at stored
// precision (EvalError otherwise).  Throws PrecisionError when the stored
// digits cannot decide a side.
bool check_prop61(const PadicApprox& x, const PadicApprox& y, const PadicApprox& z, int k);

// gamma >= v(diff) >= delta, with exact handling of 0 and of fuzzy values
// whose valuation is only bounded below.
bool in_annulus(const PadicApprox& diff, const ExtInt& gamma, const ExtInt& delta);

// Hensel bound: a unit u is an n-th power iff it is one modulo p^(2e+1),
// e = v_p(n).  Returns 2e+1.
int hensel_modulus_exponent(long long p, unsigned n);

// Unit residues modulo p^(2e+1) that are n-th powers of units; sorted.
std::vector<long long> nth_power_unit_residues(long long p, unsigned n);

// z in P_n (the n-th powers, 0 included).
bool is_nth_power(const PadicApprox& z, unsigned n);

// z in lambda * P_n.  lambda = 0 is read as the singleton {0}.
bool in_power_coset(const PadicApprox& z, unsigned n, unsigned lambda);

struct CellSpec {
    unsigned n = 1;
    unsigned lambda = 1;
    PadicApprox center;
    ExtInt gamma = ExtInt::pos_inf();
    ExtInt delta = ExtInt::neg_inf();
};

// Annulus(center, gamma, delta) intersected with Pow_{n,lambda}(center).
bool in_cell(const PadicApprox& x, const CellSpec& cell);

// Least nonnegative integers hitting each coset of P_n in K^x, in increasing
// order.  There are n * [units : n-th power units] of them.
std::vector<long long> lambda_coset_reps(long long p, unsigned n);

struct CelllikeResult {
    int k = 0;
    long long verified_modulus = 0;       // the scan was exhaustive mod this
    long long violations_at_k_minus_1 = 0;
    int hensel_exponent = 0;              // 2 v_p(n) + 1
};

// Least k >= 1 such that pi_k-equality preserves membership of z in every
// coset lambda * P_n, verified exhaustively over all residues modulo
// max(p^(k+2), p^(2e+1)) scaled across valuations 0..n, together with the
// violation count at k - 1 demonstrating minimality.
CelllikeResult find_celllike_k(long long p, unsigned n, int k_max, std::size_t workers = 0);

// Same probe for a pure annulus constraint; k = 1 whenever the annulus is
// proper (pi_1 already determines the valuation).
CelllikeResult find_celllike_k_annulus(long long p, const ExtInt& gamma, const ExtInt& delta,
                                       int k_max);

struct CelllikeReport {
    std::size_t samples = 0;
    std::size_t undecidable = 0;
    std::vector<std::string> violations;  // first few, printed
    std::size_t violation_count = 0;
    bool ok() const { return violation_count == 0; }
};

// Statistical probe of the cell-likeness definition for a quantifier-free
// formula phi(x; y0, ...) over the valued-field signature: samples
// (x, y0, extras) together with (x', y0') built so that
// pi_k(x - y0) = pi_k(x' - y0'), and reports any instance where phi holds on
// the first tuple but fails on the second.  Undecidable samples (precision
// exhaustion) are counted separately.
CelllikeReport check_celllike(const Structure& padic, const Formula& phi, const std::string& x_var,
                              const std::string& center_var,
                              const std::vector<std::pair<std::string, Element>>& extra_params,
                              int k, std::size_t samples, std::uint64_t seed);

}  // namespace dpmin

#endif  // DPMIN_PADIC_MODEL_HPP
