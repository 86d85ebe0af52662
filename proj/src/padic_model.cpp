#include "dpmin/padic_model.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dpmin/errors.hpp"
#include "dpmin/parallel.hpp"
#include "dpmin/rng.hpp"

namespace dpmin {

RVClass pi_k(const PadicApprox& x, int k) {
    if (k < 1) throw EvalError("pi_k requires k >= 1");
    RVClass out;
    out.k = k;
    if (!x.is_regular()) {
        out.infinite = true;  // indistinguishable from 0 at stored precision
        return out;
    }
    out.valuation = x.valuation().value();
    out.unit_mod_pk = x.unit_mod(k);
    return out;
}

bool check_prop61(const PadicApprox& x, const PadicApprox& y, const PadicApprox& z, int k) {
    PadicApprox d1 = x - z;
    PadicApprox d2 = y - z;
    if (d1.is_zero() || d2.is_zero())
        throw EvalError("check_prop61 requires x != z and y != z at stored precision");
    if (d1.is_fuzzy() || d2.is_fuzzy())
        throw PrecisionError("difference against the center lost all unit digits");

    bool lhs = pi_k(d1, k) == pi_k(d2, k);

    PadicApprox dxy = x - y;
    ExtInt threshold = d2.valuation() + k;
    bool rhs;
    if (dxy.is_zero()) {
        rhs = true;
    } else if (dxy.is_fuzzy()) {
        if (dxy.valuation_lower_bound() >= threshold)
            rhs = true;
        else
            throw PrecisionError("v(x - y) undecidable against v(y - z) + k at stored precision");
    } else {
        rhs = dxy.valuation() >= threshold;
    }
    return lhs == rhs;
}

bool in_annulus(const PadicApprox& diff, const ExtInt& gamma, const ExtInt& delta) {
    if (diff.is_zero()) return gamma.is_pos_inf();
    if (diff.is_regular()) {
        ExtInt v = diff.valuation();
        return delta <= v && v <= gamma;
    }
    // Fuzzy: v is somewhere in [bound, +inf].
    ExtInt bound = diff.valuation_lower_bound();
    if (gamma.is_pos_inf() && delta <= bound) return true;
    if (!gamma.is_pos_inf() && gamma < bound) return false;
    throw PrecisionError("annulus membership undecidable at stored precision");
}

int hensel_modulus_exponent(long long p, unsigned n) {
    int e = 0;
    long long m = n;
    while (m % p == 0) {
        m /= p;
        ++e;
    }
    return 2 * e + 1;
}

std::vector<long long> nth_power_unit_residues(long long p, unsigned n) {
    int M = hensel_modulus_exponent(p, n);
    long long pm = pow_ll(p, M);
    std::set<long long> out;
    for (long long w = 1; w < pm; ++w) {
        if (w % p == 0) continue;
        long long acc = 1;
        for (unsigned i = 0; i < n; ++i)
            acc = static_cast<long long>((static_cast<__int128>(acc) * w) % pm);
        out.insert(acc);
    }
    return std::vector<long long>(out.begin(), out.end());
}

namespace {

bool unit_is_nth_residue(long long unit_mod_pM, const std::vector<long long>& residues) {
    return std::binary_search(residues.begin(), residues.end(), unit_mod_pM);
}

}  // namespace

bool is_nth_power(const PadicApprox& z, unsigned n) {
    if (n < 1) throw EvalError("power index must be >= 1");
    if (z.is_zero()) return true;  // 0 = 0^n
    if (z.is_fuzzy()) throw PrecisionError("n-th power membership undecidable");
    long long p = z.prime();
    int M = hensel_modulus_exponent(p, n);
    if (z.precision() < M)
        throw PrecisionError("n-th power test needs " + std::to_string(M) + " unit digits");
    if (((z.valuation().value() % n) + n) % n != 0) return false;
    return unit_is_nth_residue(z.unit_mod(M), nth_power_unit_residues(p, n));
}

bool in_power_coset(const PadicApprox& z, unsigned n, unsigned lambda) {
    if (lambda == 0) {
        if (z.is_zero()) return true;
        if (z.is_regular()) return false;
        throw PrecisionError("equality with the center undecidable");
    }
    if (z.is_zero()) return true;  // 0 = lambda * 0^n
    if (z.is_fuzzy()) throw PrecisionError("power coset membership undecidable");
    long long p = z.prime();
    PadicApprox scaled = z.scaled(Rat(1, static_cast<long long>(lambda)));
    int M = hensel_modulus_exponent(p, n);
    if (scaled.precision() < M)
        throw PrecisionError("power coset test needs " + std::to_string(M) + " unit digits");
    if (((scaled.valuation().value() % n) + n) % n != 0) return false;
    return unit_is_nth_residue(scaled.unit_mod(M), nth_power_unit_residues(p, n));
}

bool in_cell(const PadicApprox& x, const CellSpec& cell) {
    PadicApprox diff = x - cell.center;
    return in_annulus(diff, cell.gamma, cell.delta) && in_power_coset(diff, cell.n, cell.lambda);
}

std::vector<long long> lambda_coset_reps(long long p, unsigned n) {
    int M = hensel_modulus_exponent(p, n);
    long long pm = pow_ll(p, M);
    std::vector<long long> residues = nth_power_unit_residues(p, n);
    long long units = pm - pm / p;
    long long target = static_cast<long long>(n) * (units / static_cast<long long>(residues.size()));

    auto coset_key = [&](long long lambda) -> std::pair<long long, long long> {
        long long e = 0;
        long long u = lambda;
        while (u % p == 0) {
            u /= p;
            ++e;
        }
        u %= pm;
        long long canon = pm;
        for (long long r : residues)
            canon = std::min(canon,
                             static_cast<long long>((static_cast<__int128>(u) * r) % pm));
        return {e % n, canon};
    };

    std::vector<long long> reps;
    std::set<std::pair<long long, long long>> seen;
    // Representatives need valuations up to n-1, so the search runs to
    // p^(n-1) * pm before something is wrong.
    long long bound = 8 * pow_ll(p, n) * pm;
    for (long long lambda = 1; static_cast<long long>(reps.size()) < target; ++lambda) {
        if (lambda > bound)
            throw BudgetError("coset representative search exceeded its bound");
        if (seen.insert(coset_key(lambda)).second) reps.push_back(lambda);
    }
    return reps;
}

// ── Exhaustive cell-likeness scan ──────────────────────────────────────────

namespace {

struct ScanDomain {
    long long p;
    unsigned n;
    int scan_exp;           // residues enumerated mod p^scan_exp
    long long pm_scan;
    int M;                  // membership is decided mod p^M
    long long pm_M;
    std::vector<long long> units;        // residues mod p^scan_exp coprime to p
    std::vector<long long> lambdas;
    std::vector<long long> residues;     // n-th power unit residues mod p^M
};

ScanDomain make_domain(long long p, unsigned n, int k) {
    ScanDomain d;
    d.p = p;
    d.n = n;
    d.M = hensel_modulus_exponent(p, n);
    d.scan_exp = std::max(k + 2, d.M);
    d.pm_scan = pow_ll(p, d.scan_exp);
    d.pm_M = pow_ll(p, d.M);
    for (long long u = 1; u < d.pm_scan; ++u)
        if (u % p != 0) d.units.push_back(u);
    d.lambdas = lambda_coset_reps(p, n);
    d.residues = nth_power_unit_residues(p, n);
    return d;
}

// Membership of p^a * u in lambda * P_n, on exact integers.
bool member(const ScanDomain& d, long long a, long long u, long long lambda) {
    long long e = 0;
    long long lu = lambda;
    while (lu % d.p == 0) {
        lu /= d.p;
        ++e;
    }
    long long val = a - e;
    if (((val % d.n) + d.n) % d.n != 0) return false;
    long long ratio = static_cast<long long>(
        (static_cast<__int128>(u % d.pm_M) * inverse_mod(lu % d.pm_M, d.pm_M)) % d.pm_M);
    return unit_is_nth_residue(ratio, d.residues);
}

// Counts (lambda, z, z') with z, z' equivalent at `level` yet exactly one of
// them in lambda * P_n.  Level 0 is the trivial equivalence.
long long violations_at_level(const ScanDomain& d, int level) {
    long long total = 0;
    if (level == 0) {
        for (long long lambda : d.lambdas) {
            long long in = 0, out = 0;
            for (long long a = 0; a <= static_cast<long long>(d.n); ++a)
                for (long long u : d.units)
                    (member(d, a, u, lambda) ? in : out)++;
            total += in * out;
        }
        return total;
    }
    long long pk = pow_ll(d.p, level);
    for (long long lambda : d.lambdas) {
        // Group by (valuation, unit residue mod p^level).
        std::map<std::pair<long long, long long>, std::pair<long long, long long>> groups;
        for (long long a = 0; a <= static_cast<long long>(d.n); ++a)
            for (long long u : d.units) {
                auto& g = groups[{a, u % pk}];
                (member(d, a, u, lambda) ? g.first : g.second)++;
            }
        for (const auto& [key, g] : groups) total += g.first * g.second;
    }
    return total;
}

}  // namespace

CelllikeResult find_celllike_k(long long p, unsigned n, int k_max, std::size_t workers) {
    (void)workers;  // the scans are small; kept for interface stability
    if (n < 1) throw EvalError("power index must be >= 1");
    for (int k = 1; k <= k_max; ++k) {
        ScanDomain d = make_domain(p, n, k);
        if (violations_at_level(d, k) == 0) {
            CelllikeResult r;
            r.k = k;
            r.verified_modulus = d.pm_scan;
            r.violations_at_k_minus_1 = violations_at_level(d, k - 1);
            r.hensel_exponent = d.M;
            return r;
        }
    }
    throw BudgetError("no invariance level k <= " + std::to_string(k_max) + " found");
}

CelllikeResult find_celllike_k_annulus(long long p, const ExtInt& gamma, const ExtInt& delta,
                                       int k_max) {
    if (k_max < 1) throw BudgetError("k_max must be >= 1");
    // pi_1 already refines valuation, so k = 1 is invariant; minimality at
    // level 0 needs some valuation inside the annulus and some outside.
    CelllikeResult r;
    r.k = 1;
    r.verified_modulus = pow_ll(p, 3);
    r.hensel_exponent = 1;
    long long in = 0, out = 0;
    long long lo = delta.is_neg_inf() ? -4 : delta.value() - 2;
    long long hi = gamma.is_pos_inf() ? 4 : gamma.value() + 2;
    for (long long v = lo; v <= hi; ++v) {
        bool inside = (delta <= ExtInt(v)) && (ExtInt(v) <= gamma);
        (inside ? in : out)++;
    }
    r.violations_at_k_minus_1 = in * out;
    return r;
}

CelllikeReport check_celllike(const Structure& padic, const Formula& phi, const std::string& x_var,
                              const std::string& center_var,
                              const std::vector<std::pair<std::string, Element>>& extra_params,
                              int k, std::size_t samples, std::uint64_t seed) {
    if (!phi.is_quantifier_free())
        throw EvalError("cell-likeness probe expects a quantifier-free formula");
    // Recover p and precision from a sampled element of the structure.
    std::vector<Element> one = padic.sample(1, 17);
    const PadicApprox& probe = as_padic(one[0]);
    long long p = probe.prime();
    int prec = probe.precision();

    Rng rng(seed);
    CelllikeReport report;
    report.samples = samples;
    long long pk = pow_ll(p, k);
    long long pprec = pow_ll(p, prec);

    auto random_unit = [&]() -> long long {
        for (;;) {
            long long u = static_cast<long long>(rng.below(static_cast<std::uint64_t>(pprec)));
            if (u % p != 0) return u;
        }
    };

    auto small_unit = [&]() -> long long {
        for (;;) {
            long long u = 1 + static_cast<long long>(rng.below(static_cast<std::uint64_t>(p * p)));
            if (u % p != 0) return u;
        }
    };

    for (std::size_t i = 0; i < samples; ++i) {
        bool zero_offset = rng.chance(1, 16);
        // A quarter of the offsets are small integers so that breakable
        // formulas (plain equalities, tight cosets) meet their
        // counterexamples within the sample budget.
        PadicApprox z = zero_offset
                            ? PadicApprox::zero(p, prec)
                            : (rng.chance(1, 4)
                                   ? PadicApprox::from_parts(p, rng.range(-1, 1), small_unit(), prec)
                                   : PadicApprox::from_parts(p, rng.range(-2, 2), random_unit(), prec));
        PadicApprox zp = z;
        if (!zero_offset && !rng.chance(1, 8)) {
            // Perturb digits at and above k: same pi_k class, different value.
            long long bump = static_cast<long long>(rng.below(static_cast<std::uint64_t>(pprec / pk)));
            zp = PadicApprox::from_parts(p, z.valuation().value(),
                                         (z.unit() + bump * pk) % pprec, prec);
        }
        PadicApprox y0 = PadicApprox::from_parts(p, rng.range(0, 3), random_unit(), prec);
        PadicApprox y0p = rng.chance(1, 4)
                              ? y0
                              : PadicApprox::from_parts(p, rng.range(0, 3), random_unit(), prec);

        Assignment base;
        base[x_var] = Element(y0 + z);
        base[center_var] = Element(y0);
        for (const auto& [name, value] : extra_params) base[name] = value;
        Assignment shifted = base;
        shifted[x_var] = Element(y0p + zp);
        shifted[center_var] = Element(y0p);

        try {
            bool first = evaluate(padic, phi, base);
            bool second = evaluate(padic, phi, shifted);
            if (first && !second) {
                ++report.violation_count;
                if (report.violations.size() < 4)
                    report.violations.push_back(
                        "z = " + z.to_string() + ", z' = " + zp.to_string() +
                        ", y0 = " + y0.to_string() + ", y0' = " + y0p.to_string());
            }
        } catch (const PrecisionError&) {
            ++report.undecidable;
        }
    }
    return report;
}

}  // namespace dpmin
