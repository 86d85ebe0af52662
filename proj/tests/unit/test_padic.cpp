#include "doctest.h"

#include <map>
#include <set>

#include "dpmin/errors.hpp"
#include "dpmin/padic_model.hpp"
#include "dpmin/rng.hpp"
#include "dpmin/structure.hpp"

using namespace dpmin;

namespace {

PadicApprox pa(long long p, long long val, long long unit, int prec = 12) {
    return PadicApprox::from_parts(p, val, unit, prec);
}

PadicApprox from_int(long long p, long long n, int prec = 12) {
    return PadicApprox::from_integer(p, BigInt(n), prec);
}

// Test-side oracle, independent of the library's residue machinery: a unit
// u < p^B is an n-th power in Z_p iff some w < p^B has w^n = u mod p^B, for
// B comfortably above the lifting threshold.  Minimal invariance level =
// least k such that congruence mod p^k determines that membership.
int oracle_min_k_for_squares(long long p, int B) {
    long long pb = 1;
    for (int i = 0; i < B; ++i) pb *= p;
    std::set<long long> squares;
    for (long long w = 1; w < pb; ++w) {
        if (w % p == 0) continue;
        squares.insert((w * w) % pb);
    }
    for (int k = 1; k < B; ++k) {
        long long pk = 1;
        for (int i = 0; i < k; ++i) pk *= p;
        std::map<long long, std::pair<bool, bool>> classes;  // residue -> (saw sq, saw non)
        bool mixed = false;
        for (long long u = 1; u < pb && !mixed; ++u) {
            if (u % p == 0) continue;
            auto& c = classes[u % pk];
            (squares.count(u) ? c.first : c.second) = true;
            if (c.first && c.second) mixed = true;
        }
        if (!mixed) return k;
    }
    return B;
}

}  // namespace

TEST_CASE("arithmetic respects valuations and precision") {
    PadicApprox x = from_int(3, 18);  // 2 * 3^2
    CHECK(x.valuation() == ExtInt(2));
    CHECK(x.unit_mod(1) == 2);

    // v(x*y) = v(x)+v(y); v(x+y) = min when valuations differ.
    PadicApprox a = pa(5, 1, 2), b = pa(5, 3, 4);
    CHECK((a * b).valuation() == ExtInt(4));
    CHECK((a + b).valuation() == ExtInt(1));

    // Identical representations subtract to exact zero.
    CHECK((a - a).is_zero());
    CHECK((a - a).valuation().is_pos_inf());

    // Full cancellation of all stored digits is fuzzy, and valuation queries
    // refuse to guess.
    PadicApprox u = pa(3, 0, 1, 4);
    PadicApprox w = pa(3, 0, 1 + 81 - 81 % 81, 4);  // same residue mod 3^4
    CHECK(u.equal_at_precision(w));
    PadicApprox c = pa(3, 0, 1, 2) + (-pa(3, 0, 10, 4));  // 1 - 10 = -9 known mod 9 only
    CHECK(c.is_fuzzy());
    CHECK_THROWS_AS((void)c.valuation(), PrecisionError);
}

TEST_CASE("18 + 9 loses exactly the cancelled digits") {
    PadicApprox x = from_int(3, 18), y = from_int(3, 9);
    PadicApprox s = x + y;  // 27 = 3^3
    CHECK(s.valuation() == ExtInt(3));
    CHECK(s.unit_mod(1) == 1);
}

TEST_CASE("rv quotient map examples") {
    // p = 3: 4 and 1 agree at level 1, not at level 2.
    CHECK(pi_k(from_int(3, 4), 1) == pi_k(from_int(3, 1), 1));
    CHECK(pi_k(from_int(3, 4), 2) != pi_k(from_int(3, 1), 2));
    CHECK(pi_k(PadicApprox::zero(3, 12), 1).infinite);
    CHECK_THROWS_AS(pi_k(pa(3, 0, 1, 2), 3), PrecisionError);
}

TEST_CASE("rv quotients refine valuation and each other") {
    Rng rng(42);
    StructureHandle s = make_padic(3, 12);
    auto pool = s->sample(400, 9);
    for (std::size_t i = 0; i + 1 < pool.size(); i += 2) {
        const PadicApprox& x = as_padic(pool[i]);
        const PadicApprox& y = as_padic(pool[i + 1]);
        if (!x.is_regular() || !y.is_regular()) continue;
        for (int k = 1; k < 4; ++k) {
            if (pi_k(x, k + 1) == pi_k(y, k + 1)) CHECK(pi_k(x, k) == pi_k(y, k));
            if (pi_k(x, 1) == pi_k(y, 1)) CHECK(x.valuation() == y.valuation());
        }
    }
    (void)rng;
}

TEST_CASE("valuation biconditional: documented triples") {
    PadicApprox zero3 = PadicApprox::zero(3, 12);
    CHECK(check_prop61(from_int(3, 4), from_int(3, 1), zero3, 1));
    CHECK(check_prop61(from_int(3, 4), from_int(3, 1), zero3, 2));
    // x = y distinct from z: both sides trivially true.
    CHECK(check_prop61(from_int(3, 7), from_int(3, 7), zero3, 3));
    // x = z violates the precondition.
    CHECK_THROWS_AS(check_prop61(zero3, from_int(3, 1), zero3, 1), EvalError);
}

TEST_CASE("valuation biconditional holds on seeded triples, all primes") {
    for (long long p : {2LL, 3LL, 5LL}) {
        StructureHandle s = make_padic(p, 12);
        auto pool = s->sample(3 * 2000, 1000 + static_cast<std::uint64_t>(p));
        for (int k = 1; k <= 4; ++k) {
            std::size_t decidable = 0;
            for (std::size_t t = 0; t < 2000; ++t) {
                try {
                    bool ok = check_prop61(as_padic(pool[3 * t]), as_padic(pool[3 * t + 1]),
                                           as_padic(pool[3 * t + 2]), k);
                    ++decidable;
                    CHECK(ok);
                } catch (const PrecisionError&) {
                } catch (const EvalError&) {
                }
            }
            CHECK(decidable > 1000);  // most random triples are decidable
        }
    }
}

TEST_CASE("annulus and power coset membership") {
    // Ann(0, 2, 0) & Pow_{2,1}(0) over Q_3: 1 is in (v = 0, square unit),
    // 2 is out (non-residue).
    CellSpec cell;
    cell.n = 2;
    cell.lambda = 1;
    cell.center = PadicApprox::zero(3, 12);
    cell.gamma = ExtInt(2);
    cell.delta = ExtInt(0);
    CHECK(in_cell(from_int(3, 1), cell));
    CHECK_FALSE(in_cell(from_int(3, 2), cell));
    CHECK_FALSE(in_cell(from_int(3, 27), cell));  // v = 3 outside the annulus

    // Unbounded annulus accepts everything.
    CHECK(in_annulus(from_int(3, 5), ExtInt::pos_inf(), ExtInt::neg_inf()));
    CHECK(in_annulus(PadicApprox::zero(3, 12), ExtInt::pos_inf(), ExtInt::neg_inf()));

    // lambda = 0 reads as the singleton {center}.
    CHECK(in_power_coset(PadicApprox::zero(3, 12), 2, 0));
    CHECK_FALSE(in_power_coset(from_int(3, 1), 2, 0));
}

TEST_CASE("hensel level discovery matches the frozen table") {
    // k values derived independently from the unit-group structure.
    struct Row {
        long long p;
        unsigned n;
        int k;
    };
    const Row expected[] = {{2, 2, 3}, {2, 3, 1}, {2, 4, 4}, {3, 2, 1}, {3, 3, 2},
                            {3, 4, 1}, {5, 2, 1}, {5, 3, 1}, {5, 4, 1}};
    for (const Row& row : expected) {
        CelllikeResult res = find_celllike_k(row.p, row.n, 8);
        CAPTURE(row.p);
        CAPTURE(row.n);
        CHECK(res.k == row.k);
        CHECK(res.violations_at_k_minus_1 > 0);
        CHECK(res.verified_modulus >= pow_ll(row.p, res.k + 2));
    }
}

TEST_CASE("square levels agree with the independent residue oracle") {
    CHECK(oracle_min_k_for_squares(3, 4) == find_celllike_k(3, 2, 8).k);
    CHECK(oracle_min_k_for_squares(2, 6) == find_celllike_k(2, 2, 8).k);
    CHECK(oracle_min_k_for_squares(3, 4) == 1);
    CHECK(oracle_min_k_for_squares(2, 6) == 3);
}

TEST_CASE("annulus-only sets need only the valuation level") {
    CelllikeResult res = find_celllike_k_annulus(3, ExtInt(2), ExtInt(0), 8);
    CHECK(res.k == 1);
    CHECK(res.violations_at_k_minus_1 > 0);
}

TEST_CASE("coset representatives partition the units") {
    for (long long p : {2LL, 3LL, 5LL})
        for (unsigned n : {2u, 3u, 4u}) {
            auto reps = lambda_coset_reps(p, n);
            CHECK(!reps.empty());
            // Spot check: every sampled element lies in exactly one coset.
            StructureHandle s = make_padic(p, 12);
            auto pool = s->sample(64, 5);
            for (const auto& e : pool) {
                const PadicApprox& z = as_padic(e);
                if (!z.is_regular()) continue;
                int hits = 0;
                for (long long lambda : reps)
                    if (in_power_coset(z, n, static_cast<unsigned>(lambda))) ++hits;
                CHECK(hits == 1);
            }
        }
}

TEST_CASE("cell-likeness probe: invariant formulas pass, equality fails") {
    StructureHandle s = make_padic(3, 12);
    // The documented cell with its derived level.
    Formula cell = parse_formula("Ann(x + (-1)*y0, 2, 0) & Pow(2, 1, x + (-1)*y0)", s->sig());
    CelllikeReport r1 = check_celllike(*s, cell, "x", "y0", {}, 1, 10000, 77);
    CHECK(r1.ok());
    CHECK(r1.samples - r1.undecidable > 5000);

    // v(x - y0) = 0 is level-1 invariant.
    Formula vzero = parse_formula("vle(x + (-1)*y0, 1) & vle(1, x + (-1)*y0)", s->sig());
    CelllikeReport r2 = check_celllike(*s, vzero, "x", "y0", {}, 1, 10000, 78);
    CHECK(r2.ok());

    // Equality with an offset is not invariant at any level; the sampler is
    // biased toward small offsets so the counterexample appears.
    Formula eq = parse_formula("x = y0 + 1", s->sig());
    CelllikeReport r3 = check_celllike(*s, eq, "x", "y0", {}, 2, 10000, 79);
    CHECK_FALSE(r3.ok());

    // Explicit counterexample, independent of sampling: z = 1 vs z' = 1+p^k.
    Assignment base{{"x", Element(from_int(3, 1))}, {"y0", Element(PadicApprox::zero(3, 12))}};
    Assignment shifted{{"x", Element(from_int(3, 4))}, {"y0", Element(PadicApprox::zero(3, 12))}};
    CHECK(pi_k(from_int(3, 1), 1) == pi_k(from_int(3, 4), 1));
    CHECK(evaluate(*s, eq, base));
    CHECK_FALSE(evaluate(*s, eq, shifted));
}

TEST_CASE("padic element literals parse") {
    StructureHandle s = make_padic(3, 12);
    Element e = s->parse_element("3^-2 * 7");
    CHECK(as_padic(e).valuation() == ExtInt(-2));
    CHECK(as_padic(e).unit_mod(2) == 7);
    CHECK(as_padic(s->parse_element("0")).is_zero());
    CHECK(as_padic(s->parse_element("18")).valuation() == ExtInt(2));
}
