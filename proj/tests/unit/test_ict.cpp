#include "doctest.h"

#include "dpmin/errors.hpp"
#include "dpmin/ict.hpp"
#include "dpmin/structure.hpp"

using namespace dpmin;

namespace {

Element pp(long long a, long long b) { return Element(PairPoint{Rat(a), Rat(b)}); }
Element pph(const Rat& a, const Rat& b) { return Element(PairPoint{a, b}); }

ParamFormula coord1_interval(const Structure& s) {
    return {parse_formula("lt1(y1, x) & lt1(x, y2)", s.sig()), "x", {"y1", "y2"}};
}
ParamFormula coord2_interval(const Structure& s) {
    return {parse_formula("lt2(y1, x) & lt2(x, y2)", s.sig()), "x", {"y1", "y2"}};
}

// The worked 2x2 pattern: coordinate-1 intervals (0,1), (2,3) against
// coordinate-2 intervals (0,1), (2,3).
ICTCertificate worked_2x2(const Structure& s) {
    ICTCertificate cert;
    cert.structure = s.name();
    cert.phi = coord1_interval(s);
    cert.psi = coord2_interval(s);
    cert.a_params = {{pp(0, 0), pp(1, 0)}, {pp(2, 0), pp(3, 0)}};
    cert.b_params = {{pp(0, 0), pp(0, 1)}, {pp(0, 2), pp(0, 3)}};
    Rat h(1, 2), f(5, 2);
    cert.witnesses = {{pph(h, h), pph(h, f)}, {pph(f, h), pph(f, f)}};
    return cert;
}

// Disjoint strip pattern of any square size: a_i = (4i, 4i+1) on coordinate
// 1, b_j likewise on coordinate 2, witnesses at the grid intersections.
ICTCertificate strips(const Structure& s, std::size_t m, std::size_t n) {
    ICTCertificate cert;
    cert.structure = s.name();
    cert.phi = coord1_interval(s);
    cert.psi = coord2_interval(s);
    for (std::size_t i = 0; i < m; ++i)
        cert.a_params.push_back({pp(4 * i, 0), pp(4 * i + 1, 0)});
    for (std::size_t j = 0; j < n; ++j)
        cert.b_params.push_back({pp(0, 4 * j), pp(0, 4 * j + 1)});
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<Element> row;
        for (std::size_t j = 0; j < n; ++j)
            row.push_back(pph(Rat(4 * static_cast<long long>(i)) + Rat(1, 2),
                              Rat(4 * static_cast<long long>(j)) + Rat(1, 2)));
        cert.witnesses.push_back(std::move(row));
    }
    return cert;
}

}  // namespace

TEST_CASE("certificate checking: worked example, break it, trivial size") {
    StructureHandle s = make_pair_dlo();
    ICTCertificate cert = worked_2x2(*s);
    CHECK(check_ict_certificate(*s, cert));

    ICTCertificate broken = cert;
    broken.witnesses[0][0] = pph(Rat(5, 2), Rat(1, 2));  // lands in the second row's strip
    std::string why;
    CHECK_FALSE(check_ict_certificate(*s, broken, &why));
    CHECK(why.find("cell (1, 1)") != std::string::npos);

    ICTCertificate tiny;
    tiny.structure = s->name();
    tiny.phi = coord1_interval(*s);
    tiny.psi = coord2_interval(*s);
    tiny.a_params = {{pp(0, 0), pp(1, 0)}};
    tiny.b_params = {{pp(0, 0), pp(0, 1)}};
    tiny.witnesses = {{pph(Rat(1, 2), Rat(1, 2))}};
    CHECK(check_ict_certificate(*s, tiny));
}

TEST_CASE("search finds a 4x4 pattern on the two-order plane") {
    StructureHandle s = make_pair_dlo();
    std::vector<ElementTuple> pool_a, pool_b;
    for (long long k = 0; k < 6; ++k) {
        pool_a.push_back({pp(2 * k, 0), pp(2 * k + 1, 0)});
        pool_b.push_back({pp(0, 2 * k), pp(0, 2 * k + 1)});
    }
    SearchOutcome outcome = search_ict(*s, coord1_interval(*s), coord2_interval(*s), pool_a,
                                       pool_b, 4, 4, SearchBudget{}, SearchMode::Exhaustive);
    REQUIRE(outcome.certificate.has_value());
    CHECK(check_ict_certificate(*s, *outcome.certificate));
    CHECK(outcome.certificate->a_params.size() == 4);

    // Determinism: a rerun returns the identical certificate.
    SearchOutcome again = search_ict(*s, coord1_interval(*s), coord2_interval(*s), pool_a,
                                     pool_b, 4, 4, SearchBudget{}, SearchMode::Exhaustive);
    REQUIRE(again.certificate.has_value());
    CHECK(serialize_certificate(*again.certificate) ==
          serialize_certificate(*outcome.certificate));
}

TEST_CASE("exhaustive search proves absence over a dense-order pool") {
    StructureHandle s = make_simple_dlo();
    ParamFormula interval{parse_formula("y1 < x & x < y2", s->sig()), "x", {"y1", "y2"}};
    std::vector<ElementTuple> pool;
    for (long long i = 0; i < 6; ++i)
        for (long long j = i + 1; j < 6; ++j)
            pool.push_back({Element(Rat(i)), Element(Rat(j))});
    REQUIRE(pool.size() == 15);
    SearchBudget budget;
    budget.max_pool = 15;
    SearchOutcome outcome =
        search_ict(*s, interval, interval, pool, pool, 2, 2, budget, SearchMode::Exhaustive);
    CHECK_FALSE(outcome.certificate.has_value());
    CHECK(outcome.exhaustive);
    CHECK(outcome.selections_tried == 105 * 105);
}

TEST_CASE("search with an empty pool reports absence") {
    StructureHandle s = make_pair_dlo();
    SearchOutcome outcome = search_ict(*s, coord1_interval(*s), coord2_interval(*s), {}, {}, 2, 2,
                                       SearchBudget{}, SearchMode::Exhaustive);
    CHECK_FALSE(outcome.certificate.has_value());
    CHECK(outcome.exhaustive);
}

TEST_CASE("budgets bound the search") {
    StructureHandle s = make_pair_dlo();
    SearchBudget tight;
    tight.max_rows = 2;
    CHECK_THROWS_AS(search_ict(*s, coord1_interval(*s), coord2_interval(*s), {}, {}, 3, 3, tight,
                               SearchMode::Exhaustive),
                    BudgetError);
}

TEST_CASE("disjunct refinement keeps all rows when one disjunct carries the pattern") {
    StructureHandle s = make_pair_dlo();
    // phi = (interval on coordinate 1) | (second interval, instantiated
    // empty: its endpoints are reversed), so the pattern lives entirely in
    // the first disjunct.
    ParamFormula phi{
        parse_formula("(lt1(y1, x) & lt1(x, y2)) | (lt1(y3, x) & lt1(x, y4))", s->sig()),
        "x",
        {"y1", "y2", "y3", "y4"}};
    ICTCertificate cert = strips(*s, 4, 4);
    cert.phi = phi;
    for (auto& tuple : cert.a_params) {
        tuple.push_back(pp(100, 0));
        tuple.push_back(pp(99, 0));
    }
    REQUIRE(check_ict_certificate(*s, cert));

    RefineOutcome refined = refine_disjunct(*s, cert);
    CHECK(refined.disjunct_index == 1);
    CHECK(refined.rows_retained == 4);
    CHECK(check_ict_certificate(*s, refined.refined));
    CHECK(!refined.note.empty());
}

TEST_CASE("single-disjunct refinement is the identity choice") {
    StructureHandle s = make_pair_dlo();
    ICTCertificate cert = strips(*s, 2, 2);
    RefineOutcome refined = refine_disjunct(*s, cert);
    CHECK(refined.disjunct_index == 1);
    CHECK(refined.rows_retained == 2);
}

TEST_CASE("refinement fails loudly when rows need different disjuncts") {
    StructureHandle s = make_pair_dlo();
    // Co-intervals of staggered intervals [0,2] and [1,3]: the first row
    // escapes right (second disjunct), the second escapes left (first).
    ParamFormula phi{parse_formula("lt1(x, y1) | lt1(y2, x)", s->sig()), "x", {"y1", "y2"}};
    ParamFormula psi = coord2_interval(*s);
    ICTCertificate cert;
    cert.structure = s->name();
    cert.phi = phi;
    cert.psi = psi;
    cert.a_params = {{pp(0, 0), pp(2, 0)}, {pp(1, 0), pp(3, 0)}};
    cert.b_params = {{pp(0, 0), pp(0, 1)}, {pp(0, 4), pp(0, 5)}};
    cert.witnesses = {{pph(Rat(5, 2), Rat(1, 2)), pph(Rat(5, 2), Rat(9, 2))},
                      {pph(Rat(1, 2), Rat(1, 2)), pph(Rat(1, 2), Rat(9, 2))}};
    REQUIRE(check_ict_certificate(*s, cert));
    CHECK_THROWS_AS(refine_disjunct(*s, cert), EvalError);
}

TEST_CASE("fusion turns a 4x4 pattern into a single-formula 2x2 pattern") {
    StructureHandle s = make_pair_dlo();
    ICTCertificate cert = strips(*s, 4, 4);
    REQUIRE(check_ict_certificate(*s, cert));
    ICTCertificate fused = fuse_single_formula(*s, cert);
    CHECK(fused.a_params.size() == 2);
    CHECK(fused.b_params.size() == 2);
    CHECK(fused.phi.formula == fused.psi.formula);
    CHECK(check_ict_certificate(*s, fused));

    ICTCertificate small = fuse_single_formula(*s, strips(*s, 2, 2));
    CHECK(small.a_params.size() == 1);
    CHECK(check_ict_certificate(*s, small));

    ICTCertificate broken = strips(*s, 4, 4);
    broken.witnesses[0][0] = pph(Rat(100), Rat(100));
    CHECK_THROWS_AS(fuse_single_formula(*s, broken), EvalError);
    CHECK_THROWS_AS(fuse_single_formula(*s, strips(*s, 3, 3)), EvalError);
}

TEST_CASE("breakpoint profiles: two coordinates, one order, constant") {
    StructureHandle pair = make_pair_dlo();
    std::vector<ElementTuple> seq;
    for (long long i = 0; i <= 5; ++i) seq.push_back({pp(i, i)});
    std::vector<DeltaFormula> delta = {
        {parse_formula("lt1(x, c)", pair->sig()), {"x"}, "c"},
        {parse_formula("lt2(x, c)", pair->sig()), {"x"}, "c"}};
    BreakpointProfile profile =
        breakpoint_profile(*pair, seq, pph(Rat(1, 2), Rat(5, 2)), delta);
    REQUIRE(profile.block_count() == 3);
    CHECK(profile.blocks[0] == std::pair<std::size_t, std::size_t>{0, 1});
    CHECK(profile.blocks[1] == std::pair<std::size_t, std::size_t>{1, 3});
    CHECK(profile.blocks[2] == std::pair<std::size_t, std::size_t>{3, 6});

    StructureHandle dlo = make_simple_dlo();
    std::vector<ElementTuple> seq2;
    for (long long i = 0; i <= 5; ++i) seq2.push_back({Element(Rat(i))});
    std::vector<DeltaFormula> delta2 = {{parse_formula("x < c", dlo->sig()), {"x"}, "c"}};
    CHECK(breakpoint_profile(*dlo, seq2, Element(Rat(5, 2)), delta2).block_count() == 2);

    std::vector<ElementTuple> constant(4, ElementTuple{Element(Rat(1))});
    CHECK(breakpoint_profile(*dlo, constant, Element(Rat(5, 2)), delta2).block_count() == 1);
}

TEST_CASE("inp certificates: disjoint strips verify, overlaps fail") {
    StructureHandle s = make_pair_dlo();
    auto make_inp = [&](bool overlap) {
        InpCertificate cert;
        cert.structure = s->name();
        cert.phi = coord1_interval(*s);
        cert.psi = coord2_interval(*s);
        cert.k0 = cert.k1 = 2;
        for (long long i = 0; i < 3; ++i) {
            Rat lo = overlap ? Rat(2 * i) : Rat(4 * i);
            Rat hi = overlap ? lo + 3 : lo + 1;
            cert.a_params.push_back({pph(lo, Rat(0)), pph(hi, Rat(0))});
            cert.b_params.push_back({pp(0, 4 * i), pp(0, 4 * i + 1)});
        }
        for (long long i = 0; i < 3; ++i) {
            std::vector<Element> row;
            for (long long j = 0; j < 3; ++j) {
                Rat u = as_pair(cert.a_params[i][0]).first + Rat(1, 2);
                row.push_back(pph(u, Rat(4 * j) + Rat(1, 2)));
            }
            cert.witnesses.push_back(std::move(row));
        }
        return cert;
    };

    CHECK(check_inp_certificate(*s, make_inp(false), SearchBudget{}));
    std::string why;
    CHECK_FALSE(check_inp_certificate(*s, make_inp(true), SearchBudget{}, &why));
    CHECK(why.find("jointly satisfiable") != std::string::npos);

    // Single consistent pair with k0 = k1 = 2: inconsistency is vacuous.
    InpCertificate single;
    single.structure = s->name();
    single.phi = coord1_interval(*s);
    single.psi = coord2_interval(*s);
    single.k0 = single.k1 = 2;
    single.a_params = {{pp(0, 0), pp(1, 0)}};
    single.b_params = {{pp(0, 0), pp(0, 1)}};
    single.witnesses = {{pph(Rat(1, 2), Rat(1, 2))}};
    CHECK(check_inp_certificate(*s, single, SearchBudget{}));
    // With k0 = 1 the lone phi instance must itself be unsatisfiable; it
    // is not, so the certificate is rejected.
    single.k0 = 1;
    CHECK_FALSE(check_inp_certificate(*s, single, SearchBudget{}));
}

TEST_CASE("certificates survive a serialization round trip") {
    StructureHandle s = make_pair_dlo();
    ICTCertificate cert = strips(*s, 3, 2);
    std::string text = serialize_certificate(cert);
    ICTCertificate back = deserialize_certificate(text);
    CHECK(back.structure == cert.structure);
    CHECK(back.phi.formula == cert.phi.formula);
    CHECK(check_ict_certificate(*s, back));
    CHECK(serialize_certificate(back) == text);
}
