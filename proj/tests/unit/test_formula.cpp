#include "doctest.h"

#include "dpmin/errors.hpp"
#include "dpmin/formula.hpp"
#include "dpmin/rng.hpp"
#include "dpmin/structure.hpp"

using namespace dpmin;

namespace {

Signature qlex_sig() { return make_qlex()->sig(); }
Signature dlo_sig() { return make_simple_dlo()->sig(); }

// Random qlex formulas for round-trip and substitution properties.
Term random_term(Rng& rng, int depth) {
    if (depth == 0) {
        switch (rng.below(4)) {
            case 0: return Term::variable("x");
            case 1: return Term::variable("y");
            case 2: return Term::zero();
            default: return Term::pair_const(Rat(rng.range(-3, 3)), Rat(rng.range(-3, 3), 2));
        }
    }
    switch (rng.below(3)) {
        case 0: return Term::sum(random_term(rng, depth - 1), random_term(rng, depth - 1));
        case 1: {
            long long num = rng.range(-3, 3);
            if (num == 0) num = 2;
            return Term::scale(Rat(num, rng.range(1, 3)), random_term(rng, depth - 1));
        }
        default: return Term::flip(random_term(rng, depth - 1));
    }
}

Formula random_formula(Rng& rng, int depth) {
    if (depth == 0) {
        Term a = random_term(rng, 1), b = random_term(rng, 1);
        return rng.chance(1, 2) ? Formula::less(a, b) : Formula::eq(a, b);
    }
    switch (rng.below(5)) {
        case 0: return Formula::negation(random_formula(rng, depth - 1));
        case 1:
            return Formula::conjunction(
                {random_formula(rng, depth - 1), random_formula(rng, depth - 1)});
        case 2:
            return Formula::disjunction(
                {random_formula(rng, depth - 1), random_formula(rng, depth - 1)});
        case 3: return Formula::exists("z", random_formula(rng, depth - 1));
        default: return Formula::forall("w", random_formula(rng, depth - 1));
    }
}

}  // namespace

TEST_CASE("parse builds the documented trees") {
    Signature sig = qlex_sig();
    Formula f = parse_formula("(1/2)*x + f(y) < z", sig);
    REQUIRE(f.kind() == Formula::Kind::Atomic);
    const Atom& a = f.atom_ref();
    CHECK(a.kind == AtomKind::Less);
    CHECK(a.args[0].kind() == Term::Kind::Sum);
    CHECK(a.args[0].left().kind() == Term::Kind::Scale);
    CHECK(a.args[0].left().rat_value() == Rat(1, 2));
    CHECK(a.args[0].right() == Term::flip(Term::variable("y")));
    CHECK(a.args[1] == Term::variable("z"));

    Formula q = parse_formula("E x. (y < x & x < z)", sig);
    REQUIRE(q.kind() == Formula::Kind::Exists);
    CHECK(q.bound_var() == "x");
    CHECK(free_variables(q) == std::set<std::string>{"y", "z"});
}

TEST_CASE("parse reports the error position") {
    try {
        parse_formula("x <", dlo_sig());
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 3);
    }
    CHECK_THROWS_AS(parse_formula("P(x)", dlo_sig()), ParseError);       // unknown symbol
    CHECK_THROWS_AS(parse_formula("lt1(x)", make_pair_dlo()->sig()), ParseError);  // arity
}

TEST_CASE("print/parse round trip on random formulas") {
    Signature sig = qlex_sig();
    Rng rng(2024);
    for (int i = 0; i < 300; ++i) {
        Formula f = random_formula(rng, 3);
        Formula reparsed = parse_formula(print_formula(f), sig);
        CHECK(reparsed == f);
    }
}

TEST_CASE("substitution: direct, bound, capture-avoiding") {
    Signature sig = qlex_sig();
    Formula f = parse_formula("x < y", sig);
    CHECK(print_formula(substitute(f, "x", Term::flip(Term::variable("z")))) == "f(z) < y");

    Formula q = parse_formula("E x. x < y", sig);
    CHECK(substitute(q, "x", Term::variable("z")) == q);  // bound occurrence

    Formula renamed = substitute(q, "y", Term::variable("x"));
    CHECK(print_formula(renamed) == "E x'. x' < x");
}

TEST_CASE("substitution lemma holds on random formulas") {
    StructureHandle s = make_qlex();
    Rng rng(77);
    for (int i = 0; i < 120; ++i) {
        // Exact quantifier evaluation supports one quantifier level, so the
        // samples are quantifier-free bodies optionally wrapped once.
        Formula f = random_formula(rng, 2);
        while (!f.is_quantifier_free()) f = random_formula(rng, 2);
        if (rng.chance(1, 3)) f = Formula::exists("z", f);
        Term t = random_term(rng, 1);
        // t's variables must be assigned; x, y cover them.
        Assignment asg;
        asg["x"] = Element(LexPoint{Rat(rng.range(-4, 4)), Rat(rng.range(-4, 4))});
        asg["y"] = Element(LexPoint{Rat(rng.range(-4, 4)), Rat(rng.range(-4, 4))});
        Assignment extended = asg;
        extended["x"] = s->term_value(t, asg);
        CHECK(evaluate(*s, substitute(f, "x", t), asg) == evaluate(*s, f, extended));
    }
}

TEST_CASE("disjuncts flatten nested disjunctions") {
    Signature sig = make_pair_dlo()->sig();
    Formula f = parse_formula("lt1(x, a) | (lt1(b, x) | lt2(x, c))", sig);
    auto parts = disjuncts(f);
    REQUIRE(parts.size() == 3);
    CHECK(print_formula(parts[0]) == "lt1(x, a)");
    CHECK(print_formula(parts[1]) == "lt1(b, x)");
    CHECK(print_formula(parts[2]) == "lt2(x, c)");

    Formula single = parse_formula("lt1(x, a)", sig);
    CHECK(disjuncts(single).size() == 1);

    Formula conj = parse_formula("lt1(x, a) & lt1(b, x)", sig);
    auto cparts = disjuncts(conj);
    REQUIRE(cparts.size() == 1);
    CHECK(cparts[0] == conj);
}

TEST_CASE("disjuncts rejoin to an equivalent formula") {
    StructureHandle s = make_qlex();
    Rng rng(99);
    for (int i = 0; i < 80; ++i) {
        Formula f = random_formula(rng, 2);
        if (!f.is_quantifier_free()) continue;
        Formula rejoined = Formula::disjunction(disjuncts(f));
        Assignment asg;
        asg["x"] = Element(LexPoint{Rat(rng.range(-4, 4)), Rat(rng.range(-4, 4))});
        asg["y"] = Element(LexPoint{Rat(rng.range(-4, 4)), Rat(rng.range(-4, 4))});
        CHECK(evaluate(*s, rejoined, asg) == evaluate(*s, f, asg));
    }
}

TEST_CASE("variable normalization removes shadowing") {
    Signature sig = qlex_sig();
    Formula f = parse_formula("E x. (x < y & (E x. x < z))", sig);
    Formula norm = normalize_variables(f);
    // Inner bound variable renamed; semantics of the print form unchanged.
    CHECK(print_formula(norm) == "E x. x < y & (E x'. x' < z)");
    CHECK(free_variables(norm) == free_variables(f));
}

TEST_CASE("evaluation is deterministic") {
    StructureHandle s = make_qlex();
    Formula f = parse_formula("E x. ((0,0) < x & x < (0,1))", s->sig());
    for (int i = 0; i < 5; ++i) CHECK(evaluate(*s, f, {}) == true);
}
