#include "dpmin/qe_lex.hpp"

#include <algorithm>

#include "dpmin/errors.hpp"

namespace dpmin {

// ── NormalTerm algebra ──────────────────────────────────────────────────────

namespace {

void add_into(std::map<std::string, Rat>& dst, const std::map<std::string, Rat>& src, int sign) {
    for (const auto& [v, q] : src) {
        Rat& slot = dst[v];
        slot += sign > 0 ? q : -q;
        if (slot == 0) dst.erase(v);
    }
}

std::map<std::string, Rat> scaled_map(const std::map<std::string, Rat>& src, const Rat& q) {
    std::map<std::string, Rat> out;
    if (q == 0) return out;
    for (const auto& [v, c] : src) out[v] = c * q;
    return out;
}

}  // namespace

NormalTerm NormalTerm::operator+(const NormalTerm& o) const {
    NormalTerm out = *this;
    add_into(out.linear, o.linear, +1);
    add_into(out.flipped, o.flipped, +1);
    out.constant = lex_add(out.constant, o.constant);
    return out;
}

NormalTerm NormalTerm::operator-() const {
    NormalTerm out;
    out.linear = scaled_map(linear, Rat(-1));
    out.flipped = scaled_map(flipped, Rat(-1));
    out.constant = lex_neg(constant);
    return out;
}

NormalTerm NormalTerm::scaled(const Rat& q) const {
    NormalTerm out;
    out.linear = scaled_map(linear, q);
    out.flipped = scaled_map(flipped, q);
    out.constant = lex_scale(q, constant);
    return out;
}

NormalTerm NormalTerm::flipped_form() const {
    NormalTerm out;
    out.linear = flipped;   // f(f(x)) = x
    out.flipped = linear;
    out.constant = lex_flip(constant);
    return out;
}

NormalTerm normalize_term(const Term& t) {
    switch (t.kind()) {
        case Term::Kind::Variable: {
            NormalTerm out;
            out.linear[t.var_name()] = 1;
            return out;
        }
        case Term::Kind::Zero: return NormalTerm{};
        case Term::Kind::PairConst: {
            NormalTerm out;
            out.constant = LexPoint{t.pair_first(), t.pair_second()};
            return out;
        }
        case Term::Kind::Sum: return normalize_term(t.left()) + normalize_term(t.right());
        case Term::Kind::Scale: return normalize_term(t.operand()).scaled(t.rat_value());
        case Term::Kind::App:
            if (t.fn_name() == "f" && t.fn_args().size() == 1)
                return normalize_term(t.fn_args()[0]).flipped_form();
            throw EvalError("symbol not interpreted in group terms: " + t.fn_name());
        default: throw EvalError("rational constants are not group terms");
    }
}

Term denormalize(const NormalTerm& nt) {
    std::vector<Term> parts;
    for (const auto& [v, q] : nt.linear)
        parts.push_back(q == 1 ? Term::variable(v) : Term::scale(q, Term::variable(v)));
    for (const auto& [v, q] : nt.flipped)
        parts.push_back(q == 1 ? Term::flip(Term::variable(v))
                               : Term::scale(q, Term::flip(Term::variable(v))));
    if (nt.constant.first != 0 || nt.constant.second != 0 || parts.empty())
        parts.push_back(parts.empty() && nt.constant.first == 0 && nt.constant.second == 0
                            ? Term::zero()
                            : Term::pair_const(nt.constant.first, nt.constant.second));
    Term out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) out = Term::sum(out, parts[i]);
    return out;
}

// ── Formula helpers ─────────────────────────────────────────────────────────

Formula same_column_formula(const Term& a, const Term& b) {
    return Formula::disjunction(
        {Formula::eq(a, b),
         Formula::conjunction({Formula::less(a, b), Formula::less(Term::flip(a), Term::flip(b))}),
         Formula::conjunction({Formula::less(b, a), Formula::less(Term::flip(b), Term::flip(a))})});
}

Formula block_to_formula(const ExistsBlock& block) {
    Term x = Term::variable(block.var);
    std::vector<Formula> parts;
    if (block.lower_x) parts.push_back(Formula::less(denormalize(*block.lower_x), x));
    if (block.upper_x) parts.push_back(Formula::less(x, denormalize(*block.upper_x)));
    if (block.lower_f) parts.push_back(Formula::less(denormalize(*block.lower_f), Term::flip(x)));
    if (block.upper_f) parts.push_back(Formula::less(Term::flip(x), denormalize(*block.upper_f)));
    return Formula::exists(block.var, Formula::conjunction(std::move(parts)));
}

namespace {

Formula implies(Formula a, Formula b) {
    return Formula::disjunction({Formula::negation(std::move(a)), std::move(b)});
}

Formula leq(const Term& a, const Term& b) {
    return Formula::disjunction({Formula::less(a, b), Formula::eq(a, b)});
}

// The five-bullet conjunction, verbatim; conjuncts whose terms are missing
// (infinite bounds) are dropped.
Formula paper_rule(const ExistsBlock& block) {
    std::vector<Formula> bullets;
    std::optional<Term> s0, s1, t0, t1;
    if (block.lower_x) s0 = denormalize(*block.lower_x);
    if (block.upper_x) s1 = denormalize(*block.upper_x);
    if (block.lower_f) t0 = denormalize(*block.lower_f);
    if (block.upper_f) t1 = denormalize(*block.upper_f);

    if (s0 && s1) bullets.push_back(Formula::less(*s0, *s1));
    if (t0 && t1) bullets.push_back(Formula::less(*t0, *t1));

    if (s0 && s1) {
        std::vector<Formula> conclusion;
        if (t0) conclusion.push_back(leq(*t0, Term::flip(*s0)));
        if (t1) conclusion.push_back(leq(Term::flip(*s1), *t1));
        bullets.push_back(
            implies(same_column_formula(*s0, *s1), Formula::conjunction(std::move(conclusion))));
    }

    if (s0 && s1 && t0 && t1) {
        Formula not_phi_s = Formula::negation(same_column_formula(*s0, *s1));
        Formula phi_t0fs1 = same_column_formula(*t0, Term::flip(*s1));
        Formula phi_t1fs0 = same_column_formula(*t1, Term::flip(*s0));

        bullets.push_back(implies(
            Formula::conjunction({not_phi_s, Formula::negation(phi_t0fs1),
                                  Formula::negation(phi_t1fs0)}),
            Formula::conjunction({Formula::less(Term::flip(*s1), *t0), Formula::less(*t0, *t1),
                                  Formula::less(*t1, Term::flip(*s0))})));

        bullets.push_back(implies(
            Formula::conjunction({not_phi_s, phi_t0fs1}),
            Formula::conjunction({leq(*t0, Term::flip(*s1)), Formula::less(*t0, *t1)})));

        bullets.push_back(implies(
            Formula::conjunction({not_phi_s, phi_t1fs0}),
            Formula::conjunction({leq(Term::flip(*s0), *t1), Formula::less(*t0, *t1)})));
    }

    return Formula::conjunction(std::move(bullets));
}

// Column-geometry rule.  Endpoint terms of the two column intervals:
//   A0 = s0, A1 = s1          (x-range columns, [col s0, col s1])
//   B0 = f(t1), B1 = f(t0)    (f-range pulled back: [-col t1, -col t0])
// Missing endpoints are the corresponding infinities.
struct Endpoint {
    std::optional<Term> term;  // nullopt = infinite on its side
    // Second-coordinate contribution at a contact column:
    //   A0 lower w-bound s0, A1 upper s1, B0 upper f(t1), B1 lower f(t0).
};

Formula validated_rule(const ExistsBlock& block) {
    std::optional<Term> A0, A1, B0, B1;
    if (block.lower_x) A0 = denormalize(*block.lower_x);
    if (block.upper_x) A1 = denormalize(*block.upper_x);
    if (block.upper_f) B0 = Term::flip(denormalize(*block.upper_f));  // f(t1)
    if (block.lower_f) B1 = Term::flip(denormalize(*block.lower_f));  // f(t0)

    // Strict column order; comparisons against an infinite endpoint are
    // vacuously true (A0/B0 sit at -inf, A1/B1 at +inf when missing).
    auto col_lt = [&](const std::optional<Term>& x, const std::optional<Term>& y) -> Formula {
        if (!x || !y) return Formula::trivially_true();
        return Formula::conjunction(
            {Formula::less(*x, *y), Formula::negation(same_column_formula(*x, *y))});
    };

    std::vector<Formula> cases;

    // W1: a column strictly inside both intervals.
    cases.push_back(Formula::conjunction(
        {col_lt(A0, A1), col_lt(A0, B1), col_lt(B0, A1), col_lt(B0, B1)}));
    // W2..W5: an endpoint column of one interval strictly inside the other;
    // the half-column there is nonempty and the other side is unconstrained.
    if (A0) cases.push_back(Formula::conjunction({col_lt(B0, A0), col_lt(A0, B1)}));
    if (A1) cases.push_back(Formula::conjunction({col_lt(B0, A1), col_lt(A1, B1)}));
    if (B0) cases.push_back(Formula::conjunction({col_lt(A0, B0), col_lt(B0, A1)}));
    if (B1) cases.push_back(Formula::conjunction({col_lt(A0, B1), col_lt(B1, A1)}));

    // Endpoint-endpoint contacts: both intervals contribute second-coordinate
    // bounds on the shared column.  P is an x-range endpoint, Q an f-range
    // one; within the guard every listed term shares the contact column, so
    // lexicographic < between them is exactly the second-coordinate order.
    struct Side {
        const std::optional<Term>* self;
        const std::optional<Term>* other;   // the opposite endpoint of the same interval
        bool self_is_lower;                 // lower endpoints contribute lower w-bounds
    };
    auto contact = [&](const Side& a, const Side& b) -> std::optional<Formula> {
        if (!*a.self || !*b.self) return std::nullopt;
        // Branch on whether the opposite endpoint shares the contact column.
        auto branches = [&](const Side& side) {
            std::vector<std::pair<Formula, bool>> out;  // (guard, opposite joins)
            if (*side.other) {
                Formula same = same_column_formula(**side.self, **side.other);
                out.emplace_back(same, true);
                out.emplace_back(Formula::negation(same), false);
            } else {
                out.emplace_back(Formula::trivially_true(), false);
            }
            return out;
        };
        std::vector<Formula> combos;
        for (const auto& [ga, join_a] : branches(a))
            for (const auto& [gb, join_b] : branches(b)) {
                std::vector<Term> lowers, uppers;
                auto put = [&](const Side& side, bool join) {
                    (side.self_is_lower ? lowers : uppers).push_back(**side.self);
                    if (join) (side.self_is_lower ? uppers : lowers).push_back(**side.other);
                };
                put(a, join_a);
                put(b, join_b);
                std::vector<Formula> conj = {ga, gb};
                for (const Term& lo : lowers)
                    for (const Term& up : uppers) conj.push_back(Formula::less(lo, up));
                combos.push_back(Formula::conjunction(std::move(conj)));
            }
        return Formula::conjunction(
            {same_column_formula(**a.self, **b.self), Formula::disjunction(std::move(combos))});
    };

    Side sA0{&A0, &A1, true}, sA1{&A1, &A0, false};
    Side sB0{&B0, &B1, false}, sB1{&B1, &B0, true};
    for (const Side& sa : {sA0, sA1})
        for (const Side& sb : {sB0, sB1})
            if (auto e = contact(sa, sb)) cases.push_back(std::move(*e));

    std::vector<Formula> guard;
    if (A0 && A1) guard.push_back(Formula::less(*A0, *A1));  // s0 < s1
    if (block.lower_f && block.upper_f)
        guard.push_back(
            Formula::less(denormalize(*block.lower_f), denormalize(*block.upper_f)));  // t0 < t1
    guard.push_back(Formula::disjunction(std::move(cases)));
    return Formula::conjunction(std::move(guard));
}

}  // namespace

Formula eliminate_exists(const ExistsBlock& block, QeRule rule) {
    auto check = [&](const std::optional<NormalTerm>& b, const char* which) {
        if (b && (b->linear.count(block.var) || b->flipped.count(block.var)))
            throw EvalError(std::string("bound ") + which + " mentions the bound variable");
    };
    check(block.lower_x, "s0");
    check(block.upper_x, "s1");
    check(block.lower_f, "t0");
    check(block.upper_f, "t1");
    return rule == QeRule::Paper ? paper_rule(block) : validated_rule(block);
}

// ── Driver ──────────────────────────────────────────────────────────────────

namespace {

// Negation normal form with order trichotomy at atoms.
Formula nnf(const Formula& f, bool negate) {
    switch (f.kind()) {
        case Formula::Kind::Atomic: {
            if (!negate) return f;
            const Atom& a = f.atom_ref();
            if (a.kind == AtomKind::Less)
                return Formula::disjunction(
                    {Formula::eq(a.args[0], a.args[1]), Formula::less(a.args[1], a.args[0])});
            if (a.kind == AtomKind::Eq)
                return Formula::disjunction(
                    {Formula::less(a.args[0], a.args[1]), Formula::less(a.args[1], a.args[0])});
            throw EvalError("unsupported atom in group elimination");
        }
        case Formula::Kind::Not: return nnf(f.child(), !negate);
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<Formula> parts;
            for (const auto& c : f.children()) parts.push_back(nnf(c, negate));
            bool conj = (f.kind() == Formula::Kind::And) != negate;
            return conj ? Formula::conjunction(std::move(parts))
                        : Formula::disjunction(std::move(parts));
        }
        default: throw EvalError("quantifier inside a body expected to be quantifier-free");
    }
}

// Conjunctions of atoms from an NNF formula, distributing disjunctions.
void dnf(const Formula& f, std::vector<std::vector<Formula>>& out) {
    switch (f.kind()) {
        case Formula::Kind::Atomic: out.push_back({f}); break;
        case Formula::Kind::Or:
            for (const auto& c : f.children()) dnf(c, out);
            break;
        case Formula::Kind::And: {
            std::vector<std::vector<Formula>> acc = {{}};
            for (const auto& c : f.children()) {
                std::vector<std::vector<Formula>> sub;
                dnf(c, sub);
                std::vector<std::vector<Formula>> next;
                for (const auto& left : acc)
                    for (const auto& right : sub) {
                        std::vector<Formula> row = left;
                        row.insert(row.end(), right.begin(), right.end());
                        next.push_back(std::move(row));
                    }
                acc = std::move(next);
            }
            for (auto& row : acc) out.push_back(std::move(row));
            break;
        }
        default: throw EvalError("DNF conversion expects a quantifier-free NNF body");
    }
}

// Eliminates E var from a conjunction of < and = atoms.
Formula eliminate_conjunct(const std::string& var, const std::vector<Formula>& atoms,
                           QeRule rule);

Formula eliminate_one(const std::string& var, const Formula& qf_body, QeRule rule) {
    std::vector<std::vector<Formula>> dis;
    dnf(nnf(qf_body, false), dis);
    std::vector<Formula> out;
    out.reserve(dis.size());
    for (const auto& conj : dis) out.push_back(eliminate_conjunct(var, conj, rule));
    return Formula::disjunction(std::move(out));
}

Formula eliminate_conjunct(const std::string& var, const std::vector<Formula>& atoms,
                           QeRule rule) {
    std::vector<Formula> passengers;
    std::vector<NormalTerm> lower_x, upper_x, lower_f, upper_f;

    for (const Formula& af : atoms) {
        const Atom& a = af.atom_ref();
        NormalTerm diff = normalize_term(a.args[0]) - normalize_term(a.args[1]);
        Rat q = diff.linear.count(var) ? diff.linear.at(var) : Rat(0);
        Rat r = diff.flipped.count(var) ? diff.flipped.at(var) : Rat(0);
        if (q == 0 && r == 0) {
            // Rebuilt from the normal form: syntactic x occurrences with
            // cancelling coefficients must not survive into the output.
            Term lhs = denormalize(diff);
            passengers.push_back(a.kind == AtomKind::Eq ? Formula::eq(lhs, Term::zero())
                                                        : Formula::less(lhs, Term::zero()));
            continue;
        }
        if (q != 0 && r != 0)
            throw EvalError("conversion failure: atom mixes x and f(x) with nonzero "
                            "coefficients; outside the supported block shape");
        NormalTerm rest = diff;
        rest.linear.erase(var);
        rest.flipped.erase(var);
        if (a.kind == AtomKind::Eq) {
            // q x + rest = 0  =>  x = -(1/q) rest; likewise through f.
            NormalTerm solution =
                q != 0 ? rest.scaled(Rat(-1) / q) : rest.scaled(Rat(-1) / r).flipped_form();
            Term replacement = denormalize(solution);
            std::vector<Formula> substituted;
            for (const Formula& other : atoms)
                if (&other != &af)
                    substituted.push_back(substitute(other, var, replacement));
            return Formula::conjunction(std::move(substituted));
        }
        // diff < 0: q x < -rest  (or r f(x) < -rest).
        bool on_x = q != 0;
        Rat coeff = on_x ? q : r;
        NormalTerm bound = rest.scaled(Rat(-1) / coeff);
        if (coeff > 0)
            (on_x ? upper_x : upper_f).push_back(std::move(bound));
        else
            (on_x ? lower_x : lower_f).push_back(std::move(bound));
    }

    // One bound per side via a maximal/minimal case split.
    auto choose = [&](const std::vector<NormalTerm>& candidates, bool maximal,
                      std::vector<std::pair<std::optional<NormalTerm>, Formula>>& out) {
        if (candidates.empty()) {
            out.emplace_back(std::nullopt, Formula::trivially_true());
            return;
        }
        for (std::size_t pick = 0; pick < candidates.size(); ++pick) {
            std::vector<Formula> cond;
            Term chosen = denormalize(candidates[pick]);
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                if (i == pick) continue;
                Term other = denormalize(candidates[i]);
                cond.push_back(maximal ? leq(other, chosen) : leq(chosen, other));
            }
            out.emplace_back(candidates[pick], Formula::conjunction(std::move(cond)));
        }
    };

    std::vector<std::pair<std::optional<NormalTerm>, Formula>> lx, ux, lf, uf;
    choose(lower_x, true, lx);
    choose(upper_x, false, ux);
    choose(lower_f, true, lf);
    choose(upper_f, false, uf);

    std::vector<Formula> cases;
    for (const auto& [s0, c0] : lx)
        for (const auto& [s1, c1] : ux)
            for (const auto& [t0, c2] : lf)
                for (const auto& [t1, c3] : uf) {
                    ExistsBlock block;
                    block.var = var;
                    block.lower_x = s0;
                    block.upper_x = s1;
                    block.lower_f = t0;
                    block.upper_f = t1;
                    cases.push_back(Formula::conjunction(
                        {c0, c1, c2, c3, eliminate_exists(block, rule)}));
                }

    std::vector<Formula> result = passengers;
    result.push_back(Formula::disjunction(std::move(cases)));
    return Formula::conjunction(std::move(result));
}

}  // namespace

Formula eliminate_all(const Formula& phi, QeRule rule) {
    switch (phi.kind()) {
        case Formula::Kind::Atomic: return phi;
        case Formula::Kind::Not: return Formula::negation(eliminate_all(phi.child(), rule));
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<Formula> parts;
            for (const auto& c : phi.children()) parts.push_back(eliminate_all(c, rule));
            return phi.kind() == Formula::Kind::And ? Formula::conjunction(std::move(parts))
                                                    : Formula::disjunction(std::move(parts));
        }
        case Formula::Kind::Exists: {
            Formula body = eliminate_all(phi.body(), rule);
            return eliminate_one(phi.bound_var(), body, rule);
        }
        case Formula::Kind::Forall: {
            Formula body = eliminate_all(phi.body(), rule);
            return Formula::negation(
                eliminate_one(phi.bound_var(), Formula::negation(body), rule));
        }
    }
    return phi;
}

QeAgreement validate_against_oracle(const Structure& qlex, const Formula& original,
                                    const Formula& eliminated,
                                    const std::vector<Assignment>& assignments) {
    QeAgreement report;
    for (const Assignment& asg : assignments) {
        ++report.assignments;
        bool want = evaluate(qlex, original, asg);
        bool got = evaluate(qlex, eliminated, asg);
        if (want != got) {
            ++report.disagreements;
            if (report.examples.size() < 8) {
                std::string desc;
                for (const auto& [name, value] : asg)
                    desc += name + " = " + element_to_string(value) + "  ";
                desc += "oracle=" + std::string(want ? "true" : "false") +
                        " rule=" + std::string(got ? "true" : "false");
                report.examples.push_back(desc);
            }
        }
    }
    return report;
}

}  // namespace dpmin
