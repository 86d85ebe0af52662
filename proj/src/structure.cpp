#include "dpmin/structure.hpp"

#include <algorithm>
#include <set>

#include "dpmin/errors.hpp"
#include "dpmin/hahn_model.hpp"
#include "dpmin/padic_model.hpp"
#include "dpmin/rng.hpp"

namespace dpmin {

namespace {

// endpoints -> endpoints + midpoints + one point beyond each extreme.
// Empty input yields {0}: any single candidate decides a constraint-free
// body.  The output meets every cell of the induced partition of the line.
std::vector<Rat> line_grid(const std::set<Rat>& endpoints) {
    if (endpoints.empty()) return {Rat(0)};
    std::vector<Rat> base(endpoints.begin(), endpoints.end());
    std::vector<Rat> out;
    out.push_back(base.front() - 1);
    for (std::size_t i = 0; i < base.size(); ++i) {
        out.push_back(base[i]);
        if (i + 1 < base.size()) out.push_back((base[i] + base[i + 1]) / 2);
    }
    out.push_back(base.back() + 1);
    return out;
}

void collect_atoms(const Formula& f, std::vector<const Atom*>& out) {
    switch (f.kind()) {
        case Formula::Kind::Atomic: out.push_back(&f.atom_ref()); break;
        default:
            for (const auto& c : f.children()) collect_atoms(c, out);
            break;
    }
}

bool term_mentions(const Term& t, const std::string& var) {
    switch (t.kind()) {
        case Term::Kind::Variable: return t.var_name() == var;
        case Term::Kind::Sum: return term_mentions(t.left(), var) || term_mentions(t.right(), var);
        case Term::Kind::Scale: return term_mentions(t.operand(), var);
        case Term::Kind::App:
            for (const auto& a : t.fn_args())
                if (term_mentions(a, var)) return true;
            return false;
        default: return false;
    }
}

Rat sample_rat(Rng& rng) { return Rat(rng.range(-16, 16), rng.range(1, 8)); }

// ── (Q, <) ──────────────────────────────────────────────────────────────────

class SimpleDlo final : public Structure {
public:
    SimpleDlo()
        : Structure("simple_dlo", [] {
              Signature s;
              s.name = "simple_dlo";
              s.order = true;
              s.rational_literals = true;
              return s;
          }()) {}

    Element term_value(const Term& t, const Assignment& asg) const override {
        switch (t.kind()) {
            case Term::Kind::Variable: {
                auto it = asg.find(t.var_name());
                if (it == asg.end())
                    throw EvalError("unassigned variable '" + t.var_name() + "'");
                return Element(as_rat(it->second));
            }
            case Term::Kind::Zero: return Element(Rat(0));
            case Term::Kind::RatConst: return Element(t.rat_value());
            default: throw EvalError("symbol not interpreted in simple_dlo terms");
        }
    }

    bool atom_value(const Atom& a, const Assignment& asg) const override {
        switch (a.kind) {
            case AtomKind::Less:
                return as_rat(term_value(a.args[0], asg)) < as_rat(term_value(a.args[1], asg));
            case AtomKind::Eq:
                return as_rat(term_value(a.args[0], asg)) == as_rat(term_value(a.args[1], asg));
            default: throw EvalError("relation not interpreted in simple_dlo");
        }
    }

    std::vector<Element> witness_grid(const Formula& body, const std::string& var,
                                      const Assignment& asg) const override {
        std::vector<const Atom*> atoms;
        collect_atoms(body, atoms);
        std::set<Rat> endpoints;
        for (const Atom* a : atoms) {
            for (const Term& side : a->args)
                if (!term_mentions(side, var)) endpoints.insert(as_rat(term_value(side, asg)));
        }
        // Every parameter element named in the body joins the grid.
        for (const auto& v : free_variables(body))
            if (v != var) {
                auto it = asg.find(v);
                if (it != asg.end()) endpoints.insert(as_rat(it->second));
            }
        std::vector<Element> out;
        for (const Rat& q : line_grid(endpoints)) out.emplace_back(q);
        return out;
    }

    std::vector<Element> sample(std::size_t count, std::uint64_t seed) const override {
        Rng rng(seed);
        std::vector<Element> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) out.emplace_back(sample_rat(rng));
        return out;
    }

    Element parse_element(std::string_view text) const override {
        return Element(parse_rational(text));
    }
};

// ── Q x Q with two independent orders ───────────────────────────────────────

class PairDlo final : public Structure {
public:
    PairDlo()
        : Structure("pair_dlo", [] {
              Signature s;
              s.name = "pair_dlo";
              s.coord_orders = true;
              s.pair_literals = true;
              return s;
          }()) {}

    Element term_value(const Term& t, const Assignment& asg) const override {
        switch (t.kind()) {
            case Term::Kind::Variable: {
                auto it = asg.find(t.var_name());
                if (it == asg.end())
                    throw EvalError("unassigned variable '" + t.var_name() + "'");
                return Element(as_pair(it->second));
            }
            case Term::Kind::Zero: return Element(PairPoint{Rat(0), Rat(0)});
            case Term::Kind::PairConst: return Element(PairPoint{t.pair_first(), t.pair_second()});
            default: throw EvalError("symbol not interpreted in pair_dlo terms");
        }
    }

    bool atom_value(const Atom& a, const Assignment& asg) const override {
        switch (a.kind) {
            case AtomKind::Lt1:
                return as_pair(term_value(a.args[0], asg)).first <
                       as_pair(term_value(a.args[1], asg)).first;
            case AtomKind::Lt2:
                return as_pair(term_value(a.args[0], asg)).second <
                       as_pair(term_value(a.args[1], asg)).second;
            case AtomKind::Eq:
                return as_pair(term_value(a.args[0], asg)) == as_pair(term_value(a.args[1], asg));
            default: throw EvalError("relation not interpreted in pair_dlo");
        }
    }

    std::vector<Element> witness_grid(const Formula& body, const std::string& var,
                                      const Assignment& asg) const override {
        std::vector<const Atom*> atoms;
        collect_atoms(body, atoms);
        std::set<Rat> firsts, seconds;
        auto add_param = [&](const PairPoint& p) {
            firsts.insert(p.first);
            seconds.insert(p.second);
        };
        for (const Atom* a : atoms) {
            for (const Term& side : a->args) {
                if (term_mentions(side, var)) continue;
                PairPoint p = as_pair(term_value(side, asg));
                switch (a->kind) {
                    case AtomKind::Lt1: firsts.insert(p.first); break;
                    case AtomKind::Lt2: seconds.insert(p.second); break;
                    default: add_param(p); break;
                }
            }
        }
        for (const auto& v : free_variables(body))
            if (v != var) {
                auto it = asg.find(v);
                if (it != asg.end()) add_param(as_pair(it->second));
            }
        std::vector<Element> out;
        for (const Rat& u : line_grid(firsts))
            for (const Rat& w : line_grid(seconds)) out.emplace_back(PairPoint{u, w});
        return out;
    }

    std::vector<Element> sample(std::size_t count, std::uint64_t seed) const override {
        Rng rng(seed);
        std::vector<Element> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            Rat a = sample_rat(rng), b = sample_rat(rng);
            out.emplace_back(PairPoint{a, b});
        }
        return out;
    }

    Element parse_element(std::string_view text) const override {
        Rat a, b;
        parse_point(text, a, b);
        return Element(PairPoint{a, b});
    }
};

// ── The lexicographic group ─────────────────────────────────────────────────

// a * x + b * f(x) + c, the normal form of a qlex term relative to one
// distinguished variable, with every other variable folded into c.
struct LinForm {
    Rat a;
    Rat b;
    LexPoint c{Rat(0), Rat(0)};
};

class QLexGroup final : public Structure {
public:
    QLexGroup()
        : Structure("qlex", [] {
              Signature s;
              s.name = "qlex";
              s.order = true;
              s.group_ops = true;
              s.fn_flip = true;
              s.pair_literals = true;
              return s;
          }()) {}

    Element term_value(const Term& t, const Assignment& asg) const override {
        return Element(eval_lex(t, asg));
    }

    bool atom_value(const Atom& a, const Assignment& asg) const override {
        switch (a.kind) {
            case AtomKind::Less: return eval_lex(a.args[0], asg) < eval_lex(a.args[1], asg);
            case AtomKind::Eq: return eval_lex(a.args[0], asg) == eval_lex(a.args[1], asg);
            default: throw EvalError("relation not interpreted in qlex");
        }
    }

    std::vector<Element> witness_grid(const Formula& body, const std::string& var,
                                      const Assignment& asg) const override {
        std::vector<const Atom*> atoms;
        collect_atoms(body, atoms);
        std::set<Rat> firsts, seconds;
        for (const Atom* a : atoms) {
            if (a->kind != AtomKind::Less && a->kind != AtomKind::Eq)
                throw EvalError("relation not interpreted in qlex");
            LinForm l = linearize(a->args[0], var, asg);
            LinForm r = linearize(a->args[1], var, asg);
            // lhs - rhs = q x + r f(x) + c; with x = (u, w) its value is
            // ((q - r) u + c1, (q + r) w + c2).  Truth changes only at the
            // coordinate roots.
            Rat q = l.a - r.a, rr = l.b - r.b;
            LexPoint c = lex_add(l.c, lex_neg(r.c));
            if (q != rr) firsts.insert(-c.first / (q - rr));
            if (q + rr != 0) seconds.insert(-c.second / (q + rr));
        }
        for (const auto& v : free_variables(body))
            if (v != var) {
                auto it = asg.find(v);
                if (it != asg.end()) {
                    const LexPoint& p = as_lex(it->second);
                    firsts.insert(p.first);
                    seconds.insert(p.second);
                }
            }
        std::vector<Element> out;
        for (const Rat& u : line_grid(firsts))
            for (const Rat& w : line_grid(seconds)) out.emplace_back(LexPoint{u, w});
        return out;
    }

    std::vector<Element> sample(std::size_t count, std::uint64_t seed) const override {
        Rng rng(seed);
        std::vector<Element> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            Rat a = sample_rat(rng), b = sample_rat(rng);
            out.emplace_back(LexPoint{a, b});
        }
        return out;
    }

    Element parse_element(std::string_view text) const override {
        Rat a, b;
        parse_point(text, a, b);
        return Element(LexPoint{a, b});
    }

private:
    static LexPoint eval_lex(const Term& t, const Assignment& asg) {
        switch (t.kind()) {
            case Term::Kind::Variable: {
                auto it = asg.find(t.var_name());
                if (it == asg.end())
                    throw EvalError("unassigned variable '" + t.var_name() + "'");
                return as_lex(it->second);
            }
            case Term::Kind::Zero: return LexPoint{Rat(0), Rat(0)};
            case Term::Kind::PairConst: return LexPoint{t.pair_first(), t.pair_second()};
            case Term::Kind::Sum: return lex_add(eval_lex(t.left(), asg), eval_lex(t.right(), asg));
            case Term::Kind::Scale: return lex_scale(t.rat_value(), eval_lex(t.operand(), asg));
            case Term::Kind::App:
                if (t.fn_name() == "f" && t.fn_args().size() == 1)
                    return lex_flip(eval_lex(t.fn_args()[0], asg));
                throw EvalError("symbol not interpreted: " + t.fn_name());
            default: throw EvalError("symbol not interpreted in qlex terms");
        }
    }

    static LinForm linearize(const Term& t, const std::string& var, const Assignment& asg) {
        switch (t.kind()) {
            case Term::Kind::Variable:
                if (t.var_name() == var) return LinForm{Rat(1), Rat(0)};
                return LinForm{Rat(0), Rat(0), eval_lex(t, asg)};
            case Term::Kind::Zero: return LinForm{Rat(0), Rat(0)};
            case Term::Kind::PairConst:
                return LinForm{Rat(0), Rat(0), LexPoint{t.pair_first(), t.pair_second()}};
            case Term::Kind::Sum: {
                LinForm l = linearize(t.left(), var, asg);
                LinForm r = linearize(t.right(), var, asg);
                return LinForm{l.a + r.a, l.b + r.b, lex_add(l.c, r.c)};
            }
            case Term::Kind::Scale: {
                LinForm l = linearize(t.operand(), var, asg);
                return LinForm{t.rat_value() * l.a, t.rat_value() * l.b,
                               lex_scale(t.rat_value(), l.c)};
            }
            case Term::Kind::App: {
                if (t.fn_name() != "f" || t.fn_args().size() != 1)
                    throw EvalError("symbol not interpreted: " + t.fn_name());
                // f(a x + b f(x) + c) = b x + a f(x) + f(c)
                LinForm l = linearize(t.fn_args()[0], var, asg);
                return LinForm{l.b, l.a, lex_flip(l.c)};
            }
            default: throw EvalError("symbol not interpreted in qlex terms");
        }
    }
};

// ── Finite-support series structure (quantifier-free) ───────────────────────

class HahnStructure final : public Structure {
public:
    HahnStructure()
        : Structure("hahn", [] {
              Signature s;
              s.name = "hahn";
              s.order = true;
              s.pred_P = true;
              s.rel_Rn = true;
              s.group_ops = true;
              return s;
          }()) {}

    Element term_value(const Term& t, const Assignment& asg) const override {
        return Element(eval_series(t, asg));
    }

    bool atom_value(const Atom& a, const Assignment& asg) const override {
        switch (a.kind) {
            case AtomKind::Less:
                return eval_series(a.args[0], asg) < eval_series(a.args[1], asg);
            case AtomKind::Eq:
                return eval_series(a.args[0], asg) == eval_series(a.args[1], asg);
            case AtomKind::PredP: return hseries_P(eval_series(a.args[0], asg));
            case AtomKind::RelR: {
                auto n = compute_Rn(eval_series(a.args[0], asg), eval_series(a.args[1], asg));
                return n == std::optional<long long>(a.r_index);
            }
            default: throw EvalError("relation not interpreted in hahn");
        }
    }

    std::vector<Element> sample(std::size_t count, std::uint64_t seed) const override {
        Rng rng(seed);
        std::vector<Element> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) out.emplace_back(sample_series(rng));
        return out;
    }

    Element parse_element(std::string_view text) const override {
        return Element(parse_hahn_series(text));
    }

private:
    static HahnSeries eval_series(const Term& t, const Assignment& asg) {
        switch (t.kind()) {
            case Term::Kind::Variable: {
                auto it = asg.find(t.var_name());
                if (it == asg.end())
                    throw EvalError("unassigned variable '" + t.var_name() + "'");
                return as_hahn(it->second);
            }
            case Term::Kind::Zero: return HahnSeries();
            case Term::Kind::Sum:
                return eval_series(t.left(), asg) + eval_series(t.right(), asg);
            case Term::Kind::Scale: return eval_series(t.operand(), asg).scaled(t.rat_value());
            default: throw EvalError("symbol not interpreted in hahn terms");
        }
    }
};

// ── Valued-field fragment over Q_p approximations (quantifier-free) ─────────

class PadicStructure final : public Structure {
public:
    PadicStructure(long long p, int precision)
        : Structure("padic",
                    [] {
                        Signature s;
                        s.name = "padic";
                        s.vle = true;
                        s.ann_pow = true;
                        s.group_ops = true;
                        s.rational_literals = true;
                        return s;
                    }()),
          p_(p),
          precision_(precision) {
        // Validate the parameters eagerly.
        (void)PadicApprox::zero(p, precision);
    }

    long long prime() const { return p_; }
    int precision() const { return precision_; }

    Element term_value(const Term& t, const Assignment& asg) const override {
        return Element(eval_padic(t, asg));
    }

    bool atom_value(const Atom& a, const Assignment& asg) const override {
        switch (a.kind) {
            case AtomKind::Eq:
                return eval_padic(a.args[0], asg).equal_at_precision(eval_padic(a.args[1], asg));
            case AtomKind::Vle: {
                PadicApprox lhs = eval_padic(a.args[0], asg);
                PadicApprox rhs = eval_padic(a.args[1], asg);
                return lhs.valuation() <= rhs.valuation();
            }
            case AtomKind::Ann:
                return in_annulus(eval_padic(a.args[0], asg), a.gamma, a.delta);
            case AtomKind::Pow:
                return in_power_coset(eval_padic(a.args[0], asg), a.pow_n, a.pow_lambda);
            default: throw EvalError("relation not interpreted in padic");
        }
    }

    std::vector<Element> sample(std::size_t count, std::uint64_t seed) const override {
        Rng rng(seed);
        long long pprec = pow_ll(p_, precision_);
        std::vector<Element> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            if (rng.chance(1, 24)) {
                out.emplace_back(PadicApprox::zero(p_, precision_));
                continue;
            }
            long long u;
            do {
                u = static_cast<long long>(rng.below(static_cast<std::uint64_t>(pprec)));
            } while (u % p_ == 0);
            out.emplace_back(PadicApprox::from_parts(p_, rng.range(-4, 4), u, precision_));
        }
        return out;
    }

    Element parse_element(std::string_view text) const override {
        return Element(PadicApprox::parse(text, p_, precision_));
    }

private:
    PadicApprox eval_padic(const Term& t, const Assignment& asg) const {
        switch (t.kind()) {
            case Term::Kind::Variable: {
                auto it = asg.find(t.var_name());
                if (it == asg.end())
                    throw EvalError("unassigned variable '" + t.var_name() + "'");
                return as_padic(it->second);
            }
            case Term::Kind::Zero: return PadicApprox::zero(p_, precision_);
            case Term::Kind::RatConst:
                return PadicApprox::from_rational(p_, t.rat_value(), precision_);
            case Term::Kind::Sum: return eval_padic(t.left(), asg) + eval_padic(t.right(), asg);
            case Term::Kind::Scale: return eval_padic(t.operand(), asg).scaled(t.rat_value());
            default: throw EvalError("symbol not interpreted in padic terms");
        }
    }

    long long p_;
    int precision_;
};

}  // namespace

std::vector<Element> Structure::witness_grid(const Formula&, const std::string&,
                                             const Assignment&) const {
    throw EvalError("structure '" + name() +
                    "' declares no exact witness-domain builder; quantified "
                    "evaluation is not available");
}

StructureHandle make_simple_dlo() { return std::make_shared<SimpleDlo>(); }
StructureHandle make_pair_dlo() { return std::make_shared<PairDlo>(); }
StructureHandle make_qlex() { return std::make_shared<QLexGroup>(); }
StructureHandle make_hahn() { return std::make_shared<HahnStructure>(); }
StructureHandle make_padic(long long p, int precision) {
    return std::make_shared<PadicStructure>(p, precision);
}

StructureHandle make_structure(const std::string& name, long long p, int precision) {
    if (name == "simple_dlo") return make_simple_dlo();
    if (name == "pair_dlo") return make_pair_dlo();
    if (name == "qlex") return make_qlex();
    if (name == "hahn") return make_hahn();
    if (name == "padic") return make_padic(p, precision);
    throw ConfigError("unknown structure name '" + name + "'");
}

bool evaluate(const Structure& s, const Formula& f, const Assignment& asg) {
    switch (f.kind()) {
        case Formula::Kind::Atomic: return s.atom_value(f.atom_ref(), asg);
        case Formula::Kind::Not: return !evaluate(s, f.child(), asg);
        case Formula::Kind::And:
            for (const auto& c : f.children())
                if (!evaluate(s, c, asg)) return false;
            return true;
        case Formula::Kind::Or:
            for (const auto& c : f.children())
                if (evaluate(s, c, asg)) return true;
            return false;
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            if (!f.body().is_quantifier_free())
                throw EvalError("nested quantifiers are outside the exact constraint class");
            std::vector<Element> grid = s.witness_grid(f.body(), f.bound_var(), asg);
            Assignment inner = asg;
            bool exists = f.kind() == Formula::Kind::Exists;
            for (const Element& cand : grid) {
                inner[f.bound_var()] = cand;
                bool v = evaluate(s, f.body(), inner);
                if (exists && v) return true;
                if (!exists && !v) return false;
            }
            return !exists;
        }
    }
    throw EvalError("unreachable formula kind");
}

std::optional<Element> exists_witness(const Structure& s, const Formula& qf_body,
                                      const std::string& var, const Assignment& asg) {
    if (!qf_body.is_quantifier_free())
        throw EvalError("witness search expects a quantifier-free body");
    std::vector<Element> grid = s.witness_grid(qf_body, var, asg);
    Assignment inner = asg;
    for (const Element& cand : grid) {
        inner[var] = cand;
        if (evaluate(s, qf_body, inner)) return cand;
    }
    return std::nullopt;
}

}  // namespace dpmin
