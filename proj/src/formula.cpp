#include "dpmin/formula.hpp"

#include <cctype>
#include <optional>
#include <utility>

#include "dpmin/errors.hpp"

namespace dpmin {

// ── Term construction ───────────────────────────────────────────────────────

Term Term::variable(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    n->name = std::move(name);
    return Term(std::move(n));
}

Term Term::zero() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Zero;
    return Term(std::move(n));
}

Term Term::rational_const(Rat q) {
    if (q == 0) return zero();  // canonical: the zero constant has its own node
    auto n = std::make_shared<Node>();
    n->kind = Kind::RatConst;
    n->q = std::move(q);
    return Term(std::move(n));
}

Term Term::pair_const(Rat first, Rat second) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::PairConst;
    n->q = std::move(first);
    n->q2 = std::move(second);
    return Term(std::move(n));
}

Term Term::sum(Term left, Term right) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sum;
    n->children = {std::move(left), std::move(right)};
    return Term(std::move(n));
}

Term Term::scale(Rat coeff, Term operand) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Scale;
    n->q = std::move(coeff);
    n->children = {std::move(operand)};
    return Term(std::move(n));
}

Term Term::app(std::string fn, std::vector<Term> args) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::App;
    n->name = std::move(fn);
    n->children = std::move(args);
    return Term(std::move(n));
}

bool Term::equal(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Kind::Variable: return a.var_name() == b.var_name();
        case Kind::Zero: return true;
        case Kind::RatConst: return a.rat_value() == b.rat_value();
        case Kind::PairConst:
            return a.pair_first() == b.pair_first() && a.pair_second() == b.pair_second();
        case Kind::Sum: return equal(a.left(), b.left()) && equal(a.right(), b.right());
        case Kind::Scale: return a.rat_value() == b.rat_value() && equal(a.operand(), b.operand());
        case Kind::App: {
            if (a.fn_name() != b.fn_name() || a.fn_args().size() != b.fn_args().size())
                return false;
            for (std::size_t i = 0; i < a.fn_args().size(); ++i)
                if (!equal(a.fn_args()[i], b.fn_args()[i])) return false;
            return true;
        }
    }
    return false;
}

bool operator==(const Atom& a, const Atom& b) {
    if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (a.args[i] != b.args[i]) return false;
    switch (a.kind) {
        case AtomKind::RelR: return a.r_index == b.r_index;
        case AtomKind::Ann: return a.gamma == b.gamma && a.delta == b.delta;
        case AtomKind::Pow: return a.pow_n == b.pow_n && a.pow_lambda == b.pow_lambda;
        default: return true;
    }
}

// ── Formula construction ────────────────────────────────────────────────────

Formula::Formula() : node_(trivially_true().node_) {}

Formula Formula::atom(Atom a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Atomic;
    n->atom = std::move(a);
    return Formula(std::move(n));
}

Formula Formula::negation(Formula f) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Not;
    n->children = {std::move(f)};
    return Formula(std::move(n));
}

Formula Formula::conjunction(std::vector<Formula> fs) {
    if (fs.empty()) return trivially_true();
    if (fs.size() == 1) return fs[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::And;
    n->children = std::move(fs);
    return Formula(std::move(n));
}

Formula Formula::disjunction(std::vector<Formula> fs) {
    if (fs.empty()) return trivially_false();
    if (fs.size() == 1) return fs[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::Or;
    n->children = std::move(fs);
    return Formula(std::move(n));
}

Formula Formula::exists(std::string var, Formula body) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Exists;
    n->name = std::move(var);
    n->children = {std::move(body)};
    return Formula(std::move(n));
}

Formula Formula::forall(std::string var, Formula body) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Forall;
    n->name = std::move(var);
    n->children = {std::move(body)};
    return Formula(std::move(n));
}

Formula Formula::trivially_true() { return eq(Term::zero(), Term::zero()); }

Formula Formula::trivially_false() { return less(Term::zero(), Term::zero()); }

Formula Formula::less(Term a, Term b) {
    Atom at;
    at.kind = AtomKind::Less;
    at.args = {std::move(a), std::move(b)};
    return atom(std::move(at));
}

Formula Formula::eq(Term a, Term b) {
    Atom at;
    at.kind = AtomKind::Eq;
    at.args = {std::move(a), std::move(b)};
    return atom(std::move(at));
}

bool Formula::is_quantifier_free() const {
    switch (kind()) {
        case Kind::Atomic: return true;
        case Kind::Exists:
        case Kind::Forall: return false;
        default:
            for (const auto& c : children())
                if (!c.is_quantifier_free()) return false;
            return true;
    }
}

bool Formula::equal(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Kind::Atomic: return a.atom_ref() == b.atom_ref();
        case Kind::Exists:
        case Kind::Forall:
            if (a.bound_var() != b.bound_var()) return false;
            [[fallthrough]];
        default: {
            if (a.children().size() != b.children().size()) return false;
            for (std::size_t i = 0; i < a.children().size(); ++i)
                if (!equal(a.children()[i], b.children()[i])) return false;
            return true;
        }
    }
}

// ── Printing ────────────────────────────────────────────────────────────────

std::string print_term(const Term& t) {
    switch (t.kind()) {
        case Term::Kind::Variable: return t.var_name();
        case Term::Kind::Zero: return "0";
        case Term::Kind::RatConst: return rat_to_string(t.rat_value());
        case Term::Kind::PairConst: return point_to_string(t.pair_first(), t.pair_second());
        case Term::Kind::Sum: {
            // '+' parses left-associated; a right-nested sum keeps its shape
            // through parentheses.
            std::string rhs = print_term(t.right());
            if (t.right().kind() == Term::Kind::Sum) rhs = "(" + rhs + ")";
            return print_term(t.left()) + " + " + rhs;
        }
        case Term::Kind::Scale: {
            std::string inner = print_term(t.operand());
            if (t.operand().kind() == Term::Kind::Sum) inner = "(" + inner + ")";
            return "(" + rat_to_string(t.rat_value()) + ")*" + inner;
        }
        case Term::Kind::App: {
            std::string out = t.fn_name() + "(";
            for (std::size_t i = 0; i < t.fn_args().size(); ++i) {
                if (i) out += ", ";
                out += print_term(t.fn_args()[i]);
            }
            return out + ")";
        }
    }
    return "?";
}

namespace {

std::string print_atom(const Atom& a) {
    switch (a.kind) {
        case AtomKind::Less: return print_term(a.args[0]) + " < " + print_term(a.args[1]);
        case AtomKind::Eq: return print_term(a.args[0]) + " = " + print_term(a.args[1]);
        case AtomKind::Lt1: return "lt1(" + print_term(a.args[0]) + ", " + print_term(a.args[1]) + ")";
        case AtomKind::Lt2: return "lt2(" + print_term(a.args[0]) + ", " + print_term(a.args[1]) + ")";
        case AtomKind::PredP: return "P(" + print_term(a.args[0]) + ")";
        case AtomKind::RelR:
            return "R" + std::to_string(a.r_index) + "(" + print_term(a.args[0]) + ", " +
                   print_term(a.args[1]) + ")";
        case AtomKind::Vle: return "vle(" + print_term(a.args[0]) + ", " + print_term(a.args[1]) + ")";
        case AtomKind::Ann:
            return "Ann(" + print_term(a.args[0]) + ", " + a.gamma.to_string() + ", " +
                   a.delta.to_string() + ")";
        case AtomKind::Pow:
            return "Pow(" + std::to_string(a.pow_n) + ", " + std::to_string(a.pow_lambda) + ", " +
                   print_term(a.args[0]) + ")";
    }
    return "?";
}

// Precedence levels: 0 formula (quantifier), 1 disjunction, 2 conjunction,
// 3 unary.
std::string print_at(const Formula& f, int level) {
    switch (f.kind()) {
        case Formula::Kind::Atomic: return print_atom(f.atom_ref());
        case Formula::Kind::Not: {
            std::string inner = print_at(f.child(), 3);
            if (f.child().kind() != Formula::Kind::Not) inner = "(" + inner + ")";
            return "!" + inner;
        }
        case Formula::Kind::And: {
            // Children print one level tighter, so a nested conjunction is
            // parenthesized and the tree reparses with its shape intact.
            std::string out;
            for (std::size_t i = 0; i < f.children().size(); ++i) {
                if (i) out += " & ";
                out += print_at(f.children()[i], 3);
            }
            if (level > 2) out = "(" + out + ")";
            return out;
        }
        case Formula::Kind::Or: {
            std::string out;
            for (std::size_t i = 0; i < f.children().size(); ++i) {
                if (i) out += " | ";
                out += print_at(f.children()[i], 2);
            }
            if (level > 1) out = "(" + out + ")";
            return out;
        }
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            std::string out = (f.kind() == Formula::Kind::Exists ? "E " : "A ") + f.bound_var() +
                              ". " + print_at(f.body(), 0);
            if (level > 0) out = "(" + out + ")";
            return out;
        }
    }
    return "?";
}

}  // namespace

std::string print_formula(const Formula& f) { return print_at(f, 0); }

// ── Variables ───────────────────────────────────────────────────────────────

namespace {

void collect_term_vars(const Term& t, std::set<std::string>& out) {
    switch (t.kind()) {
        case Term::Kind::Variable: out.insert(t.var_name()); break;
        case Term::Kind::Sum:
            collect_term_vars(t.left(), out);
            collect_term_vars(t.right(), out);
            break;
        case Term::Kind::Scale: collect_term_vars(t.operand(), out); break;
        case Term::Kind::App:
            for (const auto& a : t.fn_args()) collect_term_vars(a, out);
            break;
        default: break;
    }
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (f.kind()) {
        case Formula::Kind::Atomic: {
            std::set<std::string> vars;
            for (const auto& t : f.atom_ref().args) collect_term_vars(t, vars);
            for (const auto& v : vars)
                if (!bound.count(v)) out.insert(v);
            break;
        }
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            bool inserted = bound.insert(f.bound_var()).second;
            collect_free(f.body(), bound, out);
            if (inserted) bound.erase(f.bound_var());
            break;
        }
        default:
            for (const auto& c : f.children()) collect_free(c, bound, out);
            break;
    }
}

}  // namespace

std::set<std::string> term_variables(const Term& t) {
    std::set<std::string> out;
    collect_term_vars(t, out);
    return out;
}

std::set<std::string> free_variables(const Formula& f) {
    std::set<std::string> bound, out;
    collect_free(f, bound, out);
    return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
    std::string candidate = base + "'";
    while (taken.count(candidate)) candidate += "'";
    return candidate;
}

// ── Substitution ────────────────────────────────────────────────────────────

Term term_substitute(const Term& in, const std::string& var, const Term& t) {
    switch (in.kind()) {
        case Term::Kind::Variable: return in.var_name() == var ? t : in;
        case Term::Kind::Sum:
            return Term::sum(term_substitute(in.left(), var, t),
                             term_substitute(in.right(), var, t));
        case Term::Kind::Scale:
            return Term::scale(in.rat_value(), term_substitute(in.operand(), var, t));
        case Term::Kind::App: {
            std::vector<Term> args;
            args.reserve(in.fn_args().size());
            for (const auto& a : in.fn_args()) args.push_back(term_substitute(a, var, t));
            return Term::app(in.fn_name(), std::move(args));
        }
        default: return in;
    }
}

Formula substitute(const Formula& f, const std::string& var, const Term& t) {
    switch (f.kind()) {
        case Formula::Kind::Atomic: {
            Atom a = f.atom_ref();
            for (auto& arg : a.args) arg = term_substitute(arg, var, t);
            return Formula::atom(std::move(a));
        }
        case Formula::Kind::Not: return Formula::negation(substitute(f.child(), var, t));
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<Formula> out;
            out.reserve(f.children().size());
            for (const auto& c : f.children()) out.push_back(substitute(c, var, t));
            return f.kind() == Formula::Kind::And ? Formula::conjunction(std::move(out))
                                                  : Formula::disjunction(std::move(out));
        }
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            if (f.bound_var() == var) return f;  // bound occurrence, untouched
            std::set<std::string> in_t = term_variables(t);
            std::string bound = f.bound_var();
            Formula body = f.body();
            if (in_t.count(bound)) {
                std::set<std::string> taken = in_t;
                auto body_vars = free_variables(body);
                taken.insert(body_vars.begin(), body_vars.end());
                taken.insert(var);
                std::string renamed = fresh_name(bound, taken);
                body = substitute(body, bound, Term::variable(renamed));
                bound = renamed;
            }
            Formula new_body = substitute(body, var, t);
            return f.kind() == Formula::Kind::Exists ? Formula::exists(bound, new_body)
                                                     : Formula::forall(bound, new_body);
        }
    }
    return f;
}

// ── Disjuncts ───────────────────────────────────────────────────────────────

namespace {
void flatten_or(const Formula& f, std::vector<Formula>& out) {
    if (f.kind() == Formula::Kind::Or) {
        for (const auto& c : f.children()) flatten_or(c, out);
    } else {
        out.push_back(f);
    }
}
}  // namespace

std::vector<Formula> disjuncts(const Formula& f) {
    std::vector<Formula> out;
    flatten_or(f, out);
    return out;
}

// ── Bound-variable normalization ────────────────────────────────────────────

namespace {

Formula normalize_rec(const Formula& f, std::set<std::string>& taken) {
    switch (f.kind()) {
        case Formula::Kind::Atomic: return f;
        case Formula::Kind::Not: return Formula::negation(normalize_rec(f.child(), taken));
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<Formula> out;
            out.reserve(f.children().size());
            for (const auto& c : f.children()) out.push_back(normalize_rec(c, taken));
            return f.kind() == Formula::Kind::And ? Formula::conjunction(std::move(out))
                                                  : Formula::disjunction(std::move(out));
        }
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            std::string bound = f.bound_var();
            Formula body = f.body();
            if (taken.count(bound)) {
                std::string renamed = fresh_name(bound, taken);
                body = substitute(body, bound, Term::variable(renamed));
                bound = renamed;
            }
            taken.insert(bound);
            Formula new_body = normalize_rec(body, taken);
            return f.kind() == Formula::Kind::Exists ? Formula::exists(bound, new_body)
                                                     : Formula::forall(bound, new_body);
        }
    }
    return f;
}

}  // namespace

Formula normalize_variables(const Formula& f) {
    std::set<std::string> taken = free_variables(f);
    return normalize_rec(f, taken);
}

// ── Parser ──────────────────────────────────────────────────────────────────

namespace {

class Parser {
public:
    Parser(std::string_view text, const Signature& sig) : text_(text), sig_(sig) {}

    Formula parse_formula_all() {
        Formula f = formula();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return f;
    }

    Term parse_term_all() {
        Term t = term();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return t;
    }

private:
    std::string_view text_;
    const Signature& sig_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) { throw ParseError("syntax error: " + msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!eat(c)) fail(std::string("expected '") + what + "'");
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }

    std::string ident() {
        skip_ws();
        if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail("expected identifier");
        std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    static bool is_reserved(const std::string& s) {
        if (s == "E" || s == "A" || s == "P" || s == "f" || s == "vle" || s == "Ann" ||
            s == "Pow" || s == "lt1" || s == "lt2" || s == "inf")
            return true;
        if (s.size() >= 1 && s[0] == 'R') {
            bool digits = s.size() > 1;
            for (std::size_t i = 1; i < s.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(s[i]))) digits = false;
            if (digits || s.size() == 1) return true;
        }
        return false;
    }

    Rat rational() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
        std::size_t digits_from = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == digits_from) fail("expected number");
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '/') {
            ++pos_;
            skip_ws();
            std::size_t den_from = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == den_from) fail("expected denominator");
        }
        return parse_rational(text_.substr(start, pos_ - start));
    }

    long long natural() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected natural number");
        return std::stoll(std::string(text_.substr(start, pos_ - start)));
    }

    ExtInt ext_bound(bool allow_pos_inf) {
        skip_ws();
        if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) ||
                                    (text_[pos_] == '-' && pos_ + 1 < text_.size() &&
                                     std::isalpha(static_cast<unsigned char>(text_[pos_ + 1]))))) {
            bool neg = text_[pos_] == '-';
            std::size_t save = pos_;
            if (neg) ++pos_;
            std::string word = ident();
            if (word == "inf") return neg ? ExtInt::neg_inf() : ExtInt::pos_inf();
            pos_ = save;
            fail(allow_pos_inf ? "expected integer or 'inf'" : "expected integer or '-inf'");
        }
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
        std::size_t digits_from = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == digits_from) fail("expected integer bound");
        return ExtInt(std::stoll(std::string(text_.substr(start, pos_ - start))));
    }

    // formula := quant | disjunction
    Formula formula() {
        skip_ws();
        if (auto q = try_quantifier()) return *q;
        return disjunction_level();
    }

    std::optional<Formula> try_quantifier() {
        skip_ws();
        std::size_t save = pos_;
        if (pos_ >= text_.size() || (text_[pos_] != 'E' && text_[pos_] != 'A')) return std::nullopt;
        char q = text_[pos_];
        ++pos_;
        // "E" / "A" must be a standalone token followed by an identifier.
        if (pos_ < text_.size() && ident_char(text_[pos_])) {
            pos_ = save;
            return std::nullopt;
        }
        skip_ws();
        if (pos_ >= text_.size() || !ident_start(text_[pos_])) {
            pos_ = save;
            return std::nullopt;
        }
        std::string var = ident();
        if (is_reserved(var)) fail("reserved word used as variable: " + var);
        expect('.', ".");
        Formula body = formula();
        return q == 'E' ? Formula::exists(var, body) : Formula::forall(var, body);
    }

    Formula disjunction_level() {
        std::vector<Formula> parts;
        parts.push_back(conjunction_level());
        while (eat('|')) parts.push_back(conjunction_level());
        return Formula::disjunction(std::move(parts));
    }

    Formula conjunction_level() {
        std::vector<Formula> parts;
        parts.push_back(unary_level());
        while (eat('&')) parts.push_back(unary_level());
        return Formula::conjunction(std::move(parts));
    }

    Formula unary_level() {
        skip_ws();
        if (eat('!')) return Formula::negation(unary_level());
        if (auto q = try_quantifier()) return *q;
        if (peek() == '(') {
            // Could be a parenthesized formula or a term that begins with
            // '(' (scaling, pair constant, grouping).  Try the formula
            // reading first and fall back on failure.
            std::size_t save = pos_;
            ++pos_;  // consume '('
            try {
                Formula inner = formula();
                expect(')', ")");
                return inner;
            } catch (const ParseError&) {
                pos_ = save;
            }
            return atom_from_term();
        }
        return atom();
    }

    Formula atom() {
        skip_ws();
        if (pos_ < text_.size() && ident_start(text_[pos_])) {
            std::size_t save = pos_;
            std::string word = ident();
            if (peek() == '(') {
                if (word == "P") {
                    if (!sig_.pred_P) fail("unknown symbol 'P' in this signature");
                    expect('(', "(");
                    Atom a;
                    a.kind = AtomKind::PredP;
                    a.args.push_back(term());
                    expect(')', ")");
                    return Formula::atom(std::move(a));
                }
                if (word == "vle") {
                    if (!sig_.vle) fail("unknown symbol 'vle' in this signature");
                    return binary_builtin(AtomKind::Vle);
                }
                if (word == "lt1" || word == "lt2") {
                    if (!sig_.coord_orders) fail("unknown symbol '" + word + "' in this signature");
                    return binary_builtin(word == "lt1" ? AtomKind::Lt1 : AtomKind::Lt2);
                }
                if (word == "Ann") {
                    if (!sig_.ann_pow) fail("unknown symbol 'Ann' in this signature");
                    expect('(', "(");
                    Atom a;
                    a.kind = AtomKind::Ann;
                    a.args.push_back(term());
                    expect(',', ",");
                    a.gamma = ext_bound(true);
                    expect(',', ",");
                    a.delta = ext_bound(false);
                    expect(')', ")");
                    if (a.gamma.is_finite() && a.delta.is_finite() &&
                        a.gamma.value() < a.delta.value())
                        fail("annulus bounds require gamma >= delta");
                    return Formula::atom(std::move(a));
                }
                if (word == "Pow") {
                    if (!sig_.ann_pow) fail("unknown symbol 'Pow' in this signature");
                    expect('(', "(");
                    Atom a;
                    a.kind = AtomKind::Pow;
                    a.pow_n = static_cast<unsigned>(natural());
                    if (a.pow_n < 1) fail("power index must be >= 1");
                    expect(',', ",");
                    a.pow_lambda = static_cast<unsigned>(natural());
                    expect(',', ",");
                    a.args.push_back(term());
                    expect(')', ")");
                    return Formula::atom(std::move(a));
                }
                if (word.size() > 1 && word[0] == 'R') {
                    bool digits = true;
                    for (std::size_t i = 1; i < word.size(); ++i)
                        if (!std::isdigit(static_cast<unsigned char>(word[i]))) digits = false;
                    if (digits) {
                        if (!sig_.rel_Rn) fail("unknown symbol '" + word + "' in this signature");
                        Formula f = binary_builtin(AtomKind::RelR);
                        Atom a = f.atom_ref();
                        a.r_index = static_cast<unsigned>(std::stoul(word.substr(1)));
                        return Formula::atom(std::move(a));
                    }
                }
            }
            pos_ = save;
        }
        return atom_from_term();
    }

    Formula binary_builtin(AtomKind kind) {
        expect('(', "(");
        Atom a;
        a.kind = kind;
        a.args.push_back(term());
        expect(',', ",");
        a.args.push_back(term());
        expect(')', ")");
        return Formula::atom(std::move(a));
    }

    Formula atom_from_term() {
        Term lhs = term();
        skip_ws();
        if (eat('<')) {
            if (!sig_.order) fail("'<' is not in this signature");
            return Formula::less(std::move(lhs), term());
        }
        if (eat('=')) return Formula::eq(std::move(lhs), term());
        fail("expected '<' or '=' after term");
    }

    Term term() {
        Term t = summand();
        while (true) {
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '+') {
                ++pos_;
                if (!sig_.group_ops) fail("'+' is not in this signature");
                t = Term::sum(std::move(t), summand());
            } else {
                break;
            }
        }
        return t;
    }

    Term summand() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expected term");
        char c = text_[pos_];
        if (c == '(') return paren_term();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
            Rat q = rational();
            if (q == 0) return Term::zero();
            if (!sig_.rational_literals) fail("rational constants are not in this signature");
            return Term::rational_const(std::move(q));
        }
        if (ident_start(c)) {
            std::string word = ident();
            if (word == "f") {
                if (!sig_.fn_flip) fail("unknown symbol 'f' in this signature");
                expect('(', "(");
                Term arg = term();
                expect(')', ")");
                return Term::flip(std::move(arg));
            }
            if (is_reserved(word)) fail("reserved word used as variable: " + word);
            return Term::variable(std::move(word));
        }
        fail("expected term");
    }

    Term paren_term() {
        std::size_t save = pos_;
        expect('(', "(");
        skip_ws();
        if (pos_ < text_.size() &&
            (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-')) {
            try {
                Rat first = rational();
                skip_ws();
                if (eat(',')) {
                    if (!sig_.pair_literals) fail("pair constants are not in this signature");
                    Rat second = rational();
                    expect(')', ")");
                    return Term::pair_const(std::move(first), std::move(second));
                }
                if (eat(')')) {
                    skip_ws();
                    if (pos_ < text_.size() && text_[pos_] == '*') {
                        ++pos_;
                        if (!sig_.group_ops) fail("scaling is not in this signature");
                        return Term::scale(std::move(first), summand());
                    }
                    // "(q)" without '*': plain parenthesized constant.
                    if (first == 0) return Term::zero();
                    if (!sig_.rational_literals)
                        fail("rational constants are not in this signature");
                    return Term::rational_const(std::move(first));
                }
            } catch (const ParseError&) {
                pos_ = save;
                expect('(', "(");
            }
        }
        // Grouped term.
        Term inner = term();
        expect(')', ")");
        return inner;
    }
};

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig) {
    return Parser(text, sig).parse_formula_all();
}

Term parse_term(std::string_view text, const Signature& sig) {
    return Parser(text, sig).parse_term_all();
}

}  // namespace dpmin
