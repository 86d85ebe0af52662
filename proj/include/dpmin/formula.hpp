#ifndef DPMIN_FORMULA_HPP
#define DPMIN_FORMULA_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dpmin/element.hpp"
#include "dpmin/extint.hpp"
#include "dpmin/rational.hpp"

namespace dpmin {

// ---------------------------------------------------------------------------
// First-order syntax over a pluggable signature.
//
// Concrete grammar (ASCII):
//   formula  := quant | disj
//   quant    := ("E"|"A") ident "." formula
//   disj     := conj ("|" conj)*
//   conj     := unary ("&" unary)*
//   unary    := "!" unary | "(" formula ")" | quant | atom
//   atom     := "P(" term ")" | "R"<nat> "(" term "," term ")"
//             | "vle(" term "," term ")"
//             | "Ann(" term "," gamma "," delta ")"
//             | "Pow(" nat "," nat "," term ")"
//             | "lt1(" term "," term ")" | "lt2(" term "," term ")"
//             | term ("<"|"=") term
//   term     := summand ("+" summand)*
//   summand  := "(" rational ")*" summand     (rational scaling)
//             | "(" rational "," rational ")" (pair constant)
//             | "(" term ")"                  (grouping)
//             | "f(" term ")" | ident | rational | "0"
//   gamma    := int | "inf";  delta := int | "-inf"
//
// Values are immutable trees behind shared nodes; parse/print/substitute are
// pure and safe to call concurrently.
// ---------------------------------------------------------------------------

class Term {
public:
    enum class Kind { Variable, Zero, RatConst, PairConst, Sum, Scale, App };

    static Term variable(std::string name);
    static Term zero();
    static Term rational_const(Rat q);
    static Term pair_const(Rat first, Rat second);
    static Term sum(Term left, Term right);
    static Term scale(Rat coeff, Term operand);
    static Term app(std::string fn, std::vector<Term> args);
    // Convenience for the lexicographic flip.
    static Term flip(Term t) { return app("f", {std::move(t)}); }

    Kind kind() const { return node_->kind; }
    const std::string& var_name() const { return node_->name; }
    const Rat& rat_value() const { return node_->q; }        // RatConst or Scale coeff
    const Rat& pair_first() const { return node_->q; }
    const Rat& pair_second() const { return node_->q2; }
    const Term& left() const { return node_->children[0]; }  // Sum
    const Term& right() const { return node_->children[1]; }
    const Term& operand() const { return node_->children[0]; }  // Scale
    const std::string& fn_name() const { return node_->name; }
    const std::vector<Term>& fn_args() const { return node_->children; }

    friend bool operator==(const Term& a, const Term& b) { return equal(a, b); }
    friend bool operator!=(const Term& a, const Term& b) { return !equal(a, b); }

private:
    struct Node {
        Kind kind;
        std::string name;        // Variable / App
        Rat q, q2;               // RatConst, Scale coeff, PairConst
        std::vector<Term> children;
    };
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static bool equal(const Term& a, const Term& b);

    std::shared_ptr<const Node> node_;
};

enum class AtomKind { Less, Eq, Lt1, Lt2, PredP, RelR, Vle, Ann, Pow };

struct Atom {
    AtomKind kind = AtomKind::Eq;
    std::vector<Term> args;

    unsigned r_index = 0;                 // RelR: the n of R_n
    ExtInt gamma, delta;                  // Ann: gamma >= v(t) >= delta
    unsigned pow_n = 1, pow_lambda = 0;   // Pow: t in lambda * P_n

    friend bool operator==(const Atom& a, const Atom& b);
    friend bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }
};

class Formula {
public:
    enum class Kind { Atomic, Not, And, Or, Exists, Forall };

    // Default-constructed formulas are the trivially true atom 0 = 0.
    Formula();

    static Formula atom(Atom a);
    static Formula negation(Formula f);
    // Empty list folds to the trivially true atom 0 = 0; singleton unwraps.
    static Formula conjunction(std::vector<Formula> fs);
    // Empty list folds to the trivially false atom 0 < 0; singleton unwraps.
    static Formula disjunction(std::vector<Formula> fs);
    static Formula exists(std::string var, Formula body);
    static Formula forall(std::string var, Formula body);

    static Formula trivially_true();
    static Formula trivially_false();

    // Convenience for binary atoms.
    static Formula less(Term a, Term b);
    static Formula eq(Term a, Term b);

    Kind kind() const { return node_->kind; }
    const Atom& atom_ref() const { return node_->atom; }
    const std::vector<Formula>& children() const { return node_->children; }
    const Formula& child() const { return node_->children[0]; }
    const std::string& bound_var() const { return node_->name; }
    const Formula& body() const { return node_->children[0]; }

    bool is_quantifier_free() const;

    friend bool operator==(const Formula& a, const Formula& b) { return equal(a, b); }
    friend bool operator!=(const Formula& a, const Formula& b) { return !equal(a, b); }

private:
    struct Node {
        Kind kind;
        Atom atom;
        std::string name;  // bound variable
        std::vector<Formula> children;
    };
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static bool equal(const Formula& a, const Formula& b);

    std::shared_ptr<const Node> node_;
};

// Which pieces of the concrete syntax a structure admits.
struct Signature {
    std::string name;
    bool order = false;         // '<'
    bool coord_orders = false;  // lt1 / lt2
    bool pred_P = false;
    bool rel_Rn = false;
    bool vle = false;
    bool ann_pow = false;
    bool fn_flip = false;       // unary f
    bool group_ops = false;     // '+', '(q)*', scaling
    bool rational_literals = false;
    bool pair_literals = false;
};

using Assignment = std::map<std::string, Element>;

// Parsing / printing.  print is canonical: parse(print(f), sig) == f.
Formula parse_formula(std::string_view text, const Signature& sig);
Term parse_term(std::string_view text, const Signature& sig);
std::string print_formula(const Formula& f);
std::string print_term(const Term& t);

std::set<std::string> free_variables(const Formula& f);
std::set<std::string> term_variables(const Term& t);

// Capture-avoiding substitution of `t` for free occurrences of `var`.
Formula substitute(const Formula& f, const std::string& var, const Term& t);
Term term_substitute(const Term& in, const std::string& var, const Term& t);

// Top-level disjuncts after flattening nested disjunctions.
std::vector<Formula> disjuncts(const Formula& f);

// Renames bound variables so no variable is shadowed and no bound name
// collides with a free name.
Formula normalize_variables(const Formula& f);

// A fresh name based on `base` avoiding everything in `taken`.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

}  // namespace dpmin

#endif  // DPMIN_FORMULA_HPP
