#ifndef DPMIN_QE_LEX_HPP
#define DPMIN_QE_LEX_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dpmin/formula.hpp"
#include "dpmin/points.hpp"
#include "dpmin/structure.hpp"

namespace dpmin {

// ---------------------------------------------------------------------------
// Quantifier elimination for the lexicographic group.
//
// Terms normalize to  sum q_i x_i + sum r_j f(x_j) + constant,  because f is
// an involution commuting with + and rational scaling.  A single existential
// over strict bounds  s0 < x < s1 & t0 < f(x) < t1  eliminates to a
// quantifier-free condition on the bounds.  Two interchangeable rules are
// provided:
//
//   Paper      - the five-bullet conjunction, kept verbatim for comparison
//                and regression work.  It disagrees with the exact semantics
//                on boundary-column inputs (see the recorded instance in the
//                tests: s0=(0,0), s1=(1,0), t0=(0,0), t1=(1,0) is satisfiable
//                via x=(0,1) yet the bullets reject it).
//   Validated  - a column-geometry case split: the x-range and the f-pulled
//                t-range are column intervals with half-open boundary
//                columns; the existential holds iff the intervals share an
//                interior column, an endpoint column of one lies inside the
//                other, or an endpoint-endpoint contact has overlapping
//                second-coordinate ranges.  Certified against the exact
//                endpoint-grid oracle; never asserted as anyone's theorem.
// ---------------------------------------------------------------------------

// Normal form of a group term relative to all variables.
struct NormalTerm {
    std::map<std::string, Rat> linear;   // coefficient of x_i
    std::map<std::string, Rat> flipped;  // coefficient of f(x_i)
    LexPoint constant{Rat(0), Rat(0)};

    bool is_constant() const { return linear.empty() && flipped.empty(); }

    NormalTerm operator+(const NormalTerm& o) const;
    NormalTerm operator-() const;
    NormalTerm operator-(const NormalTerm& o) const { return *this + (-o); }
    NormalTerm scaled(const Rat& q) const;
    NormalTerm flipped_form() const;  // applies f

    friend bool operator==(const NormalTerm& a, const NormalTerm& b) {
        return a.linear == b.linear && a.flipped == b.flipped && a.constant == b.constant;
    }
};

// Pushes f down to variables with f(f(u)) = u, f(a+b) = f(a)+f(b),
// f(q a) = q f(a); drops zero coefficients.
NormalTerm normalize_term(const Term& t);

// Canonical term for a normal form (variables in name order).
Term denormalize(const NormalTerm& nt);

// The quantifier-free block  s0 < x < s1 & t0 < f(x) < t1; absent bounds
// mean -inf / +inf and drop their conjuncts.
struct ExistsBlock {
    std::string var = "x";
    std::optional<NormalTerm> lower_x, upper_x;  // s0, s1
    std::optional<NormalTerm> lower_f, upper_f;  // t0, t1
};

enum class QeRule { Paper, Validated };

// The same-column predicate:
//   (a = b) | (a < b & f(a) < f(b)) | (b < a & f(b) < f(a)).
Formula same_column_formula(const Term& a, const Term& b);

// The block as a formula, for oracle comparisons.
Formula block_to_formula(const ExistsBlock& block);

// Quantifier-free equivalent of the block under the chosen rule.  The
// Validated rule agrees with the exact oracle; Paper is the verbatim rule.
Formula eliminate_exists(const ExistsBlock& block, QeRule rule);

// Innermost-first driver.  Bodies are normalized (negations resolved by
// order trichotomy, disjunctive split, one bound kept per side by a
// maximal/minimal case split); atoms mixing x and f(x) with two nonzero
// coefficients are outside the supported shape and raise EvalError.
Formula eliminate_all(const Formula& phi, QeRule rule);

struct QeAgreement {
    std::size_t assignments = 0;
    std::size_t disagreements = 0;
    std::vector<std::string> examples;  // first few disagreeing assignments
    bool ok() const { return disagreements == 0; }
};

// Evaluates `original` (the quantified formula) and `eliminated` on each
// assignment with the exact evaluator and reports disagreements.
QeAgreement validate_against_oracle(const Structure& qlex, const Formula& original,
                                    const Formula& eliminated,
                                    const std::vector<Assignment>& assignments);

}  // namespace dpmin

#endif  // DPMIN_QE_LEX_HPP
