#ifndef DPMIN_STRUCTURE_HPP
#define DPMIN_STRUCTURE_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dpmin/formula.hpp"

namespace dpmin {

// A concrete, exactly computable structure.  Implementations are immutable
// and all operations are pure, so handles are freely shared across threads.
//
// Quantifier evaluation contract: witness_grid(body, var, asg) returns a
// finite set of candidate elements that is provably sufficient for deciding
// "E var. body" and "A var. body" under asg, for quantifier-free bodies in
// the structure's declared constraint class.  Atom truth over the grid's
// refinement is piecewise constant, the grid contains every breakpoint, a
// point strictly between any two consecutive breakpoints and points beyond
// the extremes, so it meets every truth cell.  Structures without an exact
// builder (series, p-adic) throw EvalError instead of approximating.
class Structure {
public:
    virtual ~Structure() = default;

    const std::string& name() const { return name_; }
    const Signature& sig() const { return sig_; }

    virtual Element term_value(const Term& t, const Assignment& asg) const = 0;
    virtual bool atom_value(const Atom& a, const Assignment& asg) const = 0;

    virtual std::vector<Element> witness_grid(const Formula& qf_body, const std::string& var,
                                              const Assignment& asg) const;

    // Deterministic seeded sampling; equal (count, seed) yields equal output.
    virtual std::vector<Element> sample(std::size_t count, std::uint64_t seed) const = 0;

    virtual Element parse_element(std::string_view text) const = 0;

protected:
    Structure(std::string name, Signature sig) : name_(std::move(name)), sig_(std::move(sig)) {}

private:
    std::string name_;
    Signature sig_;
};

using StructureHandle = std::shared_ptr<const Structure>;

// (Q, <): dense linear order with rational constants.
StructureHandle make_simple_dlo();
// Q x Q with two independent coordinate orders lt1, lt2; no group structure.
// Not dp-minimal; the positive control for pattern searches.
StructureHandle make_pair_dlo();
// The lexicographically ordered divisible group on Q x Q with the
// first-coordinate flip f and rational scaling.
StructureHandle make_qlex();
// Finite-support series model with P, R_n (quantifier-free evaluation only).
StructureHandle make_hahn();
// Valued-field fragment over Q_p approximations (quantifier-free only).
StructureHandle make_padic(long long p, int precision);

// CLI names: "simple_dlo", "pair_dlo", "qlex", "hahn", "padic".
// "padic" consumes the prime/precision arguments; others ignore them.
StructureHandle make_structure(const std::string& name, long long p = 3, int precision = 12);

// Tarski semantics; exact quantifiers via witness_grid.  Throws EvalError if
// a quantifier body is not quantifier-free or the structure has no builder.
bool evaluate(const Structure& s, const Formula& f, const Assignment& asg);

// First grid element satisfying the quantifier-free body, in grid order.
std::optional<Element> exists_witness(const Structure& s, const Formula& qf_body,
                                      const std::string& var, const Assignment& asg);

}  // namespace dpmin

#endif  // DPMIN_STRUCTURE_HPP
