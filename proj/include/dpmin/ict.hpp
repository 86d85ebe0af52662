#ifndef DPMIN_ICT_HPP
#define DPMIN_ICT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpmin/structure.hpp"

namespace dpmin {

// A formula with one designated element variable and named parameter slots,
// in tuple order.
struct ParamFormula {
    Formula formula;
    std::string element_var;
    std::vector<std::string> params;
};

// Finite witness for a depth-two pattern: for every cell (i, j) the stored
// element satisfies
//   phi(x, a_i) & psi(x, b_j) & AND_{l != i} !phi(x, a_l) & AND_{k != j} !psi(x, b_k).
struct ICTCertificate {
    std::string structure;
    ParamFormula phi, psi;
    std::vector<ElementTuple> a_params;
    std::vector<ElementTuple> b_params;
    std::vector<std::vector<Element>> witnesses;  // [row][column]
};

struct SearchBudget {
    std::size_t max_rows = 6;             // cap on m and n
    std::size_t max_pool = 8;             // cap per parameter pool
    std::size_t max_selections = 2000000; // row/column selections per search
    std::size_t max_subsets = 200000;     // k-subset enumeration cap
};

// Exact re-verification of every cell.  On failure and with `why` non-null,
// stores the first failing cell.
bool check_ict_certificate(const Structure& s, const ICTCertificate& cert,
                           std::string* why = nullptr);

enum class SearchMode { Exhaustive, Seeded };

struct SearchOutcome {
    std::optional<ICTCertificate> certificate;
    bool exhaustive = false;  // an absence claim is complete over the pool
    std::size_t selections_tried = 0;
};

// Searches for a valid m x n certificate with parameter tuples drawn from
// the pools.  Pools are canonically sorted first; selections are enumerated
// in lexicographic index order and witnesses taken in grid order, so results
// are reproducible.  Exhaustive mode proves absence over the pool.
SearchOutcome search_ict(const Structure& s, const ParamFormula& phi, const ParamFormula& psi,
                         std::vector<ElementTuple> pool_a, std::vector<ElementTuple> pool_b,
                         std::size_t m, std::size_t n, const SearchBudget& budget,
                         SearchMode mode, std::uint64_t seed = 0, std::size_t seeded_tries = 256);

struct RefineOutcome {
    std::size_t disjunct_index = 0;  // 1-based
    std::size_t rows_retained = 0;
    ICTCertificate refined;
    std::string note;
};

// Picks a disjunct of phi and the largest row subset (>= 2 rows) such that
// every retained cell re-verifies with the chosen disjunct positive while
// exclusions still use full phi.  Witnesses are re-searched per cell.
// Disjuncts are tried in order; ties in retained size favor earlier ones.
// Throws EvalError when no disjunct supports two rows across all columns.
RefineOutcome refine_disjunct(const Structure& s, const ICTCertificate& cert);

// theta(x, y1, y2) = phi(x, y1) | psi(x, y2) over concatenated parameter
// tuples: rows i < m/2 become c_i = a_i ^ b_i, the rest d_j.  The original
// witnesses transfer cell-by-cell; the result is re-verified and any failure
// is an implementation bug, reported loudly.
ICTCertificate fuse_single_formula(const Structure& s, const ICTCertificate& cert);

// One formula of a Delta set: tuple slots plus the distinguished element.
struct DeltaFormula {
    Formula formula;
    std::vector<std::string> tuple_vars;
    std::string c_var;
};

struct BreakpointProfile {
    // blocks[k] = (first index, one past last) of the k-th maximal constant
    // run; fingerprints[k] is its Delta-type bit vector.
    std::vector<std::pair<std::size_t, std::size_t>> blocks;
    std::vector<std::vector<bool>> fingerprints;
    std::size_t block_count() const { return blocks.size(); }
};

BreakpointProfile breakpoint_profile(const Structure& s,
                                     const std::vector<ElementTuple>& sequence, const Element& c,
                                     const std::vector<DeltaFormula>& delta);

// Pairwise-consistent rows with k0-inconsistent phi instances and
// k1-inconsistent psi instances, all verified by exact emptiness checks.
struct InpCertificate {
    std::string structure;
    ParamFormula phi, psi;
    unsigned k0 = 2, k1 = 2;
    std::vector<ElementTuple> a_params;
    std::vector<ElementTuple> b_params;
    std::vector<std::vector<Element>> witnesses;  // [i][j] satisfies phi_i & psi_j
};

bool check_inp_certificate(const Structure& s, const InpCertificate& cert,
                           const SearchBudget& budget, std::string* why = nullptr);

// JSON round trip so runs are replayable through check_ict_certificate.
std::string serialize_certificate(const ICTCertificate& cert, long long p = 3,
                                  int precision = 12);
ICTCertificate deserialize_certificate(const std::string& text);

// Shared instantiation helper: renames the parameter slots of `pf` to
// prefixed fresh names, binds the tuple in `asg`, and returns the renamed
// formula (element variable renamed to `element_var` when it differs).
Formula instantiate(const ParamFormula& pf, const std::string& element_var,
                    const std::string& prefix, const ElementTuple& tuple, Assignment& asg);

}  // namespace dpmin

#endif  // DPMIN_ICT_HPP
