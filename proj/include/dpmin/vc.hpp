#ifndef DPMIN_VC_HPP
#define DPMIN_VC_HPP

#include <cstddef>
#include <vector>

#include "dpmin/ict.hpp"
#include "dpmin/structure.hpp"

namespace dpmin {

// Complete Delta-types over a finite parameter set A, with one realizing
// witness per type.  Bits are ordered formula-major: bit (d * |A| + a) is
// delta[d] evaluated at parameter tuple A[a].
struct TypeTable {
    std::vector<ParamFormula> delta;
    std::vector<ElementTuple> params;
    std::vector<std::pair<std::vector<bool>, Element>> realized;
    std::size_t count() const { return realized.size(); }
};

// Exact count by partition refinement over the structure's endpoint grid for
// the conjunction of all instances.  The grid meets every truth cell of every
// instance, so every realized type vector has a grid representative.
// Counting parallelizes over grid chunks; the first witness in grid order is
// kept, so output is deterministic.
TypeTable count_delta_types(const Structure& s, const std::vector<ParamFormula>& delta,
                            const std::vector<ElementTuple>& A, std::size_t workers = 0);

struct ProfilePoint {
    std::size_t size = 0;
    std::size_t count = 0;
};

struct VcProfile {
    std::vector<ProfilePoint> points;
    double slope = 0.0;                // OLS slope of log(count) against log(size)
    double intercept = 0.0;
    std::vector<double> residuals;
    double max_count_over_size = 0.0;  // diagnostic only; no uniform-bound claim
};

// Least squares on the log-log points.  Purely diagnostic; the counts are
// the ground truth.
VcProfile fit_profile(const std::vector<ProfilePoint>& points);

}  // namespace dpmin

#endif  // DPMIN_VC_HPP
