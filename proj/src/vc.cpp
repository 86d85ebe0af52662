#include "dpmin/vc.hpp"

#include <cmath>
#include <map>

#include "dpmin/errors.hpp"
#include "dpmin/parallel.hpp"

namespace dpmin {

TypeTable count_delta_types(const Structure& s, const std::vector<ParamFormula>& delta,
                            const std::vector<ElementTuple>& A, std::size_t workers) {
    TypeTable table;
    table.delta = delta;
    table.params = A;
    if (delta.empty() || A.empty()) {
        // The empty type is realized by any element.
        std::vector<Element> one = s.sample(1, 1);
        table.realized.emplace_back(std::vector<bool>(), one[0]);
        return table;
    }

    const std::string x = "__x";
    Assignment base;
    std::vector<Formula> instances;
    instances.reserve(delta.size() * A.size());
    for (std::size_t d = 0; d < delta.size(); ++d)
        for (std::size_t a = 0; a < A.size(); ++a)
            instances.push_back(instantiate(delta[d], x,
                                            "__d" + std::to_string(d) + "_" + std::to_string(a),
                                            A[a], base));

    std::vector<Element> grid =
        s.witness_grid(Formula::conjunction(instances), x, base);

    using Bucket = std::map<std::vector<bool>, Element>;
    Bucket merged = map_reduce<Bucket>(
        grid.size(), workers, Bucket{},
        [&](Bucket& acc, std::size_t g) {
            Assignment asg = base;
            asg[x] = grid[g];
            std::vector<bool> bits;
            bits.reserve(instances.size());
            for (const Formula& inst : instances) bits.push_back(evaluate(s, inst, asg));
            acc.emplace(std::move(bits), grid[g]);  // keeps the first witness
        },
        [](Bucket& out, Bucket& part) {
            for (auto& [bits, witness] : part) out.emplace(bits, witness);
        });

    for (auto& [bits, witness] : merged) table.realized.emplace_back(bits, witness);
    return table;
}

VcProfile fit_profile(const std::vector<ProfilePoint>& points) {
    VcProfile out;
    out.points = points;
    if (points.size() < 2) {
        if (points.size() == 1)
            out.max_count_over_size =
                static_cast<double>(points[0].count) / static_cast<double>(points[0].size);
        return out;
    }
    double n = static_cast<double>(points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : points) {
        double lx = std::log(static_cast<double>(p.size));
        double ly = std::log(static_cast<double>(p.count));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        out.max_count_over_size =
            std::max(out.max_count_over_size,
                     static_cast<double>(p.count) / static_cast<double>(p.size));
    }
    double denom = n * sxx - sx * sx;
    out.slope = denom == 0 ? 0.0 : (n * sxy - sx * sy) / denom;
    out.intercept = (sy - out.slope * sx) / n;
    for (const auto& p : points) {
        double lx = std::log(static_cast<double>(p.size));
        double ly = std::log(static_cast<double>(p.count));
        out.residuals.push_back(ly - (out.slope * lx + out.intercept));
    }
    return out;
}

}  // namespace dpmin
