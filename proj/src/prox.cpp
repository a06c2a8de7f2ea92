#include "ipalm/prox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ipalm/errors.hpp"

namespace ipalm {

Tensor prox_box01(const Tensor& p) {
    Tensor out = p;
    for (double& v : out.values()) v = std::max(0.0, std::min(1.0, v));
    return out;
}

Tensor prox_nonneg(const Tensor& p) {
    Tensor out = p;
    for (double& v : out.values()) v = std::max(v, 0.0);
    return out;
}

Tensor prox_l0_nonneg_cols(const Tensor& p, std::size_t s) {
    if (p.rank() != 2) throw ShapeError("prox_l0_nonneg_cols needs a matrix, got " + shape_to_string(p.shape()));
    const std::size_t rows = p.shape()[0];
    const std::size_t cols = p.shape()[1];
    if (s > rows) {
        throw ParameterError("prox_l0_nonneg_cols: sparsity " + std::to_string(s) + " exceeds column length " +
                             std::to_string(rows));
    }
    Tensor out(p.shape(), 0.0);
    if (s == 0) return out;

    auto in = p.matrix();
    auto res = out.matrix();
    std::vector<std::size_t> order(rows);
    std::vector<double> col(rows);
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) col[i] = std::max(in(i, j), 0.0);
        if (s == rows) {
            for (std::size_t i = 0; i < rows; ++i) res(i, j) = col[i];
            continue;
        }
        std::iota(order.begin(), order.end(), std::size_t{0});
        // larger value first, lower row index on ties
        std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(s - 1), order.end(),
                         [&](std::size_t a, std::size_t b) {
                             return col[a] > col[b] || (col[a] == col[b] && a < b);
                         });
        for (std::size_t q = 0; q < s; ++q) res(order[q], j) = col[order[q]];
    }
    return out;
}

Tensor prox_simplex(const Tensor& p) {
    if (p.size() == 0) throw ShapeError("prox_simplex: empty input");
    const auto in = p.values();
    std::vector<double> sorted(in.begin(), in.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    // largest rho with sorted[rho] - (cumsum_rho - 1)/(rho + 1) > 0
    double cumsum = 0.0;
    double theta = 0.0;
    for (std::size_t r = 0; r < sorted.size(); ++r) {
        cumsum += sorted[r];
        const double candidate = (cumsum - 1.0) / static_cast<double>(r + 1);
        if (sorted[r] - candidate > 0.0) theta = candidate;
    }
    Tensor out = p;
    for (double& v : out.values()) v = std::max(v - theta, 0.0);
    return out;
}

Tensor prox_l1(const Tensor& p, double w) {
    if (!(w >= 0.0)) throw ParameterError("prox_l1: weight must be nonnegative");
    Tensor out = p;
    if (w == 0.0) return out;
    for (double& v : out.values()) {
        const double mag = std::abs(v) - w;
        v = mag > 0.0 ? std::copysign(mag, v) : 0.0;
    }
    return out;
}

Tensor prox_filter_constraint(const Tensor& d) {
    if (d.size() < 2) throw ShapeError("prox_filter_constraint: filter needs at least 2 entries");
    Tensor out = d;
    auto v = out.vec();
    v.array() -= v.mean();
    const double norm = v.norm();
    if (norm > 1.0) v /= norm;
    return out;
}

}  // namespace ipalm
