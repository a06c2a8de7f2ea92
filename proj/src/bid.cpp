#include "ipalm/bid.hpp"

#include <cmath>
#include <limits>

#include "ipalm/errors.hpp"
#include "ipalm/prox.hpp"

namespace ipalm {

void BidParams::validate() const {
    if (!(lambda > 0.0) || !(theta > 0.0)) throw ParameterError("bid: lambda and theta must be positive");
    if (kernel_rows == 0 || kernel_cols == 0 || kernel_rows % 2 == 0 || kernel_cols % 2 == 0) {
        throw ParameterError("bid: kernel dimensions must be odd and positive");
    }
    if (!(kernel_step_scale >= 1.0)) throw ParameterError("bid: kernel step scale must be >= 1");
}

double bid_smooth_value(const ImageRef& u, const ImageRef& b, const ImageRef& f, const BidParams& params) {
    double reg = 0.0;
    for (int p = 1; p <= 8; ++p) reg += phi_value(dir_grad(u, p), params.theta);
    const RowMatrix residual = circ_conv(u, b, params.path) - f;
    return reg + 0.5 * params.lambda * residual.squaredNorm();
}

std::pair<RowMatrix, RowMatrix> bid_grads(const ImageRef& u, const ImageRef& b, const ImageRef& f,
                                          const BidParams& params) {
    if (u.rows() != f.rows() || u.cols() != f.cols()) throw ShapeError("bid: image and data shapes differ");
    const RowMatrix residual = circ_conv(u, b, params.path) - f;
    RowMatrix grad_u = params.lambda * circ_correlate(residual, b, params.path);
    for (int p = 1; p <= 8; ++p) grad_u += dir_grad_adjoint(phi_grad(dir_grad(u, p), params.theta), p);
    RowMatrix grad_b = params.lambda * kernel_correlate(residual, u, static_cast<std::size_t>(b.rows()),
                                                        static_cast<std::size_t>(b.cols()), params.path);
    return {std::move(grad_u), std::move(grad_b)};
}

BidProblem::BidProblem(RowMatrix blurred, BidParams params) : f_(std::move(blurred)), params_(params) {
    params_.validate();
    if (f_.size() == 0) throw DataError("bid: empty image");
    if (!f_.allFinite() || (f_.array() < 0.0).any() || (f_.array() > 1.0).any()) {
        throw DataError("bid: blurred image must have entries in [0, 1]");
    }
    if (params_.kernel_rows > static_cast<std::size_t>(f_.rows()) ||
        params_.kernel_cols > static_cast<std::size_t>(f_.cols())) {
        throw ShapeError("bid: kernel larger than image");
    }
}

double BidProblem::smooth_value(const BlockVector& x) const {
    return bid_smooth_value(x[0].matrix(), x[1].matrix(), f_, params_);
}

double BidProblem::nonsmooth_value(std::size_t block, const Tensor& xi) const {
    const double inf = std::numeric_limits<double>::infinity();
    const auto v = xi.vec();
    if ((v.array() < 0.0).any()) return inf;
    if (block == 0) return (v.array() > 1.0).any() ? inf : 0.0;
    return std::abs(v.sum() - 1.0) <= 1e-10 ? 0.0 : inf;
}

Tensor BidProblem::partial_gradient(std::size_t block, const BlockVector& x) const {
    const auto u = x[0].matrix();
    const auto b = x[1].matrix();
    if (block == 0) {
        const RowMatrix residual = circ_conv(u, b, params_.path) - f_;
        RowMatrix grad = params_.lambda * circ_correlate(residual, b, params_.path);
        for (int p = 1; p <= 8; ++p) grad += dir_grad_adjoint(phi_grad(dir_grad(u, p), params_.theta), p);
        return Tensor::from_matrix(grad);
    }
    if (block == 1) {
        const RowMatrix residual = circ_conv(u, b, params_.path) - f_;
        return Tensor::from_matrix(params_.lambda * kernel_correlate(residual, u, params_.kernel_rows,
                                                                     params_.kernel_cols, params_.path));
    }
    throw ShapeError("bid has blocks 0 and 1 only");
}

Tensor BidProblem::prox(std::size_t block, double, const Tensor& p) const {
    return block == 0 ? prox_box01(p) : prox_simplex(p);
}

BlockVector BidProblem::initial_point(std::uint64_t) const {
    Tensor kernel({params_.kernel_rows, params_.kernel_cols},
                  1.0 / static_cast<double>(params_.kernel_rows * params_.kernel_cols));
    return BlockVector({Tensor::from_matrix(f_), std::move(kernel)});
}

BidProblem make_bid_problem(RowMatrix blurred, BidParams params) {
    return BidProblem(std::move(blurred), params);
}

}  // namespace ipalm
