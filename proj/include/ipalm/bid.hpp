#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ipalm/block_model.hpp"
#include "ipalm/image_ops.hpp"

namespace ipalm {

struct BidParams {
    double lambda = 1e6;
    double theta = 1e4;
    std::size_t kernel_rows = 31;
    std::size_t kernel_cols = 31;
    // Multiplier c >= 1 on the kernel block's tau (smaller kernel steps).
    double kernel_step_scale = 5.0;
    ConvPath path = ConvPath::Direct;

    void validate() const;
};

// sum_p phi(grad_p u) + (lambda/2) ||u * b - f||^2
double bid_smooth_value(const ImageRef& u, const ImageRef& b, const ImageRef& f, const BidParams& params);

// (grad_u H, grad_b H)
std::pair<RowMatrix, RowMatrix> bid_grads(const ImageRef& u, const ImageRef& b, const ImageRef& f,
                                          const BidParams& params);

// Blind deconvolution with an edge-sparsity log penalty:
//
//     min_{u,b} sum_{p=1}^8 phi(grad_p u) + (lambda/2) ||u * b - f||^2
//     s.t. u in [0,1]^M, b in the unit simplex
//
// Block 0 is the image u, block 1 the kernel b. Both nonsmooth terms are
// convex indicators; Lipschitz moduli come from backtracking.
class BidProblem final : public Problem {
public:
    BidProblem(RowMatrix blurred, BidParams params);

    std::string name() const override { return "bid"; }
    std::size_t num_blocks() const override { return 2; }
    double smooth_value(const BlockVector& x) const override;
    double nonsmooth_value(std::size_t block, const Tensor& xi) const override;
    Tensor partial_gradient(std::size_t block, const BlockVector& x) const override;
    Tensor prox(std::size_t block, double t, const Tensor& p) const override;
    bool is_convex(std::size_t) const override { return true; }
    // u = f, b uniform (each entry 1/N). Independent of the seed.
    BlockVector initial_point(std::uint64_t seed) const override;

    const RowMatrix& blurred() const noexcept { return f_; }
    const BidParams& params() const noexcept { return params_; }
    // {1, kernel_step_scale}, for SolverOptions::tau_scale.
    std::vector<double> tau_scale() const { return {1.0, params_.kernel_step_scale}; }

private:
    RowMatrix f_;
    BidParams params_;
};

BidProblem make_bid_problem(RowMatrix blurred, BidParams params);

}  // namespace ipalm
