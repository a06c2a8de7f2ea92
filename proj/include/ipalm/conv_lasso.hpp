#pragma once

#include <cstddef>
#include <filesystem>
#include <utility>

#include "ipalm/block_model.hpp"
#include "ipalm/image_ops.hpp"

namespace ipalm {

// l x l sampled Gaussian centred at ((l-1)/2, (l-1)/2), normalized to sum 1.
RowMatrix gaussian_filter(std::size_t size, double sigma);

struct ConvLassoParams {
    // Total number of filters p, including the fixed low-pass filter.
    std::size_t num_filters = 81;
    std::size_t filter_size = 9;
    double lambda = 0.2;
    // Standard deviation of the fixed low-pass filter; <= 0 selects size / 4.
    double sigma = 0.0;
    ConvPath path = ConvPath::Direct;

    void validate() const;
    double effective_sigma() const { return sigma > 0.0 ? sigma : static_cast<double>(filter_size) / 4.0; }
};

// Residual sum_j d_j * v_j - f over full stacks (slot 0 included).
RowMatrix convlasso_residual(const Tensor& d, const Tensor& v, const ImageRef& f, ConvPath path = ConvPath::Direct);

// lambda sum_j ||v_j||_1 + 0.5 ||sum_j d_j * v_j - f||^2 over full stacks.
// Slot 0 must hold the fixed pair (g, f); ContractError otherwise.
double convlasso_objective(const Tensor& d, const Tensor& v, const ImageRef& f, double lambda, const ImageRef& g,
                           ConvPath path = ConvPath::Direct);

// (grad_d, grad_v) of 0.5 ||sum_j d_j * v_j - f||^2 over full stacks, with
// slot 0 treated as constant (zero gradient).
std::pair<Tensor, Tensor> convlasso_grads(const Tensor& d, const Tensor& v, const ImageRef& f,
                                          ConvPath path = ConvPath::Direct);

// Convolutional LASSO dictionary learning
//
//     min sum_j lambda ||v_j||_1 + 0.5 ||sum_j d_j * v_j - f||^2
//     s.t. d_1 = g, v_1 = f, sum(d_j) = 0, ||d_j|| <= 1  (j >= 2)
//
// The fixed pair (g, f) is held as constants; block 0 is the stack of the
// p-1 free filters, block 1 the stack of the p-1 free coefficient images.
// The constant lambda ||f||_1 of the fixed slot is part of the objective
// and carried inside the smooth term, so F = H + sum_i f_i still holds.
class ConvLassoProblem final : public Problem {
public:
    ConvLassoProblem(RowMatrix image, ConvLassoParams params);

    std::string name() const override { return "convlasso"; }
    std::size_t num_blocks() const override { return 2; }
    double smooth_value(const BlockVector& x) const override;
    double nonsmooth_value(std::size_t block, const Tensor& xi) const override;
    Tensor partial_gradient(std::size_t block, const BlockVector& x) const override;
    Tensor prox(std::size_t block, double t, const Tensor& p) const override;
    bool is_convex(std::size_t) const override { return true; }
    // Free filters i.i.d. standard normal, then projected; coefficients 0.
    BlockVector initial_point(std::uint64_t seed) const override;

    const RowMatrix& image() const noexcept { return f_; }
    const RowMatrix& lowpass() const noexcept { return g_; }
    const ConvLassoParams& params() const noexcept { return params_; }

    // Full p-slot stacks with the fixed pair in slot 0.
    std::pair<Tensor, Tensor> assemble(const BlockVector& x) const;
    // Objective over full stacks; throws ContractError when slot 0 differs
    // from (g, f).
    double full_objective(const Tensor& d, const Tensor& v) const;

    // Mosaic of all filters (each normalized to [0, 255]).
    void write_dictionary(const std::filesystem::path& path, const BlockVector& x) const;
    // CSV: filter,nonzeros,fraction,l1
    void write_sparsity_report(const std::filesystem::path& path, const BlockVector& x) const;

private:
    RowMatrix residual(const BlockVector& x) const;

    RowMatrix f_;
    RowMatrix g_;
    RowMatrix lowpass_part_;  // g * f
    double fixed_l1_;         // lambda ||f||_1
    ConvLassoParams params_;
};

ConvLassoProblem make_convlasso_problem(RowMatrix image, ConvLassoParams params);

}  // namespace ipalm
