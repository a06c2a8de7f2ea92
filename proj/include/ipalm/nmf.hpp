#pragma once

#include <cstddef>
#include <filesystem>

#include "ipalm/block_model.hpp"
#include "ipalm/lipschitz.hpp"

namespace ipalm {

// (BC - A) C^T
RowMatrix nmf_grad_B(const Eigen::Ref<const RowMatrix>& a, const Eigen::Ref<const RowMatrix>& b,
                     const Eigen::Ref<const RowMatrix>& c);
// B^T (BC - A)
RowMatrix nmf_grad_C(const Eigen::Ref<const RowMatrix>& a, const Eigen::Ref<const RowMatrix>& b,
                     const Eigen::Ref<const RowMatrix>& c);

// Gram matrices are only r x r, so power iteration gets a much larger
// budget than the default; nearly repeated top eigenvalues converge slowly.
inline constexpr PowerIterationOptions kNmfPowerIteration{1e-9, 200000};

// block 0: ||C C^T||_2, block 1: ||B^T B||_2, floored at 1e-12.
double nmf_lipschitz(std::size_t block, const Eigen::Ref<const RowMatrix>& b, const Eigen::Ref<const RowMatrix>& c,
                     const PowerIterationOptions& opts = kNmfPowerIteration);

inline constexpr double kLipschitzFloor = 1e-12;

// Sparse NMF
//
//     min 0.5 ||A - BC||_F^2   s.t.  B >= 0, ||b_i||_0 <= s,  C >= 0
//
// Block 0 is B (m x r, nonconvex l0 + nonnegativity), block 1 is C (r x n,
// nonnegativity). Lipschitz moduli are exact (spectral norms of the Gram
// matrices).
class NmfProblem final : public Problem {
public:
    NmfProblem(RowMatrix a, std::size_t rank, std::size_t sparsity);

    std::string name() const override { return "nmf"; }
    std::size_t num_blocks() const override { return 2; }
    double smooth_value(const BlockVector& x) const override;
    double nonsmooth_value(std::size_t block, const Tensor& xi) const override;
    Tensor partial_gradient(std::size_t block, const BlockVector& x) const override;
    Tensor prox(std::size_t block, double t, const Tensor& p) const override;
    bool is_convex(std::size_t block) const override { return block == 1; }
    std::optional<double> lipschitz(std::size_t block, const BlockVector& x) const override;
    // Entries uniform in [0, 1] scaled by sqrt(mean(A) / r); B then projected.
    BlockVector initial_point(std::uint64_t seed) const override;

    const RowMatrix& data() const noexcept { return a_; }
    std::size_t rank() const noexcept { return rank_; }
    std::size_t sparsity() const noexcept { return sparsity_; }

private:
    RowMatrix a_;
    std::size_t rank_;
    std::size_t sparsity_;
};

NmfProblem make_nmf_problem(RowMatrix a, std::size_t rank, std::size_t sparsity);

// Sparsity count from a percentage of the column length, rounded to nearest, at least 1.
std::size_t sparsity_from_percent(std::size_t rows, double percent);

// Writes each column of B as a height x width PGM scaled to [0, 255].
void write_basis_images(const std::filesystem::path& dir, const Eigen::Ref<const RowMatrix>& basis,
                        std::size_t height, std::size_t width);

}  // namespace ipalm
