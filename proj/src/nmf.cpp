#include "ipalm/nmf.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "ipalm/errors.hpp"
#include "ipalm/io.hpp"
#include "ipalm/prox.hpp"

namespace ipalm {

namespace {

void require_shapes(const Eigen::Ref<const RowMatrix>& a, const Eigen::Ref<const RowMatrix>& b,
                    const Eigen::Ref<const RowMatrix>& c) {
    if (b.rows() != a.rows() || c.cols() != a.cols() || b.cols() != c.rows()) {
        std::ostringstream msg;
        msg << "nmf: incompatible shapes A " << a.rows() << "x" << a.cols() << ", B " << b.rows() << "x" << b.cols()
            << ", C " << c.rows() << "x" << c.cols();
        throw ShapeError(msg.str());
    }
}

}  // namespace

RowMatrix nmf_grad_B(const Eigen::Ref<const RowMatrix>& a, const Eigen::Ref<const RowMatrix>& b,
                     const Eigen::Ref<const RowMatrix>& c) {
    require_shapes(a, b, c);
    const RowMatrix residual = b * c - a;
    return residual * c.transpose();
}

RowMatrix nmf_grad_C(const Eigen::Ref<const RowMatrix>& a, const Eigen::Ref<const RowMatrix>& b,
                     const Eigen::Ref<const RowMatrix>& c) {
    require_shapes(a, b, c);
    const RowMatrix residual = b * c - a;
    return b.transpose() * residual;
}

double nmf_lipschitz(std::size_t block, const Eigen::Ref<const RowMatrix>& b, const Eigen::Ref<const RowMatrix>& c,
                     const PowerIterationOptions& opts) {
    Eigen::MatrixXd gram;
    if (block == 0) {
        gram = c * c.transpose();
    } else if (block == 1) {
        gram = b.transpose() * b;
    } else {
        throw ShapeError("nmf has blocks 0 and 1 only");
    }
    if (gram.size() == 0) throw ShapeError("nmf_lipschitz: empty factor");
    return std::max(spectral_norm(gram, opts), kLipschitzFloor);
}

NmfProblem::NmfProblem(RowMatrix a, std::size_t rank, std::size_t sparsity)
    : a_(std::move(a)), rank_(rank), sparsity_(sparsity) {
    if (a_.size() == 0) throw DataError("nmf: empty data matrix");
    if (rank_ == 0) throw ParameterError("nmf: rank must be at least 1");
    if (sparsity_ > static_cast<std::size_t>(a_.rows())) {
        throw ParameterError("nmf: sparsity " + std::to_string(sparsity_) + " exceeds column length " +
                             std::to_string(a_.rows()));
    }
    if (!a_.allFinite()) throw DataError("nmf: data matrix has non-finite entries");
    if ((a_.array() < 0.0).any()) throw DataError("nmf: data matrix has negative entries");
}

double NmfProblem::smooth_value(const BlockVector& x) const {
    return 0.5 * (a_ - x[0].matrix() * x[1].matrix()).squaredNorm();
}

double NmfProblem::nonsmooth_value(std::size_t block, const Tensor& xi) const {
    const double inf = std::numeric_limits<double>::infinity();
    const auto m = xi.matrix();
    if ((m.array() < 0.0).any()) return inf;
    if (block == 0) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (static_cast<std::size_t>((m.col(j).array() != 0.0).count()) > sparsity_) return inf;
        }
    }
    return 0.0;
}

Tensor NmfProblem::partial_gradient(std::size_t block, const BlockVector& x) const {
    const auto b = x[0].matrix();
    const auto c = x[1].matrix();
    if (block == 0) return Tensor::from_matrix(nmf_grad_B(a_, b, c));
    if (block == 1) return Tensor::from_matrix(nmf_grad_C(a_, b, c));
    throw ShapeError("nmf has blocks 0 and 1 only");
}

Tensor NmfProblem::prox(std::size_t block, double, const Tensor& p) const {
    return block == 0 ? prox_l0_nonneg_cols(p, sparsity_) : prox_nonneg(p);
}

std::optional<double> NmfProblem::lipschitz(std::size_t block, const BlockVector& x) const {
    return nmf_lipschitz(block, x[0].matrix(), x[1].matrix());
}

BlockVector NmfProblem::initial_point(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double scale = std::sqrt(a_.mean() / static_cast<double>(rank_));
    const auto m = static_cast<std::size_t>(a_.rows());
    const auto n = static_cast<std::size_t>(a_.cols());
    Tensor b({m, rank_});
    Tensor c({rank_, n});
    for (double& v : b.values()) v = scale * unif(rng);
    for (double& v : c.values()) v = scale * unif(rng);
    return BlockVector({prox_l0_nonneg_cols(b, sparsity_), std::move(c)});
}

NmfProblem make_nmf_problem(RowMatrix a, std::size_t rank, std::size_t sparsity) {
    return NmfProblem(std::move(a), rank, sparsity);
}

std::size_t sparsity_from_percent(std::size_t rows, double percent) {
    if (!(percent > 0.0 && percent <= 100.0)) throw ParameterError("sparsity percent must lie in (0, 100]");
    const auto s = static_cast<std::size_t>(std::lround(percent / 100.0 * static_cast<double>(rows)));
    return std::clamp<std::size_t>(s, 1, rows);
}

void write_basis_images(const std::filesystem::path& dir, const Eigen::Ref<const RowMatrix>& basis,
                        std::size_t height, std::size_t width) {
    if (static_cast<std::size_t>(basis.rows()) != height * width) {
        throw ShapeError("basis column length does not match image size");
    }
    std::filesystem::create_directories(dir);
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
        RowMatrix img(static_cast<Eigen::Index>(height), static_cast<Eigen::Index>(width));
        for (Eigen::Index q = 0; q < basis.rows(); ++q) img(q / img.cols(), q % img.cols()) = basis(q, j);
        std::ostringstream name;
        name << "basis_" << std::setw(3) << std::setfill('0') << j << ".pgm";
        write_pgm_max_scaled(dir / name.str(), img);
    }
}

}  // namespace ipalm
