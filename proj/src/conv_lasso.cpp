#include "ipalm/conv_lasso.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "ipalm/errors.hpp"
#include "ipalm/io.hpp"
#include "ipalm/prox.hpp"

namespace ipalm {

namespace {

void require_stacks(const Tensor& d, const Tensor& v, const ImageRef& f) {
    if (d.rank() != 3 || v.rank() != 3 || d.shape()[0] != v.shape()[0]) {
        throw ShapeError("convlasso: filter stack " + shape_to_string(d.shape()) + " and coefficient stack " +
                         shape_to_string(v.shape()) + " are incompatible");
    }
    if (v.shape()[1] != static_cast<std::size_t>(f.rows()) || v.shape()[2] != static_cast<std::size_t>(f.cols())) {
        throw ShapeError("convlasso: coefficient images must match the image size");
    }
}

}  // namespace

RowMatrix gaussian_filter(std::size_t size, double sigma) {
    if (size == 0 || !(sigma > 0.0)) throw ParameterError("gaussian_filter: size and sigma must be positive");
    const double c = 0.5 * static_cast<double>(size - 1);
    RowMatrix g(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            const double di = static_cast<double>(i) - c;
            const double dj = static_cast<double>(j) - c;
            g(i, j) = std::exp(-(di * di + dj * dj) / (2.0 * sigma * sigma));
        }
    }
    return g / g.sum();
}

void ConvLassoParams::validate() const {
    if (num_filters < 2) throw ParameterError("convlasso: need at least 2 filters (one fixed, one free)");
    if (filter_size < 2 || filter_size % 2 == 0) throw ParameterError("convlasso: filter size must be odd and >= 3");
    if (!(lambda >= 0.0)) throw ParameterError("convlasso: lambda must be nonnegative");
}

RowMatrix convlasso_residual(const Tensor& d, const Tensor& v, const ImageRef& f, ConvPath path) {
    require_stacks(d, v, f);
    RowMatrix r = -f;
    for (std::size_t j = 0; j < d.shape()[0]; ++j) r += circ_conv(v.slice(j), d.slice(j), path);
    return r;
}

double convlasso_objective(const Tensor& d, const Tensor& v, const ImageRef& f, double lambda, const ImageRef& g,
                           ConvPath path) {
    require_stacks(d, v, f);
    if (d.shape()[0] == 0) throw ShapeError("convlasso: empty stacks");
    if (d.shape()[1] != static_cast<std::size_t>(g.rows()) || d.shape()[2] != static_cast<std::size_t>(g.cols())) {
        throw ShapeError("convlasso: filters must match the fixed filter size");
    }
    if (d.slice(0) != g) throw ContractError("convlasso: filter slot 1 must equal the fixed low-pass filter");
    if (v.slice(0) != f) throw ContractError("convlasso: coefficient slot 1 must equal the image");
    return lambda * v.vec().lpNorm<1>() + 0.5 * convlasso_residual(d, v, f, path).squaredNorm();
}

std::pair<Tensor, Tensor> convlasso_grads(const Tensor& d, const Tensor& v, const ImageRef& f, ConvPath path) {
    const RowMatrix r = convlasso_residual(d, v, f, path);
    Tensor gd(d.shape(), 0.0);
    Tensor gv(v.shape(), 0.0);
    for (std::size_t j = 1; j < d.shape()[0]; ++j) {
        gd.slice(j) = kernel_correlate(r, v.slice(j), d.shape()[1], d.shape()[2], path);
        gv.slice(j) = circ_correlate(r, d.slice(j), path);
    }
    return {std::move(gd), std::move(gv)};
}

ConvLassoProblem::ConvLassoProblem(RowMatrix image, ConvLassoParams params)
    : f_(std::move(image)), params_(params) {
    params_.validate();
    if (f_.size() == 0 || !f_.allFinite()) throw DataError("convlasso: image must be nonempty and finite");
    if (params_.filter_size > static_cast<std::size_t>(std::min(f_.rows(), f_.cols()))) {
        throw ShapeError("convlasso: filter larger than image");
    }
    g_ = gaussian_filter(params_.filter_size, params_.effective_sigma());
    lowpass_part_ = circ_conv(f_, g_, params_.path);
    fixed_l1_ = params_.lambda * f_.cwiseAbs().sum();
}

RowMatrix ConvLassoProblem::residual(const BlockVector& x) const {
    const Tensor& d = x[0];
    const Tensor& v = x[1];
    RowMatrix r = lowpass_part_ - f_;
    for (std::size_t j = 0; j < d.shape()[0]; ++j) r += circ_conv(v.slice(j), d.slice(j), params_.path);
    return r;
}

double ConvLassoProblem::smooth_value(const BlockVector& x) const {
    return 0.5 * residual(x).squaredNorm() + fixed_l1_;
}

double ConvLassoProblem::nonsmooth_value(std::size_t block, const Tensor& xi) const {
    if (block == 1) return params_.lambda * xi.vec().lpNorm<1>();
    for (std::size_t j = 0; j < xi.shape()[0]; ++j) {
        const auto filt = xi.slice(j);
        if (std::abs(filt.mean()) > 1e-10 || filt.norm() > 1.0 + 1e-10) {
            return std::numeric_limits<double>::infinity();
        }
    }
    return 0.0;
}

Tensor ConvLassoProblem::partial_gradient(std::size_t block, const BlockVector& x) const {
    const RowMatrix r = residual(x);
    const Tensor& d = x[0];
    const Tensor& v = x[1];
    const std::size_t free = d.shape()[0];
    if (block == 0) {
        Tensor gd(d.shape());
        for (std::size_t j = 0; j < free; ++j) {
            gd.slice(j) = kernel_correlate(r, v.slice(j), params_.filter_size, params_.filter_size, params_.path);
        }
        return gd;
    }
    if (block == 1) {
        Tensor gv(v.shape());
        for (std::size_t j = 0; j < free; ++j) gv.slice(j) = circ_correlate(r, d.slice(j), params_.path);
        return gv;
    }
    throw ShapeError("convlasso has blocks 0 and 1 only");
}

Tensor ConvLassoProblem::prox(std::size_t block, double t, const Tensor& p) const {
    if (block == 1) return prox_l1(p, params_.lambda / t);
    Tensor out = p;
    for (std::size_t j = 0; j < p.shape()[0]; ++j) {
        out.slice(j) = prox_filter_constraint(Tensor::from_matrix(p.slice(j))).matrix();
    }
    return out;
}

BlockVector ConvLassoProblem::initial_point(std::uint64_t seed) const {
    const std::size_t free = params_.num_filters - 1;
    const std::size_t l = params_.filter_size;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Tensor d({free, l, l});
    for (double& v : d.values()) v = normal(rng);
    Tensor v({free, static_cast<std::size_t>(f_.rows()), static_cast<std::size_t>(f_.cols())}, 0.0);
    return BlockVector({prox(0, 1.0, d), std::move(v)});
}

std::pair<Tensor, Tensor> ConvLassoProblem::assemble(const BlockVector& x) const {
    const std::size_t p = params_.num_filters;
    const std::size_t l = params_.filter_size;
    const auto m = static_cast<std::size_t>(f_.rows());
    const auto n = static_cast<std::size_t>(f_.cols());
    Tensor d({p, l, l});
    Tensor v({p, m, n});
    d.slice(0) = g_;
    v.slice(0) = f_;
    for (std::size_t j = 1; j < p; ++j) {
        d.slice(j) = x[0].slice(j - 1);
        v.slice(j) = x[1].slice(j - 1);
    }
    return {std::move(d), std::move(v)};
}

double ConvLassoProblem::full_objective(const Tensor& d, const Tensor& v) const {
    if (d.rank() != 3 || d.shape()[0] != params_.num_filters) throw ShapeError("convlasso: filter stack has the wrong shape");
    return convlasso_objective(d, v, f_, params_.lambda, g_, params_.path);
}

void ConvLassoProblem::write_dictionary(const std::filesystem::path& path, const BlockVector& x) const {
    const auto [d, v] = assemble(x);
    std::vector<RowMatrix> tiles;
    for (std::size_t j = 0; j < d.shape()[0]; ++j) {
        RowMatrix t = d.slice(j);
        const double lo = t.minCoeff();
        const double hi = t.maxCoeff();
        tiles.push_back(hi > lo ? RowMatrix((t.array() - lo) / (hi - lo)) : RowMatrix::Zero(t.rows(), t.cols()));
    }
    const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(tiles.size()))));
    write_pgm(path, mosaic(tiles, cols, 1.0));
}

void ConvLassoProblem::write_sparsity_report(const std::filesystem::path& path, const BlockVector& x) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out.precision(17);
    out << "filter,nonzeros,fraction,l1\n";
    const auto [d, v] = assemble(x);
    for (std::size_t j = 0; j < v.shape()[0]; ++j) {
        const auto s = v.slice(j);
        const auto nnz = (s.array() != 0.0).count();
        out << j + 1 << ',' << nnz << ',' << static_cast<double>(nnz) / static_cast<double>(s.size()) << ','
            << s.cwiseAbs().sum() << '\n';
    }
}

ConvLassoProblem make_convlasso_problem(RowMatrix image, ConvLassoParams params) {
    return ConvLassoProblem(std::move(image), params);
}

}  // namespace ipalm
