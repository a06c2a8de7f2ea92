#include "ipalm/block_model.hpp"

#include <cmath>
#include <limits>

#include "ipalm/errors.hpp"

namespace ipalm {

bool BlockVector::same_structure(const BlockVector& other) const {
    if (blocks_.size() != other.blocks_.size()) return false;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (!blocks_[i].same_shape(other.blocks_[i])) return false;
    }
    return true;
}

double BlockVector::squared_norm() const {
    double acc = 0.0;
    for (const auto& b : blocks_) acc += b.squared_norm();
    return acc;
}

bool BlockVector::all_finite() const {
    for (const auto& b : blocks_) {
        if (!b.all_finite()) return false;
    }
    return true;
}

void require_same_structure(const BlockVector& x, const BlockVector& y, const char* where) {
    if (x.num_blocks() != y.num_blocks()) {
        throw ShapeError(std::string(where) + ": block count " + std::to_string(x.num_blocks()) +
                         " vs " + std::to_string(y.num_blocks()));
    }
    for (std::size_t i = 0; i < x.num_blocks(); ++i) {
        if (!x[i].same_shape(y[i])) {
            throw ShapeError(std::string(where) + ": block " + std::to_string(i) + " shape " +
                             shape_to_string(x[i].shape()) + " vs " + shape_to_string(y[i].shape()));
        }
    }
}

BlockVector block_axpy(double a, const BlockVector& x, const BlockVector& y) {
    require_same_structure(x, y, "block_axpy");
    BlockVector out = y;
    for (std::size_t i = 0; i < out.num_blocks(); ++i) {
        out[i].vec() += a * x[i].vec();
    }
    return out;
}

Tensor extrapolate(const BlockVector& x_cur, const BlockVector& x_prev, double coeff, std::size_t block) {
    if (block >= x_cur.num_blocks() || block >= x_prev.num_blocks()) {
        throw ShapeError("extrapolate: block index " + std::to_string(block) + " out of range");
    }
    const Tensor& cur = x_cur[block];
    const Tensor& prev = x_prev[block];
    if (!cur.same_shape(prev)) {
        throw ShapeError("extrapolate: shape " + shape_to_string(cur.shape()) + " vs " +
                         shape_to_string(prev.shape()));
    }
    if (!(coeff >= 0.0)) throw ParameterError("extrapolate: coefficient must be nonnegative");
    Tensor out = cur;
    if (coeff == 0.0) return out;
    out.vec() += coeff * (cur.vec() - prev.vec());
    return out;
}

std::vector<double> step_deltas(const BlockVector& x_next, const BlockVector& x_cur) {
    require_same_structure(x_next, x_cur, "step_deltas");
    std::vector<double> deltas(x_next.num_blocks());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        deltas[i] = 0.5 * (x_next[i].vec() - x_cur[i].vec()).squaredNorm();
    }
    return deltas;
}

double Problem::objective(const BlockVector& x) const {
    double value = smooth_value(x);
    for (std::size_t i = 0; i < num_blocks(); ++i) {
        value += nonsmooth_value(i, x[i]);
    }
    return value;
}

std::optional<double> Problem::lipschitz(std::size_t, const BlockVector&) const {
    return std::nullopt;
}

}  // namespace ipalm
