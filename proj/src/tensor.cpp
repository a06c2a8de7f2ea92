#include "ipalm/tensor.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "ipalm/errors.hpp"

namespace ipalm {

namespace {

std::size_t element_count(const Shape& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

}  // namespace

std::string shape_to_string(const Shape& shape) {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i > 0) out << 'x';
        out << shape[i];
    }
    out << ')';
    return out.str();
}

Tensor::Tensor(Shape shape, double fill)
    : shape_(std::move(shape)), values_(element_count(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
    if (values_.size() != element_count(shape_)) {
        throw ShapeError("tensor of shape " + shape_to_string(shape_) + " needs " +
                         std::to_string(element_count(shape_)) + " values, got " +
                         std::to_string(values_.size()));
    }
}

Tensor Tensor::from_matrix(const Eigen::Ref<const RowMatrix>& m) {
    Tensor t({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
    t.matrix() = m;
    return t;
}

MatrixMap Tensor::matrix() {
    if (rank() != 2) throw ShapeError("matrix view needs rank 2, got " + shape_to_string(shape_));
    return {values_.data(), static_cast<Eigen::Index>(shape_[0]), static_cast<Eigen::Index>(shape_[1])};
}

ConstMatrixMap Tensor::matrix() const {
    if (rank() != 2) throw ShapeError("matrix view needs rank 2, got " + shape_to_string(shape_));
    return {values_.data(), static_cast<Eigen::Index>(shape_[0]), static_cast<Eigen::Index>(shape_[1])};
}

MatrixMap Tensor::slice(std::size_t j) {
    if (rank() != 3 || j >= shape_[0]) {
        throw ShapeError("slice " + std::to_string(j) + " out of range for " + shape_to_string(shape_));
    }
    const std::size_t stride = shape_[1] * shape_[2];
    return {values_.data() + j * stride, static_cast<Eigen::Index>(shape_[1]),
            static_cast<Eigen::Index>(shape_[2])};
}

ConstMatrixMap Tensor::slice(std::size_t j) const {
    if (rank() != 3 || j >= shape_[0]) {
        throw ShapeError("slice " + std::to_string(j) + " out of range for " + shape_to_string(shape_));
    }
    const std::size_t stride = shape_[1] * shape_[2];
    return {values_.data() + j * stride, static_cast<Eigen::Index>(shape_[1]),
            static_cast<Eigen::Index>(shape_[2])};
}

double Tensor::squared_norm() const {
    double acc = 0.0;
    for (double v : values_) acc += v * v;
    return acc;
}

bool Tensor::all_finite() const {
    for (double v : values_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

}  // namespace ipalm
