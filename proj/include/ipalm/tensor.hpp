#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ipalm {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;
using VectorMap = Eigen::Map<Eigen::VectorXd>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;

using Shape = std::vector<std::size_t>;

std::string shape_to_string(const Shape& shape);

// Dense row-major tensor of doubles with an explicit shape.
//
// Rank-2 tensors are matrices/images; rank-3 tensors are stacks of
// equally sized matrices indexed by the leading dimension.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(Shape shape, double fill = 0.0);
    Tensor(Shape shape, std::vector<double> values);

    static Tensor from_matrix(const Eigen::Ref<const RowMatrix>& m);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t rank() const noexcept { return shape_.size(); }
    std::size_t size() const noexcept { return values_.size(); }
    bool same_shape(const Tensor& other) const noexcept { return shape_ == other.shape_; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    double* data() noexcept { return values_.data(); }
    const double* data() const noexcept { return values_.data(); }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    VectorMap vec() { return {values_.data(), static_cast<Eigen::Index>(values_.size())}; }
    ConstVectorMap vec() const { return {values_.data(), static_cast<Eigen::Index>(values_.size())}; }

    // Matrix view; requires rank 2.
    MatrixMap matrix();
    ConstMatrixMap matrix() const;

    // View of slice j of a rank-3 stack as a matrix.
    MatrixMap slice(std::size_t j);
    ConstMatrixMap slice(std::size_t j) const;

    double squared_norm() const;
    bool all_finite() const;

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    Shape shape_;
    std::vector<double> values_;
};

}  // namespace ipalm
