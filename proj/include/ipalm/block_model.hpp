#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ipalm/tensor.hpp"

namespace ipalm {

// Ordered list of blocks x_1, ..., x_B. Block count and shapes are fixed
// once a solver run starts.
class BlockVector {
public:
    BlockVector() = default;
    explicit BlockVector(std::vector<Tensor> blocks) : blocks_(std::move(blocks)) {}

    std::size_t num_blocks() const noexcept { return blocks_.size(); }
    Tensor& operator[](std::size_t i) { return blocks_[i]; }
    const Tensor& operator[](std::size_t i) const { return blocks_[i]; }
    const std::vector<Tensor>& blocks() const noexcept { return blocks_; }

    bool same_structure(const BlockVector& other) const;
    // Full squared norm, the sum of the per-block squared norms.
    double squared_norm() const;
    bool all_finite() const;

    friend bool operator==(const BlockVector&, const BlockVector&) = default;

private:
    std::vector<Tensor> blocks_;
};

// Throws ShapeError unless x and y have the same block count and shapes.
void require_same_structure(const BlockVector& x, const BlockVector& y, const char* where);

// a*x + y, blockwise.
BlockVector block_axpy(double a, const BlockVector& x, const BlockVector& y);

// x_cur[block] + coeff * (x_cur[block] - x_prev[block]).
Tensor extrapolate(const BlockVector& x_cur, const BlockVector& x_prev, double coeff, std::size_t block);

// Per-block 0.5*||x_next_i - x_cur_i||^2.
std::vector<double> step_deltas(const BlockVector& x_next, const BlockVector& x_cur);

// Per-block inertial and step parameters for one iteration.
struct InertialParams {
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> tau;
    // Empty entries when the schedule does not define a Lyapunov weight.
    std::vector<std::optional<double>> delta;
    std::vector<double> lipschitz;
};

// Objective contract consumed by the solver:
//
//     F(x) = H(x) + sum_i f_i(x_i)
//
// with H smooth (blockwise Lipschitz gradients) and each f_i proper, lsc
// and prox-friendly.
class Problem {
public:
    virtual ~Problem() = default;

    virtual std::string name() const = 0;
    virtual std::size_t num_blocks() const = 0;

    // Smooth coupling term H.
    virtual double smooth_value(const BlockVector& x) const = 0;
    // f_i(x_i); +infinity outside the domain of an indicator.
    virtual double nonsmooth_value(std::size_t block, const Tensor& xi) const = 0;
    // F = H + sum f_i.
    virtual double objective(const BlockVector& x) const;

    virtual Tensor partial_gradient(std::size_t block, const BlockVector& x) const = 0;
    // One element of argmin_q f_i(q) + (t/2)||q - p||^2.
    virtual Tensor prox(std::size_t block, double t, const Tensor& p) const = 0;
    virtual bool is_convex(std::size_t block) const = 0;

    // Exact partial Lipschitz modulus of grad_i H at x, if the problem has a
    // closed form. nullopt means callers must backtrack.
    virtual std::optional<double> lipschitz(std::size_t block, const BlockVector& x) const;

    // Feasible starting point, deterministic in seed.
    virtual BlockVector initial_point(std::uint64_t seed) const = 0;
};

}  // namespace ipalm
