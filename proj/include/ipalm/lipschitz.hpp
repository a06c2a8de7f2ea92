#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "ipalm/tensor.hpp"

namespace ipalm {

struct PowerIterationOptions {
    double tol = 1e-9;
    std::size_t max_iter = 1000;
};

// Largest eigenvalue of a symmetric positive semidefinite matrix by power
// iteration, inflated by the safeguard factor (1 + 10 tol) so that step
// rules built on it do not undershoot the true modulus.
//
// The start vector is deterministic: all ones plus a fixed small
// perturbation, so it is never exactly orthogonal to the leading
// eigenvector of a structured matrix. A zero matrix returns 0.
double spectral_norm(const Eigen::Ref<const Eigen::MatrixXd>& m, const PowerIterationOptions& opts = {});

struct BacktrackState {
    double lipschitz = 1.0;  // current estimate, > 0
    double growth = 2.0;     // > 1
    double shrink = 0.5;     // in (0, 1]; warm start is shrink * previous estimate
    std::size_t max_rounds = 60;
    double floor = 1e-12;    // warm starts never go below this
};

struct BacktrackResult {
    double lipschitz;
    Tensor next;
    std::vector<double> tested;
};

// Descent-lemma backtracking.
//
// Tests L = shrink * state.lipschitz * growth^j for j = 0, 1, ... and
// accepts the first L whose candidate x+ = candidate_of(L) satisfies
//
//     h(x+) <= h(x) + <grad h(x), x+ - x> + (L/2) ||x+ - x||^2
//
// up to a rounding slack of 1e-12 (1 + |h(x)|). Updates state.lipschitz.
// Throws EstimationError after max_rounds growth steps.
BacktrackResult backtrack_lipschitz(const std::function<double(const Tensor&)>& h, double h_at_x,
                                    const Tensor& grad_at_x, const Tensor& x,
                                    const std::function<Tensor(double)>& candidate_of, BacktrackState& state);

void validate(const BacktrackState& state);

}  // namespace ipalm
