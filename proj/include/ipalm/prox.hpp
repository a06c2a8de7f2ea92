#pragma once

#include <cstddef>

#include "ipalm/tensor.hpp"

namespace ipalm {

// Elementwise clamp to [0, 1]; projection onto the unit box.
Tensor prox_box01(const Tensor& p);

// Elementwise max(p, 0); projection onto the nonnegative orthant.
Tensor prox_nonneg(const Tensor& p);

// Projection onto {B >= 0, every column has at most s nonzeros}.
//
// Per column: clamp negatives to zero, then keep the s largest entries and
// zero the rest. Ties between equal values are resolved in favour of the
// lower row index. s = 0 yields the zero matrix. Requires rank 2 and s <= rows.
Tensor prox_l0_nonneg_cols(const Tensor& p, std::size_t s);

// Euclidean projection of the flattened tensor onto the unit simplex
// {b >= 0, sum b = 1}, by sorting and thresholding in O(N log N).
Tensor prox_simplex(const Tensor& p);

// Soft threshold sign(p) * max(|p| - w, 0); the prox of w*||.||_1 at unit scale.
Tensor prox_l1(const Tensor& p, double w);

// Projection onto {sum d = 0} intersected with {||d||_2 <= 1}.
//
// Computed as mean removal followed by radial scaling. This is exact for
// this pair of sets: the ball is centred at the origin, which lies on the
// hyperplane, so scaling a zero-mean vector keeps it zero-mean, and the
// projection of p onto the intersection equals the ball projection of the
// hyperplane projection of p (the hyperplane projection is orthogonal and
// the distance splits by Pythagoras).
Tensor prox_filter_constraint(const Tensor& d);

}  // namespace ipalm
