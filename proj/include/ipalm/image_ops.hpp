#pragma once

#include <cstddef>

#include "ipalm/tensor.hpp"

namespace ipalm {

using ImageRef = Eigen::Ref<const RowMatrix>;

// Directional finite difference p in 1..8:
//   1: (u[i+1,j]   - u[i,j])          2: (u[i,j+1]   - u[i,j])
//   3: (u[i+1,j+1] - u[i,j]) / sqrt2  4: (u[i+1,j-1] - u[i,j]) / sqrt2
//   5: (u[i+2,j+1] - u[i,j]) / sqrt5  6: (u[i+2,j-1] - u[i,j]) / sqrt5
//   7: (u[i+1,j+2] - u[i,j]) / sqrt5  8: (u[i-1,j+2] - u[i,j]) / sqrt5
// Entries whose stencil leaves the image are 0.
RowMatrix dir_grad(const ImageRef& u, int p);
// Adjoint of dir_grad.
RowMatrix dir_grad_adjoint(const ImageRef& v, int p);

// sum_i log(1 + theta x_i^2)
double phi_value(const ImageRef& x, double theta);
// 2 theta x / (1 + theta x^2), elementwise.
RowMatrix phi_grad(const ImageRef& x, double theta);

enum class ConvPath { Direct, Fft };

// (u * b)[i,j] = sum_{k<n1, l<n2} b[k,l] u[(i-k) mod m1, (j-l) mod m2].
// Linear in u and in b; the same operator is K(b) u and K(u) b.
RowMatrix circ_conv(const ImageRef& u, const ImageRef& b, ConvPath path = ConvPath::Direct);

// K(b)^T r: (sum_{k,l} b[k,l] r[(i+k) mod m1, (j+l) mod m2]).
RowMatrix circ_correlate(const ImageRef& r, const ImageRef& b, ConvPath path = ConvPath::Direct);

// K(u)^T r restricted to an n1 x n2 kernel window:
//   c[k,l] = sum_{i,j} r[i,j] u[(i-k) mod m1, (j-l) mod m2].
RowMatrix kernel_correlate(const ImageRef& r, const ImageRef& u, std::size_t n1, std::size_t n2,
                           ConvPath path = ConvPath::Direct);

}  // namespace ipalm
