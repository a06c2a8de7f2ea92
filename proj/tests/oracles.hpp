#pragma once

// Independent reference implementations used only by the tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ipalm/lipschitz.hpp"
#include "ipalm/tensor.hpp"

namespace oracle {

using ipalm::RowMatrix;

inline RowMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng, double lo = -1.0,
                               double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    RowMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = d(rng);
    return m;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
    return v;
}

// Best nonnegative vector with at most s nonzeros, by enumerating every support.
inline Eigen::VectorXd l0_nonneg_bruteforce(const Eigen::VectorXd& p, std::size_t s) {
    const auto m = static_cast<std::size_t>(p.size());
    Eigen::VectorXd best = Eigen::VectorXd::Zero(p.size());
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountll(mask)) > s) continue;
        Eigen::VectorXd q = Eigen::VectorXd::Zero(p.size());
        for (std::size_t i = 0; i < m; ++i) {
            if (mask & (std::size_t{1} << i)) q[static_cast<Eigen::Index>(i)] = std::max(p[static_cast<Eigen::Index>(i)], 0.0);
        }
        const double dist = (q - p).squaredNorm();
        if (dist < best_dist - 1e-15) {
            best_dist = dist;
            best = q;
        }
    }
    return best;
}

// Simplex projection through its optimality condition: find the threshold t
// with sum max(p - t, 0) = 1 by bisection.
inline Eigen::VectorXd simplex_bisection(const Eigen::VectorXd& p) {
    double lo = p.minCoeff() - 1.0;
    double hi = p.maxCoeff();
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double mass = (p.array() - mid).max(0.0).sum();
        (mass > 1.0 ? lo : hi) = mid;
    }
    return (p.array() - 0.5 * (lo + hi)).max(0.0);
}

// Dykstra's alternating projections onto {sum = 0} and the unit ball.
inline Eigen::VectorXd zero_mean_ball_dykstra(const Eigen::VectorXd& p, int iters = 20000) {
    Eigen::VectorXd x = p;
    Eigen::VectorXd pa = Eigen::VectorXd::Zero(p.size());
    Eigen::VectorXd pb = Eigen::VectorXd::Zero(p.size());
    for (int it = 0; it < iters; ++it) {
        Eigen::VectorXd y = x + pa;
        const Eigen::VectorXd ya = y.array() - y.mean();
        pa = y - ya;
        Eigen::VectorXd z = ya + pb;
        const double n = z.norm();
        const Eigen::VectorXd zb = n > 1.0 ? Eigen::VectorXd(z / n) : z;
        pb = z - zb;
        if ((zb - x).norm() < 1e-15) {
            x = zb;
            break;
        }
        x = zb;
    }
    return x;
}

inline double dense_max_eigenvalue(const Eigen::MatrixXd& m) {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

// (u * b)[i,j] = sum_{k,l} b[k,l] u[(i-k) mod m1, (j-l) mod m2], plain loops.
inline RowMatrix circ_conv_loops(const RowMatrix& u, const RowMatrix& b) {
    const Eigen::Index m1 = u.rows(), m2 = u.cols();
    RowMatrix out = RowMatrix::Zero(m1, m2);
    for (Eigen::Index i = 0; i < m1; ++i) {
        for (Eigen::Index j = 0; j < m2; ++j) {
            double acc = 0.0;
            for (Eigen::Index k = 0; k < b.rows(); ++k) {
                for (Eigen::Index l = 0; l < b.cols(); ++l) {
                    acc += b(k, l) * u(((i - k) % m1 + m1) % m1, ((j - l) % m2 + m2) % m2);
                }
            }
            out(i, j) = acc;
        }
    }
    return out;
}

// Central difference of f at x along d.
template <class F, class X>
double central_difference(const F& f, const X& x, const X& d, double h) {
    return (f(X(x + h * d)) - f(X(x - h * d))) / (2.0 * h);
}

// Plain PALM for 0.5 ||A - BC||^2 with B >= 0 and s nonzeros per column, C >= 0.
struct PalmNmf {
    RowMatrix a;
    std::size_t s;

    static RowMatrix keep_largest(RowMatrix p, std::size_t s) {
        p = p.cwiseMax(0.0);
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
            std::vector<Eigen::Index> order(static_cast<std::size_t>(p.rows()));
            for (Eigen::Index i = 0; i < p.rows(); ++i) order[static_cast<std::size_t>(i)] = i;
            std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return p(x, j) > p(y, j); });
            for (std::size_t q = s; q < order.size(); ++q) p(order[q], j) = 0.0;
        }
        return p;
    }

    void step(RowMatrix& b, RowMatrix& c) const {
        Eigen::MatrixXd gram_c = c * c.transpose();
        const double l1 = std::max(ipalm::spectral_norm(gram_c, {1e-9, 200000}), 1e-12);
        const RowMatrix gb = (b * c - a) * c.transpose();
        b = keep_largest(b + (-1.0 / l1) * gb, s);
        Eigen::MatrixXd gram_b = b.transpose() * b;
        const double l2 = std::max(ipalm::spectral_norm(gram_b, {1e-9, 200000}), 1e-12);
        const RowMatrix gc = b.transpose() * (b * c - a);
        c = (c + (-1.0 / l2) * gc).cwiseMax(0.0);
    }
};

}  // namespace oracle
