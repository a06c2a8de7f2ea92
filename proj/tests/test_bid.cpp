#include <doctest.h>

#include <random>

#include "ipalm/bid.hpp"
#include "ipalm/errors.hpp"
#include "ipalm/solver.hpp"
#include "ipalm/synthetic.hpp"
#include "oracles.hpp"

using namespace ipalm;

namespace {

// regularizer by explicit stencils, residual through the loop convolution
double loop_objective(const RowMatrix& u, const RowMatrix& b, const RowMatrix& f, double lambda, double theta) {
    static const int di[8] = {1, 0, 1, 1, 2, 2, 1, -1};
    static const int dj[8] = {0, 1, 1, -1, 1, -1, 2, 2};
    static const double w[8] = {1, 1, 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 1 / std::sqrt(5.0),
                                1 / std::sqrt(5.0), 1 / std::sqrt(5.0), 1 / std::sqrt(5.0)};
    double reg = 0.0;
    for (int p = 0; p < 8; ++p) {
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
            for (Eigen::Index j = 0; j < u.cols(); ++j) {
                const Eigen::Index a = i + di[p], c = j + dj[p];
                double g = 0.0;
                if (a >= 0 && a < u.rows() && c >= 0 && c < u.cols()) g = w[p] * (u(a, c) - u(i, j));
                reg += std::log(1.0 + theta * g * g);
            }
        }
    }
    return reg + 0.5 * lambda * (oracle::circ_conv_loops(u, b) - f).squaredNorm();
}

RowMatrix delta_kernel(Eigen::Index n) {
    RowMatrix b = RowMatrix::Zero(n, n);
    b(0, 0) = 1.0;
    return b;
}

}  // namespace

TEST_CASE("objective matches the loop oracle") {
    std::mt19937_64 rng(71);
    BidParams params;
    params.lambda = 50.0;
    params.theta = 20.0;
    params.kernel_rows = params.kernel_cols = 3;
    const RowMatrix u = oracle::random_matrix(7, 6, rng, 0.0, 1.0);
    RowMatrix b = oracle::random_matrix(3, 3, rng, 0.0, 1.0);
    b /= b.sum();
    const RowMatrix f = oracle::random_matrix(7, 6, rng, 0.0, 1.0);
    const double want = loop_objective(u, b, f, params.lambda, params.theta);
    CHECK(bid_smooth_value(u, b, f, params) == doctest::Approx(want).epsilon(1e-12));
    params.path = ConvPath::Fft;
    CHECK(bid_smooth_value(u, b, f, params) == doctest::Approx(want).epsilon(1e-10));
    CHECK(want >= 0.0);
}

TEST_CASE("gradients match central differences") {
    std::mt19937_64 rng(72);
    BidParams params;
    params.lambda = 1e3;
    params.theta = 10.0;
    params.kernel_rows = params.kernel_cols = 3;
    const RowMatrix u = oracle::random_matrix(8, 8, rng, 0.0, 1.0);
    RowMatrix b = oracle::random_matrix(3, 3, rng, 0.0, 1.0);
    b /= b.sum();
    const RowMatrix f = oracle::random_matrix(8, 8, rng, 0.0, 1.0);
    const auto [gu, gb] = bid_grads(u, b, f, params);
    const double h = 1e-6;
    for (int t = 0; t < 20; ++t) {
        const RowMatrix du = oracle::random_matrix(8, 8, rng);
        const double fd = (bid_smooth_value(u + h * du, b, f, params) - bid_smooth_value(u - h * du, b, f, params)) / (2 * h);
        CHECK(gu.cwiseProduct(du).sum() == doctest::Approx(fd).epsilon(1e-4));
        const RowMatrix db = oracle::random_matrix(3, 3, rng);
        const double fdb = (bid_smooth_value(u, b + h * db, f, params) - bid_smooth_value(u, b - h * db, f, params)) / (2 * h);
        CHECK(gb.cwiseProduct(db).sum() == doctest::Approx(fdb).epsilon(1e-4));
    }
}

TEST_CASE("identity kernel on a blur-free image") {
    std::mt19937_64 rng(73);
    BidParams params;
    params.kernel_rows = params.kernel_cols = 3;
    const RowMatrix f = oracle::random_matrix(6, 6, rng, 0.0, 1.0);
    const RowMatrix b = delta_kernel(3);
    CHECK(circ_conv(f, b) == f);
    const auto [gu, gb] = bid_grads(f, b, f, params);
    CHECK(gb.cwiseAbs().maxCoeff() == 0.0);
    double reg = 0.0;
    for (int p = 1; p <= 8; ++p) reg += phi_value(dir_grad(f, p), params.theta);
    CHECK(bid_smooth_value(f, b, f, params) == doctest::Approx(reg).epsilon(1e-14));
}

TEST_CASE("problem wiring") {
    BidParams params;
    params.kernel_rows = params.kernel_cols = 5;
    const BidInstance inst = synth_bid(32, 5, 3);
    const BidProblem p(inst.blurred, params);
    const BlockVector x0 = p.initial_point(0);
    CHECK(x0[0].matrix() == inst.blurred);
    CHECK(x0[1].matrix().sum() == doctest::Approx(1.0));
    CHECK(x0[1][7] == doctest::Approx(1.0 / 25.0));
    CHECK(p.nonsmooth_value(0, x0[0]) == 0.0);
    CHECK(p.nonsmooth_value(1, x0[1]) == 0.0);
    CHECK(std::isinf(p.nonsmooth_value(1, Tensor({5, 5}, 0.0))));
    CHECK(std::isinf(p.nonsmooth_value(0, Tensor::from_matrix(RowMatrix::Constant(32, 32, 1.5)))));
    CHECK(p.is_convex(0));
    CHECK(p.is_convex(1));
    CHECK_FALSE(p.lipschitz(0, x0).has_value());
    CHECK(p.tau_scale() == std::vector<double>{1.0, 5.0});
    CHECK((inst.blurred - oracle::circ_conv_loops(inst.sharp, inst.kernel)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("iterates stay feasible") {
    BidParams params;
    params.lambda = 1e4;
    params.theta = 1e3;
    params.kernel_rows = params.kernel_cols = 5;
    const BidInstance inst = synth_bid(24, 5, 5);
    const BidProblem p(inst.blurred, params);
    SolverOptions o;
    o.schedules = make_schedules(p, ScheduleType::StaticConvex, {0.4}, {0.4}, 0.0);
    o.lipschitz_mode = LipschitzMode::Backtrack;
    o.tau_scale = p.tau_scale();
    o.tol = 0.0;
    SolverState st = make_solver_state(p, p.initial_point(0), o);
    for (int k = 0; k < 40; ++k) {
        ipalm_iterate(st, p);
        const auto b = st.x_cur[1].vec();
        CHECK(std::abs(b.sum() - 1.0) <= 1e-10);
        CHECK(b.minCoeff() >= 0.0);
        CHECK(st.x_cur[0].vec().minCoeff() >= 0.0);
        CHECK(st.x_cur[0].vec().maxCoeff() <= 1.0);
    }
}

TEST_CASE("parameter and data validation") {
    BidParams params;
    params.kernel_rows = params.kernel_cols = 3;
    CHECK_THROWS_AS(BidProblem(RowMatrix::Constant(4, 4, 2.0), params), DataError);
    CHECK_THROWS_AS(BidProblem(RowMatrix::Constant(2, 2, 0.5), params), ShapeError);
    BidParams even = params;
    even.kernel_rows = 4;
    CHECK_THROWS_AS(BidProblem(RowMatrix::Constant(8, 8, 0.5), even), ParameterError);
    BidParams small_c = params;
    small_c.kernel_step_scale = 0.5;
    CHECK_THROWS_AS(BidProblem(RowMatrix::Constant(8, 8, 0.5), small_c), ParameterError);
    CHECK_THROWS_AS(bid_grads(RowMatrix::Zero(4, 4), delta_kernel(3), RowMatrix::Zero(5, 4), params), ShapeError);
}
