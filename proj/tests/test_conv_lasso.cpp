#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "ipalm/conv_lasso.hpp"
#include "ipalm/errors.hpp"
#include "ipalm/solver.hpp"
#include "ipalm/synthetic.hpp"
#include "oracles.hpp"

using namespace ipalm;

namespace {

ConvLassoParams small_params(std::size_t p = 4, std::size_t l = 5, double lambda = 0.2) {
    ConvLassoParams params;
    params.num_filters = p;
    params.filter_size = l;
    params.lambda = lambda;
    return params;
}

// full stacks with slot 0 fixed, free slots random
std::pair<Tensor, Tensor> random_stacks(const ConvLassoProblem& prob, std::mt19937_64& rng) {
    const auto& prm = prob.params();
    const auto m = static_cast<std::size_t>(prob.image().rows()), n = static_cast<std::size_t>(prob.image().cols());
    Tensor d({prm.num_filters, prm.filter_size, prm.filter_size});
    Tensor v({prm.num_filters, m, n});
    d.slice(0) = prob.lowpass();
    v.slice(0) = prob.image();
    for (std::size_t j = 1; j < prm.num_filters; ++j) {
        d.slice(j) = oracle::random_matrix(static_cast<Eigen::Index>(prm.filter_size),
                                           static_cast<Eigen::Index>(prm.filter_size), rng);
        v.slice(j) = oracle::random_matrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n), rng);
    }
    return {d, v};
}

double loop_objective(const Tensor& d, const Tensor& v, const RowMatrix& f, double lambda) {
    RowMatrix r = -f;
    double l1 = 0.0;
    for (std::size_t j = 0; j < d.shape()[0]; ++j) {
        r += oracle::circ_conv_loops(RowMatrix(v.slice(j)), RowMatrix(d.slice(j)));
        l1 += v.slice(j).cwiseAbs().sum();
    }
    return lambda * l1 + 0.5 * r.squaredNorm();
}

}  // namespace

TEST_CASE("gaussian filter") {
    const RowMatrix g = gaussian_filter(5, 1.25);
    CHECK(g.sum() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g(2, 2) == g.maxCoeff());
    CHECK(g(0, 1) == doctest::Approx(g(1, 0)).epsilon(1e-15));
    CHECK(g(0, 0) / g(2, 2) == doctest::Approx(std::exp(-8.0 / (2 * 1.25 * 1.25))));
    CHECK_THROWS_AS(gaussian_filter(5, 0.0), ParameterError);
}

TEST_CASE("objective against the loop oracle") {
    std::mt19937_64 rng(81);
    const ConvLassoProblem prob(synth_texture_image(12, 2), small_params());
    const auto [d, v] = random_stacks(prob, rng);
    const double want = loop_objective(d, v, prob.image(), 0.2);
    CHECK(prob.full_objective(d, v) == doctest::Approx(want).epsilon(1e-10));
    CHECK(convlasso_objective(d, v, prob.image(), 0.2, prob.lowpass()) == doctest::Approx(want).epsilon(1e-10));

    // same value through the block form
    BlockVector x({Tensor({3, 5, 5}), Tensor({3, 12, 12})});
    for (std::size_t j = 0; j < 3; ++j) {
        x[0].slice(j) = d.slice(j + 1);
        x[1].slice(j) = v.slice(j + 1);
    }
    const double block_form = prob.smooth_value(x) + 0.2 * x[1].vec().lpNorm<1>();
    CHECK(block_form == doctest::Approx(want).epsilon(1e-10));
    const auto [fd, fv] = prob.assemble(x);
    CHECK(fd == d);
    CHECK(fv == v);
}

TEST_CASE("constant objective without free variables") {
    const RowMatrix f = synth_texture_image(10, 3);
    const RowMatrix g = gaussian_filter(3, 0.75);
    Tensor d({1, 3, 3});
    Tensor v({1, 10, 10});
    d.slice(0) = g;
    v.slice(0) = f;
    const double want = 0.5 * (oracle::circ_conv_loops(f, g) - f).squaredNorm() + 0.7 * f.cwiseAbs().sum();
    CHECK(convlasso_objective(d, v, f, 0.7, g) == doctest::Approx(want).epsilon(1e-12));

    const ConvLassoProblem prob(f, small_params(3, 3, 0.7));
    CHECK(prob.objective(prob.initial_point(1)) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("slot contract and shapes") {
    std::mt19937_64 rng(82);
    const ConvLassoProblem prob(synth_texture_image(12, 2), small_params());
    auto [d, v] = random_stacks(prob, rng);
    Tensor bad = d;
    bad.slice(0)(0, 0) += 1e-3;
    CHECK_THROWS_AS(prob.full_objective(bad, v), ContractError);
    bad = v;
    bad.slice(0)(3, 3) += 1e-3;
    CHECK_THROWS_AS(prob.full_objective(d, bad), ContractError);
    CHECK_THROWS_AS(prob.full_objective(Tensor({4, 3, 3}), v), ShapeError);
    CHECK_THROWS_AS(convlasso_grads(d, Tensor({4, 11, 12}), prob.image()), ShapeError);
}

TEST_CASE("gradients against central differences") {
    std::mt19937_64 rng(83);
    const ConvLassoProblem prob(synth_texture_image(10, 4), small_params(3, 3));
    const auto [d, v] = random_stacks(prob, rng);
    const auto [gd, gv] = convlasso_grads(d, v, prob.image());
    CHECK(gd.slice(0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(gv.slice(0).cwiseAbs().maxCoeff() == 0.0);
    auto smooth = [&](const Tensor& dd, const Tensor& vv) {
        return 0.5 * convlasso_residual(dd, vv, prob.image()).squaredNorm();
    };
    const double h = 1e-6;
    for (int t = 0; t < 20; ++t) {
        Tensor dir_d(d.shape()), dir_v(v.shape());
        for (std::size_t j = 1; j < 3; ++j) {
            dir_d.slice(j) = oracle::random_matrix(3, 3, rng);
            dir_v.slice(j) = oracle::random_matrix(10, 10, rng);
        }
        Tensor dp = d, dm = d, vp = v, vm = v;
        dp.vec() += h * dir_d.vec();
        dm.vec() -= h * dir_d.vec();
        vp.vec() += h * dir_v.vec();
        vm.vec() -= h * dir_v.vec();
        const double fd_d = (smooth(dp, v) - smooth(dm, v)) / (2 * h);
        const double fd_v = (smooth(d, vp) - smooth(d, vm)) / (2 * h);
        CHECK(gd.vec().dot(dir_d.vec()) == doctest::Approx(fd_d).epsilon(1e-5));
        CHECK(gv.vec().dot(dir_v.vec()) == doctest::Approx(fd_v).epsilon(1e-5));
    }
}

TEST_CASE("delta dictionary gives the residual as coefficient gradient") {
    std::mt19937_64 rng(84);
    const RowMatrix f = oracle::random_matrix(6, 6, rng, 0.0, 1.0);
    Tensor d({2, 3, 3});
    Tensor v({2, 6, 6});
    d.slice(0)(0, 0) = 1.0;
    d.slice(1)(0, 0) = 1.0;
    v.slice(0) = f;
    v.slice(1) = oracle::random_matrix(6, 6, rng);
    const auto [gd, gv] = convlasso_grads(d, v, f);
    CHECK((gv.slice(1) - v.slice(1)).cwiseAbs().maxCoeff() <= 1e-14);
    // zero residual
    v.slice(1).setZero();
    d.slice(1).setZero();
    const auto [zd, zv] = convlasso_grads(d, v, f);
    CHECK(zd.squared_norm() == 0.0);
    CHECK(zv.squared_norm() == 0.0);
}

TEST_CASE("prox and constraint values") {
    const ConvLassoProblem prob(synth_texture_image(8, 1), small_params(3, 3, 0.5));
    Tensor v({2, 8, 8}, 0.3);
    CHECK(prob.nonsmooth_value(1, v) == doctest::Approx(0.5 * 0.3 * 128));
    CHECK(prob.prox(1, 1.0, v).squared_norm() == 0.0);
    CHECK(prob.prox(1, 1e-7, Tensor({2, 8, 8}, 1e6)).squared_norm() == 0.0);
    const Tensor kept = prob.prox(1, 10.0, v);
    CHECK(kept[0] == doctest::Approx(0.25));

    Tensor d({2, 3, 3}, 1.0);
    CHECK(std::isinf(prob.nonsmooth_value(0, d)));
    const Tensor pd = prob.prox(0, 1.0, d);
    CHECK(prob.nonsmooth_value(0, pd) == 0.0);
    const BlockVector x0 = prob.initial_point(5);
    CHECK(prob.nonsmooth_value(0, x0[0]) == 0.0);
    CHECK(x0[1].squared_norm() == 0.0);
    CHECK_FALSE(prob.lipschitz(0, x0).has_value());
}

TEST_CASE("runs keep the filter constraints") {
    const ConvLassoProblem prob(synth_texture_image(16, 2), small_params(4, 5, 0.1));
    SolverOptions o;
    o.schedules = make_schedules(prob, ScheduleType::StaticConvex, {0.0}, {0.0}, 0.0);
    o.lipschitz_mode = LipschitzMode::Backtrack;
    o.tol = 0.0;
    SolverState st = make_solver_state(prob, prob.initial_point(3), o);
    double prev = st.trace.rows.back().objective;
    for (int k = 0; k < 30; ++k) {
        ipalm_iterate(st, prob);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(std::abs(st.x_cur[0].slice(j).mean()) <= 1e-10);
            CHECK(st.x_cur[0].slice(j).norm() <= 1.0 + 1e-10);
        }
        const double obj = st.trace.rows.back().objective;
        CHECK(obj < prev);
        prev = obj;
    }
}

TEST_CASE("dictionary and sparsity outputs") {
    const ConvLassoProblem prob(synth_texture_image(8, 1), small_params(3, 3, 0.5));
    BlockVector x = prob.initial_point(1);
    x[1].slice(0)(1, 1) = 2.0;
    const auto dir = std::filesystem::temp_directory_path() / "ipalm_test_cl";
    std::filesystem::create_directories(dir);
    prob.write_dictionary(dir / "dict.pgm", x);
    CHECK(std::filesystem::file_size(dir / "dict.pgm") > 0);
    prob.write_sparsity_report(dir / "sparsity.csv", x);
    std::ifstream in(dir / "sparsity.csv");
    std::string header, fixed, free;
    std::getline(in, header);
    std::getline(in, fixed);
    std::getline(in, free);
    CHECK(header == "filter,nonzeros,fraction,l1");
    CHECK(fixed.rfind("1,", 0) == 0);
    CHECK(free.rfind("2,1,", 0) == 0);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(ConvLassoProblem(synth_texture_image(8, 1), small_params(1, 3)), ParameterError);
    CHECK_THROWS_AS(ConvLassoProblem(synth_texture_image(8, 1), small_params(3, 4)), ParameterError);
    CHECK_THROWS_AS(ConvLassoProblem(synth_texture_image(8, 1), small_params(3, 3, -1.0)), ParameterError);
}
