// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ipalm/bid.hpp"
#include "ipalm/conv_lasso.hpp"
#include "ipalm/image_ops.hpp"
#include "ipalm/nmf.hpp"
#include "ipalm/prox.hpp"
#include "ipalm/solver.hpp"
#include "ipalm/synthetic.hpp"
#include "ipalm/verify.hpp"
#include "oracles.hpp"

using namespace ipalm;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

bool report(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
    const auto start = Clock::now();
    Outcome o{false, ""};
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const bool in_time = secs < budget_s;
    const bool pass = o.pass && in_time;
    std::printf("CRITERION %d %s: %s (%.2fs / %.0fs) %s%s\n", id, title, pass ? "PASS" : "FAIL", secs, budget_s,
                o.detail.c_str(), in_time ? "" : " [over time budget]");
    std::fflush(stdout);
    return pass;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Outcome lemma_identities() {
    LemmaGrid grid;
    grid.points = 10000;
    grid.seed = 2024;
    const CheckReport r = check_lemma_gh(grid);
    return {r.passed() && r.records.size() == 20000,
            fmt("%.0f points (nonconvex + convex), %.0f violations", static_cast<double>(r.records.size()),
                static_cast<double>(r.violations()))};
}

Outcome prox_inequality() {
    const CheckReport r = check_prox_inequality(1000, 2024, 1e-9);
    return {r.passed(), fmt("%.0f checks over 1000 trials, %.0f violations", static_cast<double>(r.records.size()),
                            static_cast<double>(r.violations()))};
}

// 20x30 rank-3 instance with 2 nonzeros per basis column, seed 1.
Outcome c1_descent() {
    const NmfInstance inst = synth_nmf(20, 30, 3, 2, 1);
    const NmfProblem p(inst.a, 3, 2);
    bool ok = true;
    std::string detail;
    for (const auto type : {ScheduleType::StaticNonconvex, ScheduleType::StaticConvex}) {
        SolverOptions o;
        o.schedules = make_schedules(p, type, {0.2}, {0.2}, 0.05);
        o.delta_rule = DeltaRule::Bounded;
        o.max_iter = 2000;
        o.tol = 0.0;
        const RunResult res = run(p, o, std::uint64_t{1});
        const double rho = c1_rho(res.trace);
        const CheckReport r = check_c1_descent(res.trace, rho, 1e-8);
        double sum_sq = 0.0;
        for (const auto& row : res.trace.rows) sum_sq += row.step_norm * row.step_norm;
        const double last = res.trace.rows.back().step_norm;
        const bool this_ok = r.passed() && r.records.size() == 2000 && std::isfinite(sum_sq) && last < 1e-6 && rho > 0;
        ok = ok && this_ok;
        detail += to_string(type) + fmt(": rho1=%.3g violations=%.0f", rho, static_cast<double>(r.violations())) +
                  fmt(" sum|du|^2=%.3g final step=%.3g; ", sum_sq, last);
    }
    return {ok, detail};
}

Outcome palm_recovery() {
    const NmfInstance inst = synth_nmf(20, 30, 3, 2, 7);
    const NmfProblem p(inst.a, 3, 2);
    SolverOptions o;
    o.schedules = make_schedules(p, ScheduleType::StaticNonconvex, {0.0}, {0.0}, 0.0);
    o.max_iter = 1;
    o.tol = 0.0;
    SolverState st = make_solver_state(p, p.initial_point(7), o);
    oracle::PalmNmf palm{inst.a, 2};
    RowMatrix b = st.x_cur[0].matrix();
    RowMatrix c = st.x_cur[1].matrix();
    int first_mismatch = -1;
    for (int k = 1; k <= 10; ++k) {
        ipalm_iterate(st, p);
        palm.step(b, c);
        if (first_mismatch < 0 && (st.x_cur[0].matrix() != b || st.x_cur[1].matrix() != c)) first_mismatch = k;
    }
    return {first_mismatch < 0, first_mismatch < 0 ? "10 iterations bitwise identical"
                                                   : fmt("first mismatch at iteration %.0f", first_mismatch)};
}

Outcome gradient_oracles() {
    bool ok = true;
    std::string detail;
    std::mt19937_64 rng(99);
    std::normal_distribution<double> noise(0.0, 0.05);
    auto perturb = [&](const Problem& p, BlockVector x) {
        for (std::size_t i = 0; i < x.num_blocks(); ++i)
            for (double& v : x[i].values()) v += noise(rng);
        (void)p;
        return x;
    };
    auto check = [&](const Problem& p, const BlockVector& x) {
        const CheckReport r = check_gradients(p, x, 5, 20, 1e-4, 1e-7);
        ok = ok && r.passed() && r.records.size() == 20 * p.num_blocks();
        detail += p.name() + fmt(": %.0f/%.0f; ", static_cast<double>(r.records.size() - r.violations()),
                                 static_cast<double>(r.records.size()));
    };
    const NmfInstance nmf_inst = synth_nmf(20, 30, 3, 2, 3);
    const NmfProblem nmf(nmf_inst.a, 3, 2);
    check(nmf, perturb(nmf, nmf.initial_point(3)));

    BidParams bp;
    bp.kernel_rows = bp.kernel_cols = 7;
    const BidInstance bid_inst = synth_bid(32, 7, 3);
    const BidProblem bid(bid_inst.blurred, bp);
    check(bid, perturb(bid, bid.initial_point(3)));

    ConvLassoParams cp;
    cp.num_filters = 8;
    cp.filter_size = 5;
    const ConvLassoProblem conv(synth_texture_image(32, 3), cp);
    check(conv, perturb(conv, conv.initial_point(3)));
    return {ok, detail};
}

Outcome prox_oracles() {
    std::mt19937_64 rng(606);
    std::size_t l0_bad = 0, simplex_bad = 0, filter_bad = 0, idem_bad = 0;
    for (int t = 0; t < 1000; ++t) {
        const int m = 1 + t % 8;
        const auto s = static_cast<std::size_t>(std::uniform_int_distribution<int>(0, m)(rng));
        const Eigen::VectorXd p = oracle::random_vector(m, rng, -2.0, 2.0);
        const Tensor got = prox_l0_nonneg_cols(Tensor::from_matrix(RowMatrix(p)), s);
        if ((got.vec() - oracle::l0_nonneg_bruteforce(p, s)).cwiseAbs().maxCoeff() > 1e-14) ++l0_bad;
    }
    for (int t = 0; t < 500; ++t) {
        const int n = 2 + t % 20;
        const Eigen::VectorXd p = oracle::random_vector(n, rng, -3.0, 3.0);
        Tensor pt({static_cast<std::size_t>(n)});
        pt.vec() = p;
        const Tensor sx = prox_simplex(pt);
        if ((sx.vec() - oracle::simplex_bisection(p)).cwiseAbs().maxCoeff() > 1e-8) ++simplex_bad;
        const Tensor fx = prox_filter_constraint(pt);
        if ((fx.vec() - oracle::zero_mean_ball_dykstra(p)).cwiseAbs().maxCoeff() > 1e-8) ++filter_bad;

        const Tensor box = prox_box01(pt), nn = prox_nonneg(pt);
        const Tensor mat = Tensor::from_matrix(RowMatrix(p));
        const Tensor l0 = prox_l0_nonneg_cols(mat, 2);
        auto gap = [](const Tensor& a, const Tensor& b) { return (a.vec() - b.vec()).cwiseAbs().maxCoeff(); };
        if (gap(sx, prox_simplex(sx)) > 1e-14 || gap(fx, prox_filter_constraint(fx)) > 1e-14 ||
            gap(box, prox_box01(box)) > 1e-14 || gap(nn, prox_nonneg(nn)) > 1e-14 ||
            gap(l0, prox_l0_nonneg_cols(l0, 2)) > 1e-14) {
            ++idem_bad;
        }
    }
    const bool ok = l0_bad + simplex_bad + filter_bad + idem_bad == 0;
    return {ok, fmt("l0 mismatches %.0f/1000, simplex %.0f/500, ", static_cast<double>(l0_bad),
                    static_cast<double>(simplex_bad)) +
                    fmt("filter %.0f/500, idempotence failures %.0f/500", static_cast<double>(filter_bad),
                        static_cast<double>(idem_bad))};
}

Outcome convolution_consistency() {
    std::mt19937_64 rng(707);
    double worst = 0.0, worst_loop = 0.0, mass = 0.0;
    for (int t = 0; t < 100; ++t) {
        const RowMatrix u = oracle::random_matrix(8, 8, rng);
        const RowMatrix b = oracle::random_matrix(3, 3, rng);
        const RowMatrix direct = circ_conv(u, b, ConvPath::Direct);
        const RowMatrix fft = circ_conv(u, b, ConvPath::Fft);
        worst = std::max(worst, (direct - fft).norm() / direct.norm());
        worst_loop = std::max(worst_loop, (direct - oracle::circ_conv_loops(u, b)).norm() / direct.norm());
        RowMatrix k = oracle::random_matrix(3, 3, rng, 0.0, 1.0);
        k /= k.sum();
        const double level = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const RowMatrix flat = RowMatrix::Constant(8, 8, level);
        for (const ConvPath path : {ConvPath::Direct, ConvPath::Fft})
            mass = std::max(mass, (circ_conv(flat, k, path).array() - level).abs().maxCoeff());
    }
    return {worst <= 1e-10 && worst_loop <= 1e-10 && mass <= 1e-14,
            fmt("direct vs fft %.2e, direct vs loops %.2e, constant image drift %.2e", worst, worst_loop, mass)};
}

// Objective after K=1000 iterations: dynamic schedule against alpha = beta = 0
// (tau = L, plain PALM) from the same start. The desk instance is fixed; the
// seed only draws the starting point. K=100 values are printed alongside.
struct OrderingRun {
    int wins = 0;
    std::string detail;
};

OrderingRun ordering(const Problem& p, LipschitzMode mode, std::uint64_t seed) {
    auto trace = [&](ScheduleType type) {
        SolverOptions o;
        o.schedules = make_schedules(p, type, {0.0}, {0.0}, 0.0);
        o.lipschitz_mode = mode;
        o.max_iter = 1000;
        o.tol = 0.0;
        return run(p, o, seed).trace;
    };
    const SolverTrace dyn = trace(ScheduleType::Dynamic);
    const SolverTrace base = trace(ScheduleType::StaticNonconvex);
    const double d = dyn.rows.at(1000).objective, b = base.rows.at(1000).objective;
    return {d <= b ? 1 : 0, fmt("[K=1000 %.6g vs %.6g", d, b) +
                                fmt(", K=100 %.6g vs %.6g]", dyn.rows[100].objective, base.rows[100].objective)};
}

Outcome table_ordering() {
    int nmf_wins = 0, conv_wins = 0;
    std::string detail = "nmf:";
    const NmfInstance inst = synth_nmf(20, 30, 3, 2, 1);
    const NmfProblem nmf(inst.a, 3, 2);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const OrderingRun r = ordering(nmf, LipschitzMode::Exact, seed);
        nmf_wins += r.wins;
        detail += " " + r.detail;
    }
    detail += "; convlasso:";
    ConvLassoParams cp;
    cp.num_filters = 8;
    cp.filter_size = 5;
    cp.lambda = 0.2;
    const ConvLassoProblem conv(synth_texture_image(32, 1), cp);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const OrderingRun r = ordering(conv, LipschitzMode::Backtrack, seed);
        conv_wins += r.wins;
        detail += " " + r.detail;
    }
    detail += fmt("; dynamic <= plain in %.0f/5 (nmf), %.0f/5 (convlasso)", nmf_wins, conv_wins);
    return {nmf_wins >= 4 && conv_wins >= 4, detail};
}

// Frozen after calibration against the known ground-truth kernel.
constexpr std::uint64_t kBidSeed = 1;
constexpr double kBidLambda = 1e5;
constexpr double kBidTheta = 1e3;
constexpr double kBidStepScale = 10.0;
constexpr double kBidRatio = 10.0;

Outcome bid_recovery() {
    const BidInstance inst = synth_bid(64, 7, kBidSeed);
    BidParams bp;
    bp.lambda = kBidLambda;
    bp.theta = kBidTheta;
    bp.kernel_rows = bp.kernel_cols = 7;
    bp.kernel_step_scale = kBidStepScale;
    const BidProblem p(inst.blurred, bp);
    SolverOptions o;
    o.schedules = make_schedules(p, ScheduleType::StaticConvex, {0.4}, {0.4}, 0.0);
    o.lipschitz_mode = LipschitzMode::Backtrack;
    o.tau_scale = p.tau_scale();
    o.max_iter = 2000;
    o.tol = 0.0;
    const BlockVector x0 = p.initial_point(kBidSeed);
    const double e0 = (x0[1].matrix() - inst.kernel).cwiseAbs().sum();
    const RunResult res = run(p, o, x0);
    const double e1 = (res.solution[1].matrix() - inst.kernel).cwiseAbs().sum();
    return {res.trace.rows.size() == 2001 && e0 >= kBidRatio * e1,
            fmt("kernel l1 error %.4f -> %.4f, reduction %.1fx", e0, e1, e0 / e1) + fmt(" (threshold %.0fx)", kBidRatio)};
}

}  // namespace

int main() {
    bool all = true;
    all &= report(1, "lemma g/h identities", 5, lemma_identities);
    all &= report(2, "proximal inequality", 30, prox_inequality);
    all &= report(3, "C1 descent on sparse NMF", 60, c1_descent);
    all &= report(4, "PALM recovery", 60, palm_recovery);
    all &= report(5, "gradient oracles", 60, gradient_oracles);
    all &= report(6, "projection oracles", 60, prox_oracles);
    all &= report(7, "convolution consistency", 60, convolution_consistency);
    all &= report(8, "schedule ordering at K=1000", 600, table_ordering);
    all &= report(9, "BID kernel recovery", 300, bid_recovery);
    std::printf("%s\n", all ? "ALL PASS" : "SOME CRITERIA FAILED");
    return all ? 0 : 1;
}
