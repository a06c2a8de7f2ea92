#include "ipalm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ipalm/bid.hpp"
#include "ipalm/conv_lasso.hpp"
#include "ipalm/errors.hpp"
#include "ipalm/nmf.hpp"
#include "ipalm/prox.hpp"
#include "ipalm/synthetic.hpp"

namespace ipalm {

std::size_t CheckReport::violations() const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.ok; }));
}

void CheckReport::write_csv(std::ostream& out) const {
    out << "check,trial,status,detail\n";
    for (const auto& r : records) {
        out << check << ',' << r.trial << ',' << (r.ok ? "pass" : "fail") << ",\"" << r.detail << "\"\n";
    }
}

namespace {

std::string vec_str(const Eigen::VectorXd& v) {
    std::ostringstream out;
    out.precision(17);
    for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
    return out.str();
}

enum class Sigma { L1, Box, Nonneg, L0 };

const char* sigma_name(Sigma s) {
    switch (s) {
        case Sigma::L1: return "l1";
        case Sigma::Box: return "box";
        case Sigma::Nonneg: return "nonneg";
        case Sigma::L0: return "l0";
    }
    return "?";
}

}  // namespace

CheckReport check_prox_inequality(std::size_t trials, std::uint64_t seed, double slack) {
    if (trials == 0) throw ParameterError("check_prox_inequality: trials must be >= 1");
    CheckReport report{"prox_inequality", {}};
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (std::size_t trial = 0; trial < trials; ++trial) {
        const auto d = static_cast<Eigen::Index>(1 + rng() % 10);
        const auto sigma = static_cast<Sigma>(trial % 4);
        const double weight = 0.1 + unit(rng);
        const std::size_t sparsity = 1 + static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(d));

        Eigen::MatrixXd m(d, d);
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
        const Eigen::MatrixXd q = m.transpose() * m;
        Eigen::VectorXd lin(d);
        for (Eigen::Index i = 0; i < d; ++i) lin[i] = normal(rng);
        const double lh = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();

        auto as_tensor = [d](const Eigen::VectorXd& v) {
            return Tensor({static_cast<std::size_t>(d), 1}, std::vector<double>(v.data(), v.data() + v.size()));
        };
        auto prox = [&](const Eigen::VectorXd& p, double t) -> Eigen::VectorXd {
            const Tensor pt = as_tensor(p);
            Tensor out;
            switch (sigma) {
                case Sigma::L1: out = prox_l1(pt, weight / t); break;
                case Sigma::Box: out = prox_box01(pt); break;
                case Sigma::Nonneg: out = prox_nonneg(pt); break;
                case Sigma::L0: out = prox_l0_nonneg_cols(pt, sparsity); break;
            }
            return out.vec();
        };
        auto sample = [&]() -> Eigen::VectorXd {
            Eigen::VectorXd v(d);
            for (Eigen::Index i = 0; i < d; ++i) v[i] = normal(rng);
            switch (sigma) {
                case Sigma::L1: return v;
                case Sigma::Box: return v.unaryExpr([&](double) { return unit(rng); });
                case Sigma::Nonneg: return v.cwiseAbs();
                case Sigma::L0: return prox(v.cwiseAbs(), 1.0);
            }
            return v;
        };
        auto sigma_value = [&](const Eigen::VectorXd& x) { return sigma == Sigma::L1 ? weight * x.lpNorm<1>() : 0.0; };
        auto g = [&](const Eigen::VectorXd& x) { return 0.5 * x.dot(q * x) + lin.dot(x) + sigma_value(x); };

        const Eigen::VectorXd u = sample();
        const Eigen::VectorXd v = sample();
        const Eigen::VectorXd w = sample();
        const double t = std::exp(-2.0 + 5.0 * unit(rng));
        double s = std::exp(-3.0 + 6.0 * unit(rng));
        const Eigen::VectorXd up = prox(v - (q * w + lin) / t, t);

        bool targeted = false;
        if (trial % 5 == 4) {
            const double du = (up - u).norm();
            const double dw = (u - w).norm();
            if (du > 0.0 && dw > 0.0) {
                s = lh * dw / du;
                targeted = true;
            }
        }

        const double lhs = g(up);
        const double rhs = g(u) + 0.5 * (lh + s) * (up - u).squaredNorm() + 0.5 * t * (u - v).squaredNorm() -
                           0.5 * t * (up - v).squaredNorm() + lh * lh / (2.0 * s) * (u - w).squaredNorm();
        const double excess = lhs - rhs;
        bool ok = excess <= slack * (1.0 + std::abs(rhs));

        const bool convex = sigma != Sigma::L0;
        double excess_tight = 0.0;
        if (convex) {
            const double rhs_tight = rhs - 0.5 * t * (up - u).squaredNorm();
            excess_tight = lhs - rhs_tight;
            ok = ok && excess_tight <= slack * (1.0 + std::abs(rhs_tight));
        }

        std::ostringstream detail;
        detail.precision(6);
        detail << "sigma=" << sigma_name(sigma) << " dim=" << d << " t=" << t << " s=" << s
               << (targeted ? " (minimizing)" : "") << " excess=" << excess;
        if (convex) detail << " excess_convex=" << excess_tight;
        if (!ok) {
            detail.precision(17);
            detail << " L=" << lh << " u=[" << vec_str(u) << "] v=[" << vec_str(v) << "] w=[" << vec_str(w)
                   << "] u+=[" << vec_str(up) << "]";
        }
        report.records.push_back({trial, ok, detail.str()});
    }
    return report;
}

CheckReport check_lemma_gh(const LemmaGrid& grid) {
    if (grid.points == 0 || grid.eps.empty()) throw ParameterError("check_lemma_gh: empty grid");
    CheckReport report{"lemma_gh", {}};
    std::mt19937_64 rng(grid.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t trial = 0;
    for (const bool convex : {false, true}) {
        for (std::size_t p = 0; p < grid.points; ++p, ++trial) {
            const double eps = grid.eps[p % grid.eps.size()];
            const double upper = convex ? 1.0 - eps : 0.5 * (1.0 - eps);
            const double alpha_bar = 0.999 * upper * unit(rng);
            const double beta_bar = unit(rng);
            const double lambda = grid.lambda_max * std::max(unit(rng), 1e-6);
            const bool boundary = p % 10 == 0;
            const double alpha = boundary ? alpha_bar : alpha_bar * unit(rng);
            const double beta = boundary ? beta_bar : beta_bar * unit(rng);
            const double lip = boundary ? lambda : lambda * std::max(unit(rng), 1e-6);

            const double delta = delta_star(alpha_bar, beta_bar, eps, lambda, convex);
            const double tau = tau_for_delta(alpha, beta, delta, lip, eps, convex);
            const LemmaGH gh = lemma_gh(alpha, beta, delta, tau, lip, convex);
            const double g_err = std::abs(gh.g - eps * delta);
            const double h_gap = gh.h - eps * delta;
            const double slack = 1e-12 * (1.0 + std::abs(delta));
            const bool ok = g_err <= slack && h_gap >= -slack;

            std::ostringstream detail;
            detail.precision(17);
            detail << (convex ? "convex" : "nonconvex") << " eps=" << eps << " alpha=" << alpha
                   << " alpha_bar=" << alpha_bar << " beta=" << beta << " beta_bar=" << beta_bar << " L=" << lip
                   << " lambda=" << lambda << " delta=" << delta << " tau=" << tau << " g-eps*delta=" << gh.g - eps * delta
                   << " h-eps*delta=" << h_gap;
            report.records.push_back({trial, ok, detail.str()});
        }
    }
    return report;
}

double c1_rho(const SolverTrace& trace) {
    double rho = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < trace.rows.size(); ++j) {
        const auto& delta = trace.rows[j].params.delta;
        for (std::size_t i = 0; i < delta.size(); ++i) {
            if (!delta[i]) throw ContractError("c1_rho: trace has no Lyapunov weights (dynamic schedule)");
            rho = std::min(rho, 0.5 * trace.schedules[i].eps * *delta[i]);
        }
    }
    return std::isfinite(rho) ? rho : 0.0;
}

CheckReport check_c1_descent(const SolverTrace& trace, double rho1, double abs_slack, double rel_slack) {
    CheckReport report{"c1_descent", {}};
    if (trace.heuristic) {
        report.records.push_back({0, true, "skipped: heuristic (dynamic) schedule has no Lyapunov weights"});
        return report;
    }
    for (std::size_t j = 0; j + 1 < trace.rows.size(); ++j) {
        const TraceRow& cur = trace.rows[j];
        const TraceRow& next = trace.rows[j + 1];
        double psi_cur = cur.objective;
        double psi_next = next.objective;
        double move = 0.0;
        bool have_delta = true;
        for (std::size_t i = 0; i < next.step_delta.size(); ++i) {
            if (!next.params.delta[i]) {
                have_delta = false;
                break;
            }
            const double d = *next.params.delta[i];
            psi_cur += d * cur.step_delta[i];
            psi_next += d * next.step_delta[i];
            move += 2.0 * (cur.step_delta[i] + next.step_delta[i]);
        }
        if (!have_delta) throw ContractError("check_c1_descent: static trace row without delta");
        const double decrease = psi_cur - psi_next;
        const double required = rho1 * move - (abs_slack + rel_slack * std::abs(psi_cur));
        std::ostringstream detail;
        detail.precision(17);
        detail << "k=" << j << " decrease=" << decrease << " rho1*move=" << rho1 * move;
        report.records.push_back({j, decrease >= required, detail.str()});
    }
    return report;
}

CheckReport check_gradients(const Problem& problem, const BlockVector& x, std::uint64_t seed, std::size_t directions,
                            double rel_tol, double abs_tol) {
    CheckReport report{"gradients_" + problem.name(), {}};
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::size_t trial = 0;
    for (std::size_t i = 0; i < problem.num_blocks(); ++i) {
        const Tensor grad = problem.partial_gradient(i, x);
        const double scale = std::max(1.0, x[i].vec().lpNorm<Eigen::Infinity>());
        const double h = 1e-6 * scale;
        for (std::size_t q = 0; q < directions; ++q, ++trial) {
            Tensor dir(x[i].shape());
            for (double& v : dir.values()) v = normal(rng);
            dir.vec() /= dir.vec().norm();
            BlockVector plus = x;
            BlockVector minus = x;
            plus[i].vec() += h * dir.vec();
            minus[i].vec() -= h * dir.vec();
            const double fd = (problem.smooth_value(plus) - problem.smooth_value(minus)) / (2.0 * h);
            const double an = grad.vec().dot(dir.vec());
            const double tol = std::max(rel_tol * std::max(std::abs(fd), std::abs(an)), abs_tol);
            std::ostringstream detail;
            detail.precision(17);
            detail << "block=" << i << " fd=" << fd << " analytic=" << an;
            report.records.push_back({trial, std::abs(fd - an) <= tol, detail.str()});
        }
    }
    return report;
}

namespace {

BlockVector perturbed_start(const Problem& problem, std::uint64_t seed) {
    BlockVector x = problem.initial_point(seed);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> normal(0.0, 0.05);
    for (std::size_t i = 0; i < x.num_blocks(); ++i) {
        for (double& v : x[i].values()) v += normal(rng);
    }
    return x;
}

}  // namespace

std::vector<CheckReport> run_verify_battery(std::uint64_t seed, const std::filesystem::path& out_dir) {
    std::vector<CheckReport> reports;
    reports.push_back(check_prox_inequality(1000, seed));
    reports.push_back(check_lemma_gh(LemmaGrid{.seed = seed}));

    {
        const NmfInstance inst = synth_nmf(20, 30, 3, 2, seed);
        const NmfProblem problem(inst.a, 3, 2);
        SolverOptions opts;
        opts.schedules = make_schedules(problem, ScheduleType::StaticNonconvex, {0.2}, {0.2}, 0.05);
        opts.delta_rule = DeltaRule::Bounded;
        opts.max_iter = 2000;
        opts.tol = 0.0;
        const RunResult res = run(problem, opts, seed);
        CheckReport c1 = check_c1_descent(res.trace, c1_rho(res.trace));
        c1.check = "c1_descent_nmf";
        reports.push_back(std::move(c1));
    }
    {
        const BidInstance inst = synth_bid(32, 5, seed);
        BidParams params;
        params.kernel_rows = params.kernel_cols = 5;
        params.lambda = 1e3;
        params.theta = 1e2;
        const BidProblem problem(inst.blurred, params);
        SolverOptions opts;
        opts.schedules = make_schedules(problem, ScheduleType::StaticConvex, {0.2}, {0.2}, 0.05);
        opts.delta_rule = DeltaRule::Bounded;
        opts.lipschitz_mode = LipschitzMode::Backtrack;
        opts.tau_scale = problem.tau_scale();
        opts.max_iter = 200;
        opts.tol = 0.0;
        const RunResult res = run(problem, opts, seed);
        CheckReport c1 = check_c1_descent(res.trace, c1_rho(res.trace));
        c1.check = "c1_descent_bid";
        reports.push_back(std::move(c1));
    }

    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        RowMatrix a(6, 5);
        for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = unit(rng);
        const NmfProblem nmf(a, 2, 3);
        reports.push_back(check_gradients(nmf, perturbed_start(nmf, seed), seed));

        const BidInstance inst = synth_bid(16, 5, seed);
        BidParams params;
        params.kernel_rows = params.kernel_cols = 5;
        const BidProblem bid(inst.blurred, params);
        reports.push_back(check_gradients(bid, perturbed_start(bid, seed), seed));

        ConvLassoParams cl;
        cl.num_filters = 4;
        cl.filter_size = 5;
        const ConvLassoProblem conv(synth_texture_image(16, seed), cl);
        reports.push_back(check_gradients(conv, perturbed_start(conv, seed), seed));
    }

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        for (const auto& r : reports) {
            std::ofstream out(out_dir / (r.check + ".csv"));
            if (!out) throw DataError("cannot write report into " + out_dir.string());
            r.write_csv(out);
        }
    }
    return reports;
}

}  // namespace ipalm
