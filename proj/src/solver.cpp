#include "ipalm/solver.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace ipalm {

std::string to_string(LipschitzMode mode) {
    return mode == LipschitzMode::Exact ? "exact" : "backtrack";
}

std::string to_string(DeltaRule rule) {
    return rule == DeltaRule::Instantaneous ? "instantaneous" : "bounded";
}

std::vector<ScheduleKind> make_schedules(const Problem& problem, ScheduleType type,
                                         const std::vector<double>& alpha_bar,
                                         const std::vector<double>& beta_bar, double eps) {
    const std::size_t n = problem.num_blocks();
    auto pick = [n](const std::vector<double>& v, std::size_t i, const char* what) {
        if (v.size() == 1) return v[0];
        if (v.size() != n) {
            throw ParameterError(std::string(what) + " needs 1 or " + std::to_string(n) + " values, got " +
                                 std::to_string(v.size()));
        }
        return v[i];
    };
    std::vector<ScheduleKind> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (type == ScheduleType::Dynamic) {
            out.push_back(ScheduleKind::dynamic());
            continue;
        }
        const double a = pick(alpha_bar, i, "alpha_bar");
        const double b = pick(beta_bar, i, "beta_bar");
        if (type == ScheduleType::StaticConvex && problem.is_convex(i)) {
            out.push_back(ScheduleKind::static_convex(a, b, eps));
        } else {
            out.push_back(ScheduleKind::static_nonconvex(a, b, eps));
        }
    }
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

void check_options(const Problem& problem, const BlockVector& x0, const SolverOptions& opts) {
    const std::size_t n = problem.num_blocks();
    if (x0.num_blocks() != n) {
        throw ShapeError("initial point has " + std::to_string(x0.num_blocks()) + " blocks, problem has " +
                         std::to_string(n));
    }
    if (opts.schedules.size() != n) {
        throw ParameterError("need one schedule per block (" + std::to_string(n) + "), got " +
                             std::to_string(opts.schedules.size()));
    }
    for (std::size_t i = 0; i < n; ++i) {
        opts.schedules[i].validate();
        if (opts.schedules[i].type == ScheduleType::StaticConvex && !problem.is_convex(i)) {
            throw ParameterError("block " + std::to_string(i) + " has a nonconvex nonsmooth term; "
                                 "the convex step rule does not apply");
        }
    }
    if (opts.max_iter == 0) throw ParameterError("iteration budget must be at least 1");
    if (!(opts.tol >= 0.0)) throw ParameterError("tolerance must be nonnegative");
    if (!opts.tau_scale.empty() && opts.tau_scale.size() != n) {
        throw ParameterError("tau_scale needs one entry per block");
    }
    for (double c : opts.tau_scale) {
        if (!(c >= 1.0)) throw ParameterError("tau_scale entries must be >= 1");
    }
    if (!opts.lambda_plus.empty() && opts.lambda_plus.size() != n) {
        throw ParameterError("lambda_plus needs one entry per block");
    }
    if (!(opts.lipschitz_floor > 0.0)) throw ParameterError("lipschitz_floor must be positive");
    if (opts.lipschitz_mode == LipschitzMode::Backtrack) validate(opts.backtrack);
}

struct BlockStep {
    double tau;
    std::optional<double> delta;
};

// tau and delta for block i given the accepted (or candidate) L.
BlockStep step_for(const SolverState& state, std::size_t i, double alpha, double beta, double lipschitz) {
    const ScheduleKind& kind = state.options.schedules[i];
    BlockStep step{};
    if (kind.type == ScheduleType::Dynamic) {
        step = {lipschitz, std::nullopt};
    } else if (state.options.delta_rule == DeltaRule::Bounded) {
        const double bound = std::max(state.lambda_plus[i], lipschitz);
        const double delta = delta_star(kind.alpha_bar, kind.beta_bar, kind.eps, bound, kind.convex_rule());
        step = {tau_for_delta(alpha, beta, delta, lipschitz, kind.eps, kind.convex_rule()), delta};
    } else {
        const StepParameters p = tau_step(alpha, beta, lipschitz, kind);
        step = {p.tau, p.delta};
    }
    if (!state.options.tau_scale.empty()) step.tau *= state.options.tau_scale[i];
    return step;
}

Tensor prox_gradient_step(const Problem& problem, std::size_t i, double tau, const Tensor& y, const Tensor& grad) {
    Tensor p = y;
    p.vec() += (-1.0 / tau) * grad.vec();
    return problem.prox(i, tau, p);
}

}  // namespace

SolverState make_solver_state(const Problem& problem, BlockVector x0, SolverOptions options) {
    check_options(problem, x0, options);
    SolverState state;
    state.options = std::move(options);
    const std::size_t n = problem.num_blocks();
    state.backtrack.assign(n, state.options.backtrack);
    state.lambda_plus = state.options.lambda_plus.empty() ? std::vector<double>(n, 0.0) : state.options.lambda_plus;
    state.x_prev = x0;
    state.x_cur = std::move(x0);

    state.trace.problem = problem.name();
    state.trace.schedules = state.options.schedules;
    for (const auto& kind : state.options.schedules) {
        if (kind.type == ScheduleType::Dynamic) state.trace.heuristic = true;
    }
    TraceRow row;
    row.k = 0;
    row.objective = problem.objective(state.x_cur);
    if (!state.trace.heuristic) row.psi = row.objective;
    row.step_delta.assign(n, 0.0);
    state.trace.rows.push_back(std::move(row));
    return state;
}

void ipalm_iterate(SolverState& state, const Problem& problem) {
    const auto start = Clock::now();
    const std::size_t n = problem.num_blocks();
    const std::size_t k = state.k + 1;
    const SolverOptions& opts = state.options;

    TraceRow row;
    row.k = k;
    row.params.alpha.resize(n);
    row.params.beta.resize(n);
    row.params.tau.resize(n);
    row.params.delta.resize(n);
    row.params.lipschitz.resize(n);
    row.tested_lipschitz.resize(n);

    BlockVector work = state.x_cur;
    for (std::size_t i = 0; i < n; ++i) {
        const InertialCoefficients c = inertial_coefficients(opts.schedules[i], k);
        const Tensor y = extrapolate(state.x_cur, state.x_prev, c.alpha, i);
        Tensor z = extrapolate(state.x_cur, state.x_prev, c.beta, i);

        work[i] = z;
        const Tensor grad = problem.partial_gradient(i, work);

        double lipschitz = 0.0;
        BlockStep step{};
        Tensor next;
        if (opts.lipschitz_mode == LipschitzMode::Exact) {
            const auto exact = problem.lipschitz(i, work);
            if (!exact) {
                throw ParameterError("problem '" + problem.name() + "' has no exact Lipschitz modulus for block " +
                                     std::to_string(i) + "; use backtracking");
            }
            lipschitz = std::max(*exact, opts.lipschitz_floor);
            step = step_for(state, i, c.alpha, c.beta, lipschitz);
            next = prox_gradient_step(problem, i, step.tau, y, grad);
        } else {
            const double h_at_z = problem.smooth_value(work);
            BlockVector probe = work;
            auto h = [&](const Tensor& v) {
                probe[i] = v;
                return problem.smooth_value(probe);
            };
            auto candidate = [&](double l) {
                const BlockStep s = step_for(state, i, c.alpha, c.beta, std::max(l, opts.lipschitz_floor));
                return prox_gradient_step(problem, i, s.tau, y, grad);
            };
            BacktrackResult bt = backtrack_lipschitz(h, h_at_z, grad, z, candidate, state.backtrack[i]);
            lipschitz = std::max(bt.lipschitz, opts.lipschitz_floor);
            step = step_for(state, i, c.alpha, c.beta, lipschitz);
            next = std::move(bt.next);
            row.tested_lipschitz[i] = std::move(bt.tested);
        }
        state.lambda_plus[i] = std::max(state.lambda_plus[i], lipschitz);

        if (!next.all_finite()) {
            state.elapsed += std::chrono::duration<double>(Clock::now() - start).count();
            throw DivergenceError("non-finite iterate in block " + std::to_string(i) + " at iteration " +
                                      std::to_string(k),
                                  state.trace);
        }

        if (opts.check_prox_inequality && c.beta > 0.0) {
            // g = H(., other blocks) + f_i with u = x_i^k, u+ = x_i^{k+1}, v = y, w = z, s = L beta
            const Tensor& u = state.x_cur[i];
            BlockVector probe = work;
            probe[i] = u;
            const double g_u = problem.smooth_value(probe) + problem.nonsmooth_value(i, u);
            probe[i] = next;
            const double g_next = problem.smooth_value(probe) + problem.nonsmooth_value(i, next);
            const double s = lipschitz * c.beta;
            const double t = step.tau;
            const double rhs = g_u + 0.5 * (lipschitz + s) * (next.vec() - u.vec()).squaredNorm() +
                               0.5 * t * (u.vec() - y.vec()).squaredNorm() -
                               0.5 * t * (next.vec() - y.vec()).squaredNorm() +
                               lipschitz * lipschitz / (2.0 * s) * (u.vec() - z.vec()).squaredNorm();
            const double excess = g_next - rhs;
            ++row.prox_inequality_checks;
            row.prox_inequality_worst = std::max(row.prox_inequality_worst, excess);
            if (excess > opts.prox_inequality_slack) ++row.prox_inequality_violations;
        }

        work[i] = std::move(next);
        row.params.alpha[i] = c.alpha;
        row.params.beta[i] = c.beta;
        row.params.tau[i] = step.tau;
        row.params.delta[i] = step.delta;
        row.params.lipschitz[i] = lipschitz;
    }

    row.step_delta = step_deltas(work, state.x_cur);
    double step_sq = 0.0;
    for (double d : row.step_delta) step_sq += 2.0 * d;
    row.step_norm = std::sqrt(step_sq);
    row.objective = problem.objective(work);
    bool has_psi = true;
    double psi = row.objective;
    for (std::size_t i = 0; i < n; ++i) {
        if (!row.params.delta[i]) {
            has_psi = false;
            break;
        }
        psi += *row.params.delta[i] * row.step_delta[i];
    }
    if (has_psi) row.psi = psi;

    state.x_prev = std::move(state.x_cur);
    state.x_cur = std::move(work);
    state.k = k;
    state.elapsed += std::chrono::duration<double>(Clock::now() - start).count();
    row.seconds = state.elapsed;

    if (!std::isfinite(row.objective)) {
        throw DivergenceError("objective became non-finite at iteration " + std::to_string(k), state.trace);
    }
    state.trace.rows.push_back(std::move(row));
}

RunResult run(const Problem& problem, const SolverOptions& options, BlockVector x0) {
    SolverState state = make_solver_state(problem, std::move(x0), options);
    for (std::size_t it = 0; it < state.options.max_iter; ++it) {
        const double prev_norm = std::sqrt(state.x_cur.squared_norm());
        ipalm_iterate(state, problem);
        if (state.trace.rows.back().step_norm <= state.options.tol * (1.0 + prev_norm)) {
            state.trace.converged = true;
            break;
        }
    }
    return {std::move(state.trace), std::move(state.x_cur)};
}

RunResult run(const Problem& problem, const SolverOptions& options, std::uint64_t seed) {
    return run(problem, options, problem.initial_point(seed));
}

double lyapunov_psi(const BlockVector& x_cur, const BlockVector& x_prev, const std::vector<double>& delta,
                    const Problem& problem) {
    require_same_structure(x_cur, x_prev, "lyapunov_psi");
    if (delta.size() != x_cur.num_blocks()) throw ShapeError("lyapunov_psi: one delta per block required");
    double psi = problem.objective(x_cur);
    for (std::size_t i = 0; i < delta.size(); ++i) {
        if (!(delta[i] >= 0.0)) throw ParameterError("lyapunov_psi: delta must be nonnegative");
        psi += 0.5 * delta[i] * (x_cur[i].vec() - x_prev[i].vec()).squaredNorm();
    }
    return psi;
}

std::string trace_csv_header(std::size_t num_blocks) {
    std::ostringstream out;
    out << "k,F,Psi";
    for (const char* name : {"delta", "L", "tau", "alpha", "beta"}) {
        for (std::size_t i = 1; i <= num_blocks; ++i) out << ',' << name << i;
    }
    out << ",step_norm,seconds";
    return out.str();
}

void write_trace_csv(std::ostream& out, const SolverTrace& trace) {
    const std::size_t n = trace.schedules.size();
    out << "# problem=" << trace.problem << '\n';
    out << "# mode=" << (trace.heuristic ? "heuristic" : "guaranteed") << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = trace.schedules[i];
        out << "# block" << i + 1 << " schedule=" << to_string(s.type);
        if (s.is_static()) out << " alpha_bar=" << s.alpha_bar << " beta_bar=" << s.beta_bar << " eps=" << s.eps;
        out << '\n';
    }
    for (const auto& note : trace.notes) out << "# " << note << '\n';
    out << trace_csv_header(n) << '\n';

    const auto old_precision = out.precision(17);
    auto field = [&](double v) { out << ',' << v; };
    auto optional_field = [&](const std::optional<double>& v) {
        out << ',';
        if (v) out << *v;
    };
    for (const auto& row : trace.rows) {
        out << row.k;
        field(row.objective);
        optional_field(row.psi);
        const bool has_params = !row.params.tau.empty();
        auto per_block = [&](auto getter) {
            for (std::size_t i = 0; i < n; ++i) {
                if (has_params) {
                    getter(i);
                } else {
                    out << ',';
                }
            }
        };
        per_block([&](std::size_t i) { optional_field(row.params.delta[i]); });
        per_block([&](std::size_t i) { field(row.params.lipschitz[i]); });
        per_block([&](std::size_t i) { field(row.params.tau[i]); });
        per_block([&](std::size_t i) { field(row.params.alpha[i]); });
        per_block([&](std::size_t i) { field(row.params.beta[i]); });
        field(row.step_norm);
        field(row.seconds);
        out << '\n';
    }
    out.precision(old_precision);
}

}  // namespace ipalm
