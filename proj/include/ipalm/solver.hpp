#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ipalm/block_model.hpp"
#include "ipalm/errors.hpp"
#include "ipalm/lipschitz.hpp"
#include "ipalm/schedules.hpp"

namespace ipalm {

enum class LipschitzMode { Exact, Backtrack };

// How the Lyapunov weight delta (and through it tau) is chosen for static schedules.
//
// Instantaneous: delta from the current (alpha, beta, L), the practical rule.
// Bounded: delta from the bounds (alpha_bar, beta_bar) and lambda_plus, where
// lambda_plus is the running maximum of every L seen so far (seeded from
// SolverOptions::lambda_plus). Each step then satisfies the sufficient
// decrease of the Lyapunov function with the delta it used.
enum class DeltaRule { Instantaneous, Bounded };

std::string to_string(LipschitzMode mode);
std::string to_string(DeltaRule rule);

struct SolverOptions {
    // One schedule per block.
    std::vector<ScheduleKind> schedules;
    LipschitzMode lipschitz_mode = LipschitzMode::Exact;
    DeltaRule delta_rule = DeltaRule::Instantaneous;
    // Initial Lipschitz bound per block for DeltaRule::Bounded; empty means 0.
    std::vector<double> lambda_plus;
    // Per-block multiplier (>= 1) applied to tau after the step rule.
    std::vector<double> tau_scale;
    std::size_t max_iter = 1000;
    // Stop when ||x^{k+1} - x^k|| <= tol * (1 + ||x^k||).
    double tol = 1e-9;
    BacktrackState backtrack;
    double lipschitz_floor = 1e-12;
    // Evaluate the proximal inequality with s = L beta at every block update.
    bool check_prox_inequality = false;
    double prox_inequality_slack = 1e-8;
};

// Builds per-block schedules: StaticConvex applies the convex rule only on
// blocks whose f_i is convex and falls back to the nonconvex rule elsewhere.
std::vector<ScheduleKind> make_schedules(const Problem& problem, ScheduleType type,
                                         const std::vector<double>& alpha_bar,
                                         const std::vector<double>& beta_bar, double eps);

struct TraceRow {
    std::size_t k = 0;
    double objective = 0.0;
    std::optional<double> psi;
    // 0.5 ||x_i^k - x_i^{k-1}||^2 per block.
    std::vector<double> step_delta;
    // Parameters of the iteration that produced x^k; empty on row 0.
    InertialParams params;
    double step_norm = 0.0;
    double seconds = 0.0;
    // Every L tested by backtracking, per block.
    std::vector<std::vector<double>> tested_lipschitz;
    std::size_t prox_inequality_checks = 0;
    std::size_t prox_inequality_violations = 0;
    // Largest lhs - rhs seen by the proximal inequality check.
    double prox_inequality_worst = -std::numeric_limits<double>::infinity();
};

struct SolverTrace {
    std::string problem;
    std::vector<ScheduleKind> schedules;
    // True when any block runs the dynamic schedule, which has no
    // convergence guarantee.
    bool heuristic = false;
    bool converged = false;
    // Free-form lines written into the CSV metadata.
    std::vector<std::string> notes;
    std::vector<TraceRow> rows;
};

class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, SolverTrace trace) : Error(what), trace_(std::move(trace)) {}
    const SolverTrace& trace() const noexcept { return trace_; }

private:
    SolverTrace trace_;
};

struct SolverState {
    BlockVector x_cur;
    // x^{k-1}; equal to x^0 before the first iteration.
    BlockVector x_prev;
    std::size_t k = 0;
    SolverOptions options;
    std::vector<BacktrackState> backtrack;
    std::vector<double> lambda_plus;
    SolverTrace trace;
    double elapsed = 0.0;
};

// Validates options against the problem and records row 0 of the trace.
SolverState make_solver_state(const Problem& problem, BlockVector x0, SolverOptions options);

// One sweep over the blocks in order. Block i extrapolates
// y = x_i + alpha (x_i - x_i^-) and z = x_i + beta (x_i - x_i^-), evaluates
// grad_i H at the point holding the already updated blocks < i, z for
// block i and the old blocks > i, and sets x_i^+ = prox_tau(y - grad / tau).
void ipalm_iterate(SolverState& state, const Problem& problem);

struct RunResult {
    SolverTrace trace;
    BlockVector solution;
};

RunResult run(const Problem& problem, const SolverOptions& options, std::uint64_t seed);
RunResult run(const Problem& problem, const SolverOptions& options, BlockVector x0);

// F(x_cur) + sum_i (delta_i / 2) ||x_cur_i - x_prev_i||^2.
double lyapunov_psi(const BlockVector& x_cur, const BlockVector& x_prev, const std::vector<double>& delta,
                    const Problem& problem);

// Trace CSV: '#'-prefixed metadata lines, then the header
// k,F,Psi,delta1,...,L1,...,tau1,...,alpha1,...,beta1,...,step_norm,seconds
// and one row per iteration with 17 significant digits. Absent values are empty.
void write_trace_csv(std::ostream& out, const SolverTrace& trace);
std::string trace_csv_header(std::size_t num_blocks);

}  // namespace ipalm
