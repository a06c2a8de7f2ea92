#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ipalm/config.hpp"
#include "ipalm/solver.hpp"

namespace ipalm {

enum class ProblemKind { Nmf, Bid, ConvLasso };

ProblemKind parse_problem_kind(const std::string& name);
std::string to_string(ProblemKind kind);

// Builds the problem from cfg.input, or from the synthetic desk instance
// (seeded by cfg.seed) when no input is given.
std::unique_ptr<Problem> make_problem(ProblemKind kind, const RunConfig& cfg);

// Solver options for a problem under cfg: schedules, Lipschitz mode with
// the problem's default, kernel step scale for bid.
SolverOptions solver_options(const Problem& problem, const RunConfig& cfg);

// Writes <out>/trace.csv and the problem's artifacts (factors, images,
// dictionary); returns the run.
RunResult run_and_save(const Problem& problem, const RunConfig& cfg);

struct SweepCell {
    ScheduleType type = ScheduleType::StaticNonconvex;
    double alpha_bar = 0.0;
    double beta_bar = 0.0;

    std::string label() const;
};

struct SweepRow {
    SweepCell cell;
    // F at each checkpoint; empty when the run ended before it.
    std::vector<std::optional<double>> values;
    std::size_t iterations = 0;
    double seconds = 0.0;
    std::string error;
};

struct SweepTable {
    std::vector<std::size_t> checkpoints;
    std::vector<SweepRow> rows;
};

std::vector<std::optional<double>> checkpoint_values(const SolverTrace& trace,
                                                     const std::vector<std::size_t>& checkpoints);

// Runs every cell for max(checkpoints) iterations from the same x0, at most
// `jobs` at a time. Rows come back in cell order regardless of scheduling.
SweepTable run_sweep(const Problem& problem, const RunConfig& base, const std::vector<SweepCell>& cells,
                     std::size_t jobs);

// schedule,K=100,K=500,...,iterations,time_s
void write_checkpoint_table(std::ostream& out, const SweepTable& table);

}  // namespace ipalm
