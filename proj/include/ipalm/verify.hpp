#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ipalm/block_model.hpp"
#include "ipalm/solver.hpp"

namespace ipalm {

struct CheckRecord {
    std::size_t trial = 0;
    bool ok = true;
    std::string detail;
};

struct CheckReport {
    std::string check;
    std::vector<CheckRecord> records;

    std::size_t violations() const;
    bool passed() const { return violations() == 0; }
    // check,trial,status,detail
    void write_csv(std::ostream& out) const;
};

// Random quadratic h with known L_h and sigma in {l1, box, nonneg, l0+nonneg}.
// Asserts the proximal inequality for every sigma and the convex tightening
// for the convex ones. Every fourth trial uses the s that minimizes the
// right-hand side.
CheckReport check_prox_inequality(std::size_t trials, std::uint64_t seed, double slack = 1e-9);

struct LemmaGrid {
    std::size_t points = 10000;
    std::vector<double> eps{0.0, 0.01, 0.1};
    double lambda_max = 10.0;
    std::uint64_t seed = 1;
};

// g = eps delta* and h >= eps delta* for (delta*, tau*) from the bounds,
// nonconvex and convex variants. Includes boundary points alpha = alpha_bar.
CheckReport check_lemma_gh(const LemmaGrid& grid);

// (eps / 2) * min delta over all blocks and rows of a static trace.
double c1_rho(const SolverTrace& trace);

// Psi(u^k) - Psi(u^{k+1}) >= rho1 ||u^{k+1} - u^k||^2 - slack for every
// step k, with Psi weighted by the delta the step was computed with.
// slack = abs_slack + rel_slack * |Psi(u^k)|. Heuristic traces are skipped.
CheckReport check_c1_descent(const SolverTrace& trace, double rho1, double abs_slack = 1e-8, double rel_slack = 0.0);

// Central differences of the smooth part along random unit directions in
// each block against the partial gradients. Tolerance is the looser of
// rel_tol * max(|fd|, |analytic|) and abs_tol.
CheckReport check_gradients(const Problem& problem, const BlockVector& x, std::uint64_t seed,
                            std::size_t directions = 20, double rel_tol = 1e-4, double abs_tol = 1e-7);

// Runs every check on the desk instances. When out_dir is nonempty one
// CSV per check is written there.
std::vector<CheckReport> run_verify_battery(std::uint64_t seed, const std::filesystem::path& out_dir = {});

}  // namespace ipalm
