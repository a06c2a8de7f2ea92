#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ipalm/lipschitz.hpp"
#include "ipalm/schedules.hpp"
#include "ipalm/solver.hpp"

namespace ipalm {

struct RunConfig {
    ScheduleType schedule = ScheduleType::StaticNonconvex;
    double alpha_bar = 0.0;
    double beta_bar = 0.0;
    double epsilon = 0.0;
    DeltaRule delta_rule = DeltaRule::Instantaneous;
    std::size_t iters = 1000;
    double tol = 1e-9;
    std::uint64_t seed = 1;
    // Unset: exact for nmf, backtracking for bid and convlasso.
    std::optional<LipschitzMode> lipschitz;
    BacktrackState backtrack;
    // Problem preset default when unset (5 for bid, 1 otherwise).
    std::optional<double> kernel_step_scale;
    std::filesystem::path out = "out";
    std::size_t jobs = 1;
    std::vector<std::size_t> checkpoints{100, 500, 1000, 5000};

    // Problem data; empty selects the synthetic desk instance.
    std::filesystem::path input;
    std::size_t rank = 3;
    double s_percent = 10.0;
    double lambda = -1.0;  // < 0: problem default
    double theta = 1e4;
    std::size_t kernel_size = 31;
    std::size_t filters = 81;
    std::size_t filter_size = 9;
    double sigma = 0.0;

    void validate() const;
};

// Every key with its default and meaning, for --help.
std::string config_keys_help();

// key=value per line; '#' starts a comment; blank lines ignored.
// Unknown keys and malformed lines raise ConfigError with the line number.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);

// Applies one key=value assignment; throws ConfigError (line 0) on failure.
void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace ipalm
