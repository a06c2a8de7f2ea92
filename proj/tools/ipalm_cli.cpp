#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ipalm/config.hpp"
#include "ipalm/errors.hpp"
#include "ipalm/experiment.hpp"
#include "ipalm/synthetic.hpp"
#include "ipalm/verify.hpp"

using namespace ipalm;

namespace {

// Flags are collected as config assignments and applied on top of --config,
// so both routes share one parser.
struct Overrides {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> values;

    void flag_value(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        app->add_option_function<std::string>(
            flag, [this, key](const std::string& v) { values.emplace_back(key, v); }, help);
    }

    RunConfig resolve() const {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        for (const auto& [k, v] : values) apply_config_value(cfg, k, v);
        cfg.validate();
        return cfg;
    }
};

void add_solver_flags(CLI::App* app, Overrides& o) {
    app->add_option("--config", o.config_path, "key=value configuration file (flags override it)");
    o.flag_value(app, "--schedule", "schedule", "static-nc | static-c | dynamic");
    o.flag_value(app, "--alpha-bar", "alpha_bar", "static inertia alpha");
    o.flag_value(app, "--beta-bar", "beta_bar", "static inertia beta");
    o.flag_value(app, "--epsilon", "epsilon", "descent margin in the step rule");
    o.flag_value(app, "--delta-rule", "delta_rule", "instantaneous | bounded");
    o.flag_value(app, "--iters", "iters", "iteration budget");
    o.flag_value(app, "--tol", "tol", "relative step-norm tolerance");
    o.flag_value(app, "--seed", "seed", "random seed");
    app->add_flag_callback("--backtrack", [&o] { o.values.emplace_back("lipschitz", "backtrack"); },
                           "estimate Lipschitz moduli by backtracking");
    app->add_flag_callback("--exact-lipschitz", [&o] { o.values.emplace_back("lipschitz", "exact"); },
                           "use exact Lipschitz moduli (nmf only)");
    o.flag_value(app, "--kernel-step-scale", "kernel_step_scale", "tau multiplier on the bid kernel block");
    o.flag_value(app, "--out", "out", "output directory");
    o.flag_value(app, "--input", "input", "data file or PGM directory");
    o.flag_value(app, "--rank", "rank", "nmf rank r");
    o.flag_value(app, "--s-percent", "s_percent", "nmf column sparsity, percent of m");
    o.flag_value(app, "--lambda", "lambda", "bid data weight / convlasso l1 weight");
    o.flag_value(app, "--theta", "theta", "bid log-penalty shape");
    o.flag_value(app, "--kernel-size", "kernel_size", "bid kernel side (odd)");
    o.flag_value(app, "--filters", "filters", "convlasso filter count incl. the fixed one");
    o.flag_value(app, "--filter-size", "filter_size", "convlasso filter side (odd)");
    o.flag_value(app, "--sigma", "sigma", "convlasso low-pass std dev");
}

int run_single(ProblemKind kind, const Overrides& o) {
    const RunConfig cfg = o.resolve();
    const auto problem = make_problem(kind, cfg);
    const RunResult res = run_and_save(*problem, cfg);
    const auto& last = res.trace.rows.back();
    std::cout.precision(10);
    std::cout << to_string(kind) << ": " << last.k << " iterations, F=" << last.objective
              << (res.trace.converged ? " (converged)" : "") << (res.trace.heuristic ? " [heuristic mode]" : "")
              << "\ntrace written to " << (cfg.out / "trace.csv").string() << '\n';
    return EXIT_SUCCESS;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(std::stod(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"iPALM solver and experiments"};
    app.require_subcommand(1);
    app.footer("Configuration keys (for --config files):\n" + config_keys_help());

    Overrides nmf_o, bid_o, conv_o, sweep_o;
    auto* nmf = app.add_subcommand("nmf", "sparse nonnegative matrix factorization");
    add_solver_flags(nmf, nmf_o);
    auto* bid = app.add_subcommand("bid", "blind image deconvolution");
    add_solver_flags(bid, bid_o);
    auto* conv = app.add_subcommand("convlasso", "convolutional LASSO dictionary learning");
    add_solver_flags(conv, conv_o);

    auto* sweep = app.add_subcommand("sweep", "objective at checkpoints over a grid of inertial settings");
    add_solver_flags(sweep, sweep_o);
    std::string sweep_problem = "nmf";
    std::string sweep_values = "0,0.2,0.4";
    bool sweep_dynamic = false;
    sweep->add_option("--problem", sweep_problem, "nmf | bid | convlasso")->capture_default_str();
    sweep->add_option("--values", sweep_values, "alpha = beta values, comma-separated")->capture_default_str();
    sweep->add_flag("--dynamic", sweep_dynamic, "add a dynamic-schedule row");
    sweep_o.flag_value(sweep, "--jobs", "jobs", "concurrent cells");
    sweep_o.flag_value(sweep, "--checkpoints", "checkpoints", "comma-separated iteration counts");

    auto* verify = app.add_subcommand("verify", "run the numerical verification battery");
    std::uint64_t verify_seed = 1;
    std::string verify_out = "verify";
    verify->add_option("--seed", verify_seed, "random seed")->capture_default_str();
    verify->add_option("--out", verify_out, "report directory")->capture_default_str();

    auto* synth = app.add_subcommand("synth", "write the synthetic desk instances with ground truth");
    std::uint64_t synth_seed = 1;
    std::string synth_out = "synthetic";
    synth->add_option("--seed", synth_seed, "random seed")->capture_default_str();
    synth->add_option("--out", synth_out, "output directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (nmf->parsed()) return run_single(ProblemKind::Nmf, nmf_o);
        if (bid->parsed()) return run_single(ProblemKind::Bid, bid_o);
        if (conv->parsed()) return run_single(ProblemKind::ConvLasso, conv_o);
        if (sweep->parsed()) {
            const RunConfig cfg = sweep_o.resolve();
            const auto problem = make_problem(parse_problem_kind(sweep_problem), cfg);
            std::vector<SweepCell> cells;
            for (double v : parse_list(sweep_values)) cells.push_back({cfg.schedule, v, v});
            if (sweep_dynamic) cells.push_back({ScheduleType::Dynamic, 0.0, 0.0});
            const SweepTable table = run_sweep(*problem, cfg, cells, cfg.jobs);
            std::filesystem::create_directories(cfg.out);
            std::ofstream out(cfg.out / "sweep.csv");
            write_checkpoint_table(out, table);
            write_checkpoint_table(std::cout, table);
            return EXIT_SUCCESS;
        }
        if (verify->parsed()) {
            const auto reports = run_verify_battery(verify_seed, verify_out);
            bool ok = true;
            for (const auto& r : reports) {
                std::cout << (r.passed() ? "PASS " : "FAIL ") << r.check << " (" << r.records.size() << " trials, "
                          << r.violations() << " violations)\n";
                ok = ok && r.passed();
            }
            return ok ? EXIT_SUCCESS : EXIT_FAILURE;
        }
        if (synth->parsed()) {
            write_synthetic_instances(synth_out, synth_seed);
            std::cout << "synthetic instances written to " << synth_out << '\n';
            return EXIT_SUCCESS;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return EXIT_FAILURE;
}
