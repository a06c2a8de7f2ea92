#include "ipalm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "ipalm/bid.hpp"
#include "ipalm/conv_lasso.hpp"
#include "ipalm/errors.hpp"
#include "ipalm/io.hpp"
#include "ipalm/nmf.hpp"
#include "ipalm/synthetic.hpp"

namespace ipalm {

ProblemKind parse_problem_kind(const std::string& name) {
    if (name == "nmf") return ProblemKind::Nmf;
    if (name == "bid") return ProblemKind::Bid;
    if (name == "convlasso") return ProblemKind::ConvLasso;
    throw ParameterError("unknown problem '" + name + "' (expected nmf, bid or convlasso)");
}

std::string to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::Nmf: return "nmf";
        case ProblemKind::Bid: return "bid";
        case ProblemKind::ConvLasso: return "convlasso";
    }
    return "?";
}

namespace {

// Image size of PGM-directory NMF data, for the basis dump.
struct NmfSource {
    RowMatrix a;
    std::size_t height = 0;
    std::size_t width = 0;
};

NmfSource nmf_source(const RunConfig& cfg) {
    if (cfg.input.empty()) return {synth_nmf(20, 30, 3, 2, cfg.seed).a, 0, 0};
    if (std::filesystem::is_directory(cfg.input)) {
        ImageColumns cols = load_pgm_directory(cfg.input);
        return {std::move(cols.data), cols.height, cols.width};
    }
    return {read_csv_matrix(cfg.input), 0, 0};
}

}  // namespace

std::unique_ptr<Problem> make_problem(ProblemKind kind, const RunConfig& cfg) {
    cfg.validate();
    switch (kind) {
        case ProblemKind::Nmf: {
            RowMatrix a = nmf_source(cfg).a;
            const std::size_t s = sparsity_from_percent(static_cast<std::size_t>(a.rows()), cfg.s_percent);
            return std::make_unique<NmfProblem>(std::move(a), cfg.rank, s);
        }
        case ProblemKind::Bid: {
            RowMatrix f = cfg.input.empty() ? synth_bid(64, 7, cfg.seed).blurred : read_image(cfg.input);
            BidParams params;
            if (cfg.lambda >= 0.0) params.lambda = cfg.lambda;
            params.theta = cfg.theta;
            params.kernel_rows = params.kernel_cols = cfg.kernel_size;
            if (cfg.kernel_step_scale) params.kernel_step_scale = *cfg.kernel_step_scale;
            return std::make_unique<BidProblem>(std::move(f), params);
        }
        case ProblemKind::ConvLasso: {
            RowMatrix f = cfg.input.empty() ? synth_texture_image(32, cfg.seed) : read_image(cfg.input);
            ConvLassoParams params;
            params.num_filters = cfg.filters;
            params.filter_size = cfg.filter_size;
            if (cfg.lambda >= 0.0) params.lambda = cfg.lambda;
            params.sigma = cfg.sigma;
            return std::make_unique<ConvLassoProblem>(std::move(f), params);
        }
    }
    throw ParameterError("unknown problem kind");
}

SolverOptions solver_options(const Problem& problem, const RunConfig& cfg) {
    cfg.validate();
    SolverOptions opts;
    opts.schedules = make_schedules(problem, cfg.schedule, {cfg.alpha_bar}, {cfg.beta_bar}, cfg.epsilon);
    opts.delta_rule = cfg.delta_rule;
    opts.max_iter = cfg.iters;
    opts.tol = cfg.tol;
    opts.backtrack = cfg.backtrack;
    if (cfg.lipschitz) {
        opts.lipschitz_mode = *cfg.lipschitz;
    } else {
        const bool has_exact = problem.lipschitz(0, problem.initial_point(cfg.seed)).has_value();
        opts.lipschitz_mode = has_exact ? LipschitzMode::Exact : LipschitzMode::Backtrack;
    }
    if (const auto* bid = dynamic_cast<const BidProblem*>(&problem)) opts.tau_scale = bid->tau_scale();
    return opts;
}

RunResult run_and_save(const Problem& problem, const RunConfig& cfg) {
    const SolverOptions opts = solver_options(problem, cfg);
    RunResult res = run(problem, opts, cfg.seed);
    if (const auto* conv = dynamic_cast<const ConvLassoProblem*>(&problem)) {
        std::ostringstream note;
        note << "objective includes the fixed-slot constant lambda*||f||_1 = "
             << conv->params().lambda * conv->image().cwiseAbs().sum();
        res.trace.notes.push_back(note.str());
    }
    res.trace.notes.push_back("lipschitz=" + to_string(opts.lipschitz_mode) + " delta_rule=" + to_string(opts.delta_rule) +
                              " seed=" + std::to_string(cfg.seed));

    std::filesystem::create_directories(cfg.out);
    {
        std::ofstream out(cfg.out / "trace.csv");
        if (!out) throw DataError("cannot write " + (cfg.out / "trace.csv").string());
        write_trace_csv(out, res.trace);
    }
    const BlockVector& x = res.solution;
    if (dynamic_cast<const NmfProblem*>(&problem)) {
        write_csv_matrix(cfg.out / "B.csv", x[0].matrix());
        write_csv_matrix(cfg.out / "C.csv", x[1].matrix());
        if (!cfg.input.empty() && std::filesystem::is_directory(cfg.input)) {
            const NmfSource src = nmf_source(cfg);
            write_basis_images(cfg.out / "basis", x[0].matrix(), src.height, src.width);
        }
    } else if (dynamic_cast<const BidProblem*>(&problem)) {
        write_pgm(cfg.out / "image.pgm", x[0].matrix());
        write_pgm_max_scaled(cfg.out / "kernel.pgm", x[1].matrix());
        write_csv_matrix(cfg.out / "kernel.csv", x[1].matrix());
    } else if (const auto* conv = dynamic_cast<const ConvLassoProblem*>(&problem)) {
        conv->write_dictionary(cfg.out / "dictionary.pgm", x);
        conv->write_sparsity_report(cfg.out / "sparsity.csv", x);
    }
    return res;
}

std::string SweepCell::label() const {
    if (type == ScheduleType::Dynamic) return "dynamic";
    std::ostringstream out;
    out << to_string(type) << " alpha=" << alpha_bar << " beta=" << beta_bar;
    return out.str();
}

std::vector<std::optional<double>> checkpoint_values(const SolverTrace& trace,
                                                     const std::vector<std::size_t>& checkpoints) {
    std::vector<std::optional<double>> out;
    out.reserve(checkpoints.size());
    for (std::size_t k : checkpoints) {
        if (k < trace.rows.size()) {
            out.emplace_back(trace.rows[k].objective);
        } else {
            out.emplace_back(std::nullopt);
        }
    }
    return out;
}

SweepTable run_sweep(const Problem& problem, const RunConfig& base, const std::vector<SweepCell>& cells,
                     std::size_t jobs) {
    base.validate();
    if (jobs == 0) throw ParameterError("jobs must be at least 1");
    SweepTable table;
    table.checkpoints = base.checkpoints;
    std::sort(table.checkpoints.begin(), table.checkpoints.end());
    table.rows.resize(cells.size());

    RunConfig cfg = base;
    cfg.iters = table.checkpoints.back();
    const BlockVector x0 = problem.initial_point(base.seed);

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            SweepRow& row = table.rows[i];
            row.cell = cells[i];
            try {
                RunConfig c = cfg;
                c.schedule = cells[i].type;
                c.alpha_bar = cells[i].alpha_bar;
                c.beta_bar = cells[i].beta_bar;
                const RunResult res = run(problem, solver_options(problem, c), x0);
                row.values = checkpoint_values(res.trace, table.checkpoints);
                row.iterations = res.trace.rows.size() - 1;
                row.seconds = res.trace.rows.back().seconds;
            } catch (const DivergenceError& e) {
                row.values = checkpoint_values(e.trace(), table.checkpoints);
                row.iterations = e.trace().rows.size() - 1;
                row.error = e.what();
            } catch (const Error& e) {
                row.values.assign(table.checkpoints.size(), std::nullopt);
                row.error = e.what();
            }
        }
    };
    const std::size_t n_threads = std::min(jobs, std::max<std::size_t>(cells.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return table;
}

void write_checkpoint_table(std::ostream& out, const SweepTable& table) {
    out << "schedule";
    for (std::size_t k : table.checkpoints) out << ",K=" << k;
    out << ",iterations,time_s,error\n";
    const auto old = out.precision(17);
    for (const auto& row : table.rows) {
        out << '"' << row.cell.label() << '"';
        for (const auto& v : row.values) {
            out << ',';
            if (v) out << *v;
        }
        out << ',' << row.iterations << ',' << row.seconds << ",\"" << row.error << "\"\n";
    }
    out.precision(old);
}

}  // namespace ipalm
