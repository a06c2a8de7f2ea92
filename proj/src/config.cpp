#include "ipalm/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ipalm/errors.hpp"

namespace ipalm {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError(key + ": not a number: '" + v + "'", 0);
    return out;
}

std::size_t to_size(const std::string& key, const std::string& v) {
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ConfigError(key + ": not a nonnegative integer: '" + v + "'", 0);
    }
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

struct Key {
    Setter set;
    const char* help;
};

const std::map<std::string, Key>& keys() {
    static const std::map<std::string, Key> table{
        {"schedule", {[](RunConfig& c, const std::string&, const std::string& v) { c.schedule = parse_schedule_type(v); },
                      "static-nc | static-c | dynamic (default static-nc)"}},
        {"alpha_bar", {[](RunConfig& c, const std::string& k, const std::string& v) { c.alpha_bar = to_double(k, v); },
                       "static inertia alpha (default 0)"}},
        {"beta_bar", {[](RunConfig& c, const std::string& k, const std::string& v) { c.beta_bar = to_double(k, v); },
                      "static inertia beta (default 0)"}},
        {"epsilon", {[](RunConfig& c, const std::string& k, const std::string& v) { c.epsilon = to_double(k, v); },
                     "descent margin in the step rule (default 0)"}},
        {"delta_rule", {[](RunConfig& c, const std::string& k, const std::string& v) {
                            if (v == "instantaneous") {
                                c.delta_rule = DeltaRule::Instantaneous;
                            } else if (v == "bounded") {
                                c.delta_rule = DeltaRule::Bounded;
                            } else {
                                throw ConfigError(k + ": expected instantaneous or bounded", 0);
                            }
                        },
                        "instantaneous | bounded (default instantaneous)"}},
        {"iters", {[](RunConfig& c, const std::string& k, const std::string& v) { c.iters = to_size(k, v); },
                   "iteration budget (default 1000)"}},
        {"tol", {[](RunConfig& c, const std::string& k, const std::string& v) { c.tol = to_double(k, v); },
                 "relative step-norm tolerance (default 1e-9)"}},
        {"seed", {[](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_size(k, v); },
                  "random seed (default 1)"}},
        {"lipschitz", {[](RunConfig& c, const std::string& k, const std::string& v) {
                           if (v == "exact") {
                               c.lipschitz = LipschitzMode::Exact;
                           } else if (v == "backtrack") {
                               c.lipschitz = LipschitzMode::Backtrack;
                           } else {
                               throw ConfigError(k + ": expected exact or backtrack", 0);
                           }
                       },
                       "exact | backtrack (default exact for nmf, backtrack otherwise)"}},
        {"backtrack_initial", {[](RunConfig& c, const std::string& k, const std::string& v) {
                                   c.backtrack.lipschitz = to_double(k, v);
                               },
                               "first backtracking estimate (default 1)"}},
        {"backtrack_growth", {[](RunConfig& c, const std::string& k, const std::string& v) {
                                  c.backtrack.growth = to_double(k, v);
                              },
                              "backtracking growth factor (default 2)"}},
        {"backtrack_shrink", {[](RunConfig& c, const std::string& k, const std::string& v) {
                                  c.backtrack.shrink = to_double(k, v);
                              },
                              "warm-start shrink factor (default 0.5)"}},
        {"backtrack_max_rounds", {[](RunConfig& c, const std::string& k, const std::string& v) {
                                      c.backtrack.max_rounds = to_size(k, v);
                                  },
                                  "growth steps per call (default 60)"}},
        {"kernel_step_scale", {[](RunConfig& c, const std::string& k, const std::string& v) {
                                   c.kernel_step_scale = to_double(k, v);
                               },
                               "tau multiplier on the bid kernel block (default 5)"}},
        {"out", {[](RunConfig& c, const std::string&, const std::string& v) { c.out = v; },
                 "output directory (default out)"}},
        {"jobs", {[](RunConfig& c, const std::string& k, const std::string& v) { c.jobs = to_size(k, v); },
                  "concurrent sweep cells (default 1)"}},
        {"checkpoints", {[](RunConfig& c, const std::string& k, const std::string& v) {
                             c.checkpoints.clear();
                             std::stringstream in(v);
                             std::string item;
                             while (std::getline(in, item, ',')) c.checkpoints.push_back(to_size(k, trim(item)));
                         },
                         "comma-separated sweep checkpoints (default 100,500,1000,5000)"}},
        {"input", {[](RunConfig& c, const std::string&, const std::string& v) { c.input = v; },
                   "data file or PGM directory (default: synthetic instance)"}},
        {"rank", {[](RunConfig& c, const std::string& k, const std::string& v) { c.rank = to_size(k, v); },
                  "nmf rank r (default 3)"}},
        {"s_percent", {[](RunConfig& c, const std::string& k, const std::string& v) { c.s_percent = to_double(k, v); },
                       "nmf column sparsity in percent of m (default 10)"}},
        {"lambda", {[](RunConfig& c, const std::string& k, const std::string& v) { c.lambda = to_double(k, v); },
                    "data weight (bid, default 1e6) or l1 weight (convlasso, default 0.2)"}},
        {"theta", {[](RunConfig& c, const std::string& k, const std::string& v) { c.theta = to_double(k, v); },
                   "bid log-penalty shape (default 1e4)"}},
        {"kernel_size", {[](RunConfig& c, const std::string& k, const std::string& v) { c.kernel_size = to_size(k, v); },
                         "bid kernel side, odd (default 31)"}},
        {"filters", {[](RunConfig& c, const std::string& k, const std::string& v) { c.filters = to_size(k, v); },
                     "convlasso filter count incl. the fixed one (default 81)"}},
        {"filter_size", {[](RunConfig& c, const std::string& k, const std::string& v) { c.filter_size = to_size(k, v); },
                         "convlasso filter side, odd (default 9)"}},
        {"sigma", {[](RunConfig& c, const std::string& k, const std::string& v) { c.sigma = to_double(k, v); },
                   "convlasso low-pass std dev, 0 = filter_size/4 (default 0)"}},
    };
    return table;
}

}  // namespace

void RunConfig::validate() const {
    if (iters == 0) throw ParameterError("iters must be at least 1");
    if (!(tol >= 0.0)) throw ParameterError("tol must be nonnegative");
    if (jobs == 0) throw ParameterError("jobs must be at least 1");
    if (checkpoints.empty()) throw ParameterError("checkpoints must not be empty");
    if (kernel_step_scale && !(*kernel_step_scale >= 1.0)) throw ParameterError("kernel_step_scale must be >= 1");
    if (!(s_percent >= 0.0 && s_percent <= 100.0)) throw ParameterError("s_percent must be in [0, 100]");
    if (rank == 0) throw ParameterError("rank must be at least 1");
    ipalm::validate(backtrack);
}

std::string config_keys_help() {
    std::ostringstream out;
    for (const auto& [name, key] : keys()) out << "  " << name << "  " << key.help << '\n';
    return out.str();
}

void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
    const auto it = keys().find(key);
    if (it == keys().end()) throw ConfigError("unknown key '" + key + "'", 0);
    it->second.set(cfg, key, value);
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value", static_cast<int>(number));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", static_cast<int>(number));
        try {
            apply_config_value(cfg, key, value);
        } catch (const Error& e) {
            throw ConfigError(e.what(), static_cast<int>(number));
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

}  // namespace ipalm
