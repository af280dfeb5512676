#include "monodrift/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "monodrift/paths_io.hpp"

namespace monodrift {

ConfigError::ConfigError(std::string key, const std::string& message)
    : std::runtime_error(key + ": " + message), key_(std::move(key)) {}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(std::string_view key, std::string_view text) {
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (t.empty() || used != t.size() || !std::isfinite(v)) {
        throw ConfigError(std::string(key), "expected a finite number, got '" + t + "'");
    }
    return v;
}

template <class Int>
Int to_int(std::string_view key, std::string_view text) {
    const std::string t = trim(text);
    Int v{};
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ConfigError(std::string(key), "expected an integer, got '" + t + "'");
    }
    return v;
}

bool to_bool(std::string_view key, std::string_view text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError(std::string(key), "expected true or false, got '" + t + "'");
}

void require(bool ok, std::string_view key, const std::string& message) {
    if (!ok) throw ConfigError(std::string(key), message);
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "kernel", "l0",    "r0",          "eps",      "t0",      "m_threshold", "z_grid_points",
        "theory_strict", "model", "n_paths", "n_steps", "T",       "repetitions", "eta_grid",
        "lh_grid", "seed", "mode",        "threads",  "n_curves", "out",        "verbosity"};
    return keys;
}

std::vector<double> parse_grid_spec(std::string_view spec) {
    const std::string s = trim(spec);
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw std::invalid_argument("grid spec must be start:step:count");
        const double start = to_double("grid", parts[0]);
        const double step = to_double("grid", parts[1]);
        const auto count = to_int<std::size_t>("grid", parts[2]);
        out = arithmetic_grid(start, step, count);
    } else {
        std::stringstream ss(s);
        for (std::string p; std::getline(ss, p, ',');) out.push_back(to_double("grid", p));
    }
    if (out.empty()) throw std::invalid_argument("grid is empty");
    for (double v : out) {
        if (!(v > 0.0)) throw std::invalid_argument("grid values must be positive");
    }
    return out;
}

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value) {
    const std::string v = trim(value);
    if (key == "kernel") {
        try {
            parse_kernel_family(v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("kernel", e.what());
        }
        cfg.kernel = v;
    } else if (key == "l0") {
        cfg.l0 = to_double(key, v);
    } else if (key == "r0") {
        cfg.r0 = to_double(key, v);
    } else if (key == "eps") {
        cfg.eps = to_double(key, v);
        require(cfg.eps > 0.0, key, "must be positive");
    } else if (key == "t0") {
        cfg.t0 = to_double(key, v);
        require(cfg.t0 >= 0.0, key, "must be nonnegative");
    } else if (key == "m_threshold") {
        cfg.m_threshold = to_double(key, v);
        require(cfg.m_threshold > 0.0 && cfg.m_threshold < 1.0, key, "must lie in (0, 1)");
    } else if (key == "z_grid_points") {
        cfg.z_grid_points = to_int<std::size_t>(key, v);
        require(cfg.z_grid_points >= 50, key, "must be at least 50");
    } else if (key == "theory_strict") {
        cfg.theory_strict = to_bool(key, v);
    } else if (key == "model") {
        try {
            builtin_model(v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("model", e.what());
        }
        cfg.model = v;
    } else if (key == "n_paths") {
        cfg.n_paths = to_int<std::size_t>(key, v);
        require(cfg.n_paths >= 1, key, "must be at least 1");
    } else if (key == "n_steps") {
        cfg.n_steps = to_int<std::size_t>(key, v);
        require(cfg.n_steps >= 1, key, "must be at least 1");
    } else if (key == "T") {
        cfg.T = to_double(key, v);
        require(cfg.T > 0.0, key, "must be positive");
    } else if (key == "repetitions") {
        cfg.repetitions = to_int<std::size_t>(key, v);
        require(cfg.repetitions >= 1, key, "must be at least 1");
    } else if (key == "eta_grid" || key == "lh_grid") {
        try {
            parse_grid_spec(v);
        } catch (const std::exception& e) {
            throw ConfigError(std::string(key), e.what());
        }
        (key == "eta_grid" ? cfg.eta_grid : cfg.lh_grid) = v;
    } else if (key == "seed") {
        cfg.seed = to_int<std::uint64_t>(key, v);
    } else if (key == "mode") {
        try {
            parse_monotone_mode(v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("mode", e.what());
        }
        cfg.mode = v;
    } else if (key == "threads") {
        cfg.threads = to_int<std::size_t>(key, v);
    } else if (key == "n_curves") {
        cfg.n_curves = to_int<std::size_t>(key, v);
    } else if (key == "out") {
        require(!v.empty(), key, "must not be empty");
        cfg.out = v;
    } else if (key == "verbosity") {
        cfg.verbosity = to_int<int>(key, v);
        require(cfg.verbosity >= 0 && cfg.verbosity <= 2, key, "must be 0, 1 or 2");
    } else {
        throw ConfigError(std::string(key), "unknown configuration key");
    }
}

std::string get_config_value(const RunConfig& cfg, std::string_view key) {
    if (key == "kernel") return cfg.kernel;
    if (key == "l0") return format_double(cfg.l0);
    if (key == "r0") return format_double(cfg.r0);
    if (key == "eps") return format_double(cfg.eps);
    if (key == "t0") return format_double(cfg.t0);
    if (key == "m_threshold") return format_double(cfg.m_threshold);
    if (key == "z_grid_points") return std::to_string(cfg.z_grid_points);
    if (key == "theory_strict") return cfg.theory_strict ? "true" : "false";
    if (key == "model") return cfg.model;
    if (key == "n_paths") return std::to_string(cfg.n_paths);
    if (key == "n_steps") return std::to_string(cfg.n_steps);
    if (key == "T") return format_double(cfg.T);
    if (key == "repetitions") return std::to_string(cfg.repetitions);
    if (key == "eta_grid") return cfg.eta_grid;
    if (key == "lh_grid") return cfg.lh_grid;
    if (key == "seed") return std::to_string(cfg.seed);
    if (key == "mode") return cfg.mode;
    if (key == "threads") return std::to_string(cfg.threads);
    if (key == "n_curves") return std::to_string(cfg.n_curves);
    if (key == "out") return cfg.out;
    if (key == "verbosity") return std::to_string(cfg.verbosity);
    throw ConfigError(std::string(key), "unknown configuration key");
}

RunConfig parse_config(std::string_view text, RunConfig base) {
    std::istringstream in{std::string(text)};
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        }
        set_config_value(base, trim(std::string_view(line).substr(0, eq)),
                         std::string_view(line).substr(eq + 1));
    }
    return base;
}

RunConfig load_config_file(const std::filesystem::path& file, RunConfig base) {
    std::ifstream in(file);
    if (!in) throw ConfigError("config", "cannot read '" + file.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

std::string dump_config(const RunConfig& cfg) {
    std::string out;
    for (const auto& key : config_keys()) out += key + " = " + get_config_value(cfg, key) + "\n";
    return out;
}

void validate_config(const RunConfig& cfg) {
    require(cfg.l0 < cfg.r0, "r0", "must exceed l0");
    require(cfg.t0 < cfg.T, "t0", "must be smaller than T");
    require(cfg.n_curves <= cfg.repetitions, "n_curves", "must not exceed repetitions");
}

EstimatorConfig estimator_config(const RunConfig& cfg) {
    EstimatorConfig e;
    e.l0 = cfg.l0;
    e.r0 = cfg.r0;
    e.eps = cfg.eps;
    e.t0 = cfg.t0;
    e.m_threshold = cfg.m_threshold;
    e.kernel = Kernel(parse_kernel_family(cfg.kernel));
    e.z_grid_points = cfg.z_grid_points;
    e.theory_strict = cfg.theory_strict;
    return e;
}

ExperimentSpec experiment_spec(const RunConfig& cfg) {
    ExperimentSpec s;
    s.model = builtin_model(cfg.model);
    s.n_paths = cfg.n_paths;
    s.n_steps = cfg.n_steps;
    s.horizon = cfg.T;
    s.repetitions = cfg.repetitions;
    s.eta_grid = parse_grid_spec(cfg.eta_grid);
    s.lh_grid = square_grid(parse_grid_spec(cfg.lh_grid));
    s.cfg = estimator_config(cfg);
    s.seed = cfg.seed;
    s.mode = parse_monotone_mode(cfg.mode);
    s.threads = cfg.threads;
    return s;
}

}  // namespace monodrift
