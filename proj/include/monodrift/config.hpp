#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "monodrift/experiment.hpp"
#include "monodrift/nadaraya.hpp"

namespace monodrift {

/// Every tunable of the command line tool. Text form is one `key = value`
/// per line; '#' starts a comment.
struct RunConfig {
    std::string kernel = "gaussian";
    double l0 = -1.0;
    double r0 = 1.0;
    double eps = 0.01;
    double t0 = 0.5;
    double m_threshold = 0.05;
    std::size_t z_grid_points = 200;
    bool theory_strict = false;

    std::string model = "A";
    std::size_t n_paths = 100;
    std::size_t n_steps = 50;
    double T = 5.0;
    std::size_t repetitions = 100;
    std::string eta_grid = "0.05:0.05:35";
    std::string lh_grid = "0.05:0.05:35";
    std::uint64_t seed = 1;
    std::string mode = "oracle";
    std::size_t threads = 0;
    std::size_t n_curves = 5;

    std::string out = ".";
    int verbosity = 1;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message);
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Keys accepted by set_config_value, in dump order.
const std::vector<std::string>& config_keys();

/// Parses and validates one value; throws ConfigError naming the key.
void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);
std::string get_config_value(const RunConfig& cfg, std::string_view key);

RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config_file(const std::filesystem::path& file, RunConfig base = {});
std::string dump_config(const RunConfig& cfg);

/// Cross-key checks (l0 < r0, t0 < T, ...).
void validate_config(const RunConfig& cfg);

/// "start:step:count" or a comma-separated list; all values positive.
std::vector<double> parse_grid_spec(std::string_view spec);

EstimatorConfig estimator_config(const RunConfig& cfg);
ExperimentSpec experiment_spec(const RunConfig& cfg);

}  // namespace monodrift
