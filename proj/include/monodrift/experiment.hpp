#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "monodrift/curve.hpp"
#include "monodrift/monotone.hpp"
#include "monodrift/nadaraya.hpp"
#include "monodrift/sde.hpp"

namespace monodrift {

/// {start + i * step ; i = 0..count-1}.
std::vector<double> arithmetic_grid(double start, double step, std::size_t count);

/// Bandwidth set {0.05 k ; k = 1..35} of the reference simulation study.
std::vector<double> default_bandwidth_set();

struct ExperimentSpec {
    SdeModel model = builtin_model("A");
    std::size_t n_paths = 100;
    std::size_t n_steps = 50;
    double horizon = 5.0;
    std::size_t repetitions = 100;
    std::vector<double> eta_grid = default_bandwidth_set();
    std::vector<BandwidthPair> lh_grid = square_grid(default_bandwidth_set());
    EstimatorConfig cfg{};
    std::uint64_t seed = 1;
    MonotoneMode mode = MonotoneMode::Oracle;
    /// Worker threads; 0 uses the hardware concurrency.
    std::size_t threads = 0;

    void validate() const;
};

struct RepetitionResult {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    double selected_eta = 0.0;
    BandwidthPair selected_lh{};
    double err_monotone = 0.0;
    double err_nw = 0.0;
};

struct ExperimentReport {
    std::vector<RepetitionResult> per_rep;
    std::size_t failed = 0;
    double mean_monotone = 0.0;
    double sd_monotone = 0.0;
    double mean_nw = 0.0;
    double sd_nw = 0.0;
    /// false when fewer than two repetitions succeeded; the sds are then 0.
    bool sd_defined = false;
};

class ExperimentFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Trapezoid rule of |estimate - truth| on the curve grid, which must span
/// the target interval.
double integrated_l1_error(const CurveOnGrid& estimate, const std::function<double(double)>& truth,
                           Interval target);

/// Estimates of one repetition tabulated on the 201-point I_0 grid.
struct RepetitionCurves {
    CurveOnGrid monotone;
    CurveOnGrid nadaraya_watson;
};

/// Simulate, select eta by LooCV, build the pilot on I_{2 eps}, select
/// (ell, h), and score both estimators on I_0. Seed is spec.seed + index.
RepetitionResult run_repetition(const ExperimentSpec& spec, std::size_t index,
                                RepetitionCurves* curves = nullptr);

/// Aggregates summary statistics over the successful rows.
void summarize(ExperimentReport& report);

/// Runs every repetition on a worker pool; the report does not depend on the
/// number of workers. Throws ExperimentFailed if more than 10% fail.
ExperimentReport run_experiment(const ExperimentSpec& spec);

std::string report_to_json(const ExperimentSpec& spec, const ExperimentReport& report);
std::string table1_csv(const ExperimentSpec& spec, const ExperimentReport& report);

/// Writes fig_<k>.csv (x, a(x), estimate) for the first n_curves repetitions
/// and a gnuplot script figures.gp overlaying them. Returns written files.
std::vector<std::filesystem::path> emit_figure_data(const ExperimentSpec& spec,
                                                    std::size_t n_curves,
                                                    const std::filesystem::path& out_dir);

}  // namespace monodrift
