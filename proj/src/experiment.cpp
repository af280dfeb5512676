#include "monodrift/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "monodrift/paths_io.hpp"
#include "monodrift/quadrature.hpp"

namespace monodrift {

std::vector<double> arithmetic_grid(double start, double step, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = start + step * static_cast<double>(i);
    return out;
}

std::vector<double> default_bandwidth_set() {
    std::vector<double> out(35);
    for (std::size_t k = 1; k <= 35; ++k) out[k - 1] = 0.05 * static_cast<double>(k);
    return out;
}

void ExperimentSpec::validate() const {
    if (!model.drift || !model.vol) throw std::invalid_argument("experiment model is incomplete");
    if (n_paths < 1 || n_steps < 1 || !(horizon > 0.0)) {
        throw std::invalid_argument("experiment needs n_paths >= 1, n_steps >= 1 and T > 0");
    }
    if (repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
    if (eta_grid.empty()) throw std::invalid_argument("eta grid is empty");
    if (lh_grid.empty()) throw std::invalid_argument("(ell, h) grid is empty");
    cfg.validate();
    if (!(cfg.t0 < horizon)) throw std::invalid_argument("t0 must be smaller than T");
}

double integrated_l1_error(const CurveOnGrid& estimate, const std::function<double(double)>& truth,
                           Interval target) {
    if (!estimate.spans(target)) {
        throw std::invalid_argument("estimate curve does not span the target interval");
    }
    std::vector<double> diff(estimate.size());
    for (std::size_t i = 0; i < estimate.size(); ++i) {
        diff[i] = std::abs(estimate[i] - truth(estimate.abscissa(i)));
    }
    return trapezoid(diff, estimate.step());
}

RepetitionResult run_repetition(const ExperimentSpec& spec, std::size_t index,
                                RepetitionCurves* curves) {
    RepetitionResult r;
    r.index = index;
    r.seed = spec.seed + index;
    try {
        const auto& cfg = spec.cfg;
        const auto paths =
            simulate_copies(spec.model, spec.n_paths, spec.n_steps, spec.horizon, r.seed);
        r.selected_eta = spec.eta_grid.size() == 1
                             ? spec.eta_grid.front()
                             : select_eta_loocv(paths, cfg, spec.eta_grid);

        MonotoneInput inp{nw_drift(paths, cfg, r.selected_eta), cfg,
                          spec.model.drift(cfg.i_eps().hi), spec.model.drift(cfg.i_eps().lo),
                          spec.model.slope_bound};
        r.selected_lh = spec.lh_grid.size() == 1
                            ? spec.lh_grid.front()
                            : select_lh_adaptive(inp, spec.lh_grid, spec.mode);

        const auto i0 = cfg.i0();
        auto mono = monotone_curve(inp, r.selected_lh, spec.mode, i0.lo, i0.hi, kSelectionPoints);
        auto nw = nw_drift_on(paths, cfg, r.selected_eta, i0.lo, i0.hi, kSelectionPoints);
        r.err_monotone = integrated_l1_error(mono, spec.model.drift, i0);
        r.err_nw = integrated_l1_error(nw, spec.model.drift, i0);
        r.ok = true;
        if (curves) *curves = {std::move(mono), std::move(nw)};
    } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
    }
    return r;
}

void summarize(ExperimentReport& report) {
    std::vector<double> mono, nw;
    report.failed = 0;
    for (const auto& r : report.per_rep) {
        if (!r.ok) {
            ++report.failed;
            continue;
        }
        mono.push_back(r.err_monotone);
        nw.push_back(r.err_nw);
    }
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };
    auto sd = [](const std::vector<double>& v, double m) {
        double s = 0.0;
        for (double x : v) s += (x - m) * (x - m);
        return std::sqrt(s / static_cast<double>(v.size() - 1));
    };
    report.mean_monotone = mean(mono);
    report.mean_nw = mean(nw);
    report.sd_defined = mono.size() >= 2;
    report.sd_monotone = report.sd_defined ? sd(mono, report.mean_monotone) : 0.0;
    report.sd_nw = report.sd_defined ? sd(nw, report.mean_nw) : 0.0;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    ExperimentReport report;
    report.per_rep.resize(spec.repetitions);

    std::size_t workers = spec.threads ? spec.threads : std::thread::hardware_concurrency();
    workers = std::clamp<std::size_t>(workers, 1, spec.repetitions);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < spec.repetitions; i = next++) {
            report.per_rep[i] = run_repetition(spec, i);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    }

    summarize(report);
    if (report.failed * 10 > spec.repetitions) {
        const auto& first = *std::find_if(report.per_rep.begin(), report.per_rep.end(),
                                          [](const auto& r) { return !r.ok; });
        throw ExperimentFailed(std::to_string(report.failed) + " of " +
                               std::to_string(spec.repetitions) +
                               " repetitions failed; first error: " + first.error);
    }
    return report;
}

std::string report_to_json(const ExperimentSpec& spec, const ExperimentReport& report) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["model"] = spec.model.label;
    j["n_paths"] = spec.n_paths;
    j["n_steps"] = spec.n_steps;
    j["T"] = spec.horizon;
    j["repetitions"] = spec.repetitions;
    j["seed"] = spec.seed;
    j["kernel"] = std::string(to_string(spec.cfg.kernel.family()));
    j["mode"] = std::string(to_string(spec.mode));
    j["l0"] = spec.cfg.l0;
    j["r0"] = spec.cfg.r0;
    j["eps"] = spec.cfg.eps;
    j["t0"] = spec.cfg.t0;
    j["m_threshold"] = spec.cfg.m_threshold;
    j["z_grid_points"] = spec.cfg.z_grid_points;

    ordered_json rows = ordered_json::array();
    for (const auto& r : report.per_rep) {
        ordered_json row;
        row["index"] = r.index;
        row["seed"] = r.seed;
        row["ok"] = r.ok;
        if (r.ok) {
            row["selected_eta"] = r.selected_eta;
            row["selected_ell"] = r.selected_lh.ell;
            row["selected_h"] = r.selected_lh.h;
            row["err_monotone"] = r.err_monotone;
            row["err_nw"] = r.err_nw;
        } else {
            row["error"] = r.error;
        }
        rows.push_back(std::move(row));
    }
    j["per_rep"] = std::move(rows);
    j["failed"] = report.failed;
    j["mean_monotone"] = report.mean_monotone;
    j["sd_monotone"] = report.sd_monotone;
    j["mean_nw"] = report.mean_nw;
    j["sd_nw"] = report.sd_nw;
    j["sd_defined"] = report.sd_defined;
    return j.dump(2) + "\n";
}

std::string table1_csv(const ExperimentSpec& spec, const ExperimentReport& report) {
    std::ostringstream out;
    out << "model,repetitions,failed,mean_monotone,sd_monotone,mean_nw,sd_nw\n";
    out << spec.model.label << ',' << spec.repetitions << ',' << report.failed << ','
        << format_double(report.mean_monotone) << ',' << format_double(report.sd_monotone) << ','
        << format_double(report.mean_nw) << ',' << format_double(report.sd_nw) << '\n';
    return out.str();
}

std::vector<std::filesystem::path> emit_figure_data(const ExperimentSpec& spec,
                                                    std::size_t n_curves,
                                                    const std::filesystem::path& out_dir) {
    spec.validate();
    if (n_curves > spec.repetitions) {
        throw std::invalid_argument("cannot plot more curves than repetitions");
    }
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    std::vector<std::string> names;
    for (std::size_t k = 0; k < n_curves; ++k) {
        RepetitionCurves curves;
        const auto r = run_repetition(spec, k, &curves);
        if (!r.ok) throw std::runtime_error("repetition " + std::to_string(k) + " failed: " + r.error);
        const auto file = out_dir / ("fig_" + std::to_string(k) + ".csv");
        std::ofstream out(file);
        if (!out) throw std::runtime_error("cannot open '" + file.string() + "' for writing");
        out << "x,truth,estimate\n";
        for (std::size_t i = 0; i < curves.monotone.size(); ++i) {
            const double x = curves.monotone.abscissa(i);
            out << format_double(x) << ',' << format_double(spec.model.drift(x)) << ','
                << format_double(curves.monotone[i]) << '\n';
        }
        if (!out) throw std::runtime_error("write failed for '" + file.string() + "'");
        written.push_back(file);
        names.push_back(file.filename().string());
    }

    const auto script = out_dir / "figures.gp";
    std::ofstream gp(script);
    if (!gp) throw std::runtime_error("cannot open '" + script.string() + "' for writing");
    gp << "# gnuplot -persist figures.gp\n"
       << "set datafile separator ','\n"
       << "set key off\n"
       << "set title 'Model " << spec.model.label << ": adaptive strictly decreasing estimates'\n"
       << "set xlabel 'x'\n";
    gp << "plot ";
    for (std::size_t k = 0; k < names.size(); ++k) {
        gp << "'" << names[k] << "' skip 1 using 1:3 with lines dt 2 lc rgb 'black', \\\n     ";
    }
    if (names.empty()) {
        gp << "0 with lines lc rgb 'red'\n";
    } else {
        gp << "'" << names.front() << "' skip 1 using 1:2 with lines lw 2 lc rgb 'red'\n";
    }
    if (!gp) throw std::runtime_error("write failed for '" + script.string() + "'");
    written.push_back(script);
    return written;
}

}  // namespace monodrift
