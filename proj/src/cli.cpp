#include "monodrift/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "monodrift/config.hpp"
#include "monodrift/experiment.hpp"
#include "monodrift/monotone.hpp"
#include "monodrift/nadaraya.hpp"
#include "monodrift/paths_io.hpp"
#include "monodrift/sde.hpp"

namespace monodrift {

namespace {

/// Command line flags that map one-to-one onto configuration keys.
class KeyFlags {
public:
    void add(CLI::App* app, const std::string& key, const std::string& help) {
        std::string flag = "--" + key;
        for (auto& c : flag) {
            if (c == '_') c = '-';
        }
        auto& slot = values_[key];
        auto* opt = app->add_option(flag, slot, help)->default_str(get_config_value({}, key));
        options_.emplace_back(key, opt);
    }

    void apply(RunConfig& cfg) const {
        for (const auto& [key, opt] : options_) {
            if (opt->count() > 0) set_config_value(cfg, key, values_.at(key));
        }
    }

private:
    std::map<std::string, std::string> values_;
    std::vector<std::pair<std::string, CLI::Option*>> options_;
};

struct Common {
    std::string config_file;
    bool dump = false;
    KeyFlags keys;
};

void add_common(CLI::App* app, Common& c, const std::vector<std::string>& keys) {
    app->add_option("--config", c.config_file, "Configuration file (key = value lines)");
    app->add_flag("--dump-config", c.dump, "Print the effective configuration and exit");
    static const std::map<std::string, std::string> help = {
        {"kernel", "Smoothing kernel: gaussian | triweight"},
        {"l0", "Left end of the estimation interval I_0"},
        {"r0", "Right end of the estimation interval I_0"},
        {"eps", "Margin eps; the pilot lives on [l0 - 2 eps, r0 + 2 eps]"},
        {"t0", "Start of the time window [t0, T]"},
        {"m_threshold", "Density threshold m; the ratio is zeroed where f <= m/2"},
        {"z_grid_points", "Quadrature nodes of the z-integrals (>= 50)"},
        {"theory_strict", "Enforce eta <= 1 and ell, h < min(1, m_b) eps (true | false)"},
        {"model", "Built-in model: A | B"},
        {"n_paths", "Number of path copies N"},
        {"n_steps", "Observation steps n per path"},
        {"T", "Observation horizon T"},
        {"repetitions", "Monte-Carlo repetitions"},
        {"eta_grid", "LooCV bandwidth grid (start:step:count or a,b,c)"},
        {"lh_grid", "Bandwidth set H; (ell, h) range over H x H"},
        {"seed", "Base random seed (MONODRIFT_SEED overrides the config file)"},
        {"mode", "Monotone estimator: oracle | practical"},
        {"threads", "Worker threads for repetitions (0 = all cores)"},
        {"n_curves", "Repetitions written as figure data"},
        {"out", "Output path"},
        {"verbosity", "0 quiet, 1 summary, 2 summary and one line per repetition"},
    };
    for (const auto& k : keys) c.keys.add(app, k, help.at(k));
}

RunConfig resolve(const Common& c) {
    RunConfig cfg;
    if (!c.config_file.empty()) cfg = load_config_file(c.config_file, cfg);
    if (const char* env = std::getenv("MONODRIFT_SEED"); env && *env) {
        set_config_value(cfg, "seed", env);
    }
    c.keys.apply(cfg);
    validate_config(cfg);
    return cfg;
}

std::vector<double> parse_triplet(const std::string& flag, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(p, &used));
            if (used != p.size()) throw std::invalid_argument(p);
        } catch (const std::exception&) {
            throw ConfigError(flag, "cannot parse '" + text + "'");
        }
    }
    return out;
}

/// `out` names a file, or a directory that receives default_name.
std::string output_file(const RunConfig& cfg, const std::string& default_name) {
    const std::filesystem::path p = cfg.out;
    if (std::filesystem::is_directory(p)) return (p / default_name).string();
    return p.string();
}

const std::vector<std::string> kEstimatorKeys = {"kernel", "l0", "r0", "eps", "t0", "m_threshold",
                                                 "z_grid_points", "theory_strict"};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Strictly decreasing drift estimation for recurrent diffusions", "monodrift"};
    app.require_subcommand(1);
    // monotonize takes a bandwidth flag --h, so help is long-form only
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_help_all_flag("--help-all", "Expand help for every subcommand");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Simulate N path copies and write them as CSV");
    Common sim_c;
    add_common(sim, sim_c, {"model", "n_paths", "n_steps", "T", "seed", "out"});
    bool from_long_path = false;
    std::size_t max_long_steps = 0;
    sim->add_flag("--from-long-path", from_long_path,
                  "Cut the copies from one long trajectory at returns to x0");
    sim->add_option("--max-long-steps", max_long_steps,
                    "Step budget of the long trajectory (0 = 500 * N * n)")
        ->capture_default_str();

    // estimate
    auto* est = app.add_subcommand("estimate", "Nadaraya-Watson drift estimate from a path CSV");
    Common est_c;
    add_common(est, est_c, concat(kEstimatorKeys, {"eta_grid", "out"}));
    std::string paths_file, eta_text = "loocv", grid_text;
    est->add_option("--paths", paths_file, "Input path CSV")->required();
    est->add_option("--eta", eta_text, "Bandwidth value, or 'loocv' to select it on --eta-grid")
        ->capture_default_str();
    est->add_option("--grid", grid_text, "Output grid lo,hi,npts")
        ->default_str("l0-2eps,r0+2eps,z_grid_points");

    // monotonize
    auto* mon = app.add_subcommand("monotonize", "Strictly decreasing estimate from a pilot curve");
    Common mon_c;
    add_common(mon, mon_c, concat(kEstimatorKeys, {"model", "mode", "out"}));
    std::string curve_file, adaptive_text, endpoints_text;
    std::optional<double> ell, h, m_b;
    std::size_t npts = kSelectionPoints;
    mon->add_option("--curve", curve_file, "Pilot curve CSV spanning [l0 - 2 eps, r0 + 2 eps]")
        ->required();
    mon->add_option("--ell", ell, "Re-inversion bandwidth ell")->default_str("none");
    mon->add_option("--h", h, "Inverse-smoothing bandwidth h")->default_str("none");
    mon->add_option("--adaptive", adaptive_text,
                    "Select (ell, h) on H x H for the bandwidth set H (grid spec)")
        ->default_str("none");
    mon->add_option("--endpoints", endpoints_text, "True values b(r_eps),b(l_eps) (oracle mode)")
        ->default_str("none");
    mon->add_option("--m-b", m_b, "Slope bound m_b")->default_str("slope bound of --model");
    mon->add_option("--npts", npts, "Output points on I_0")->capture_default_str();

    // experiment
    auto* exp = app.add_subcommand("experiment", "Monte-Carlo simulation study");
    Common exp_c;
    add_common(exp, exp_c,
               concat(kEstimatorKeys, {"model", "n_paths", "n_steps", "T", "repetitions",
                                       "eta_grid", "lh_grid", "seed", "mode", "threads",
                                       "n_curves", "out", "verbosity"}));
    exp->add_option("--spec", exp_c.config_file, "Alias of --config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    Common* active = sim->parsed() ? &sim_c : est->parsed() ? &est_c : mon->parsed() ? &mon_c : &exp_c;
    RunConfig cfg;
    try {
        cfg = resolve(*active);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    }
    if (active->dump) {
        out << dump_config(cfg);
        return 0;
    }

    try {
        if (sim->parsed()) {
            const auto model = builtin_model(cfg.model);
            const auto paths =
                from_long_path
                    ? extract_copies_from_long_path(model, cfg.n_paths, cfg.n_steps, cfg.T,
                                                    cfg.seed, max_long_steps)
                    : simulate_copies(model, cfg.n_paths, cfg.n_steps, cfg.T, cfg.seed);
            const std::string file = output_file(cfg, "paths.csv");
            write_paths_csv(file, paths);
            if (cfg.verbosity > 0) out << "wrote " << paths.n_paths() << " paths to " << file << "\n";
            return 0;
        }

        const auto ecfg = estimator_config(cfg);
        if (est->parsed()) {
            const auto paths = read_paths_csv(paths_file);
            double eta = 0.0;
            if (eta_text == "loocv") {
                eta = select_eta_loocv(paths, ecfg, parse_grid_spec(cfg.eta_grid));
            } else {
                eta = parse_triplet("--eta", eta_text).at(0);
            }
            double lo = ecfg.i_2eps().lo, hi = ecfg.i_2eps().hi;
            std::size_t n = ecfg.z_grid_points;
            if (!grid_text.empty()) {
                const auto g = parse_triplet("--grid", grid_text);
                if (g.size() != 3 || !(g[0] < g[1]) || g[2] < 2) {
                    throw ConfigError("--grid", "expected lo,hi,npts with lo < hi and npts >= 2");
                }
                lo = g[0];
                hi = g[1];
                n = static_cast<std::size_t>(g[2]);
            }
            const auto curve = nw_drift_on(paths, ecfg, eta, lo, hi, n);
            const std::string file = output_file(cfg, "curve.csv");
            write_curve_csv(file, curve);
            out << "eta = " << format_double(eta) << "\n";
            return 0;
        }

        if (mon->parsed()) {
            MonotoneInput inp{read_curve_csv(curve_file), ecfg, std::nullopt, std::nullopt,
                              m_b.value_or(builtin_model(cfg.model).slope_bound)};
            if (!endpoints_text.empty()) {
                const auto e = parse_triplet("--endpoints", endpoints_text);
                if (e.size() != 2) throw ConfigError("--endpoints", "expected a_lo,a_hi");
                inp.endpoint_lo_val = e[0];
                inp.endpoint_hi_val = e[1];
            }
            const auto mode = parse_monotone_mode(cfg.mode);
            if (mode == MonotoneMode::Oracle && !inp.has_endpoints()) {
                throw ConfigError("--endpoints", "oracle mode needs --endpoints (or use --mode practical)");
            }
            BandwidthPair bw;
            if (!adaptive_text.empty()) {
                std::vector<double> set;
                try {
                    set = parse_grid_spec(adaptive_text);
                } catch (const std::exception& e) {
                    throw ConfigError("--adaptive", e.what());
                }
                bw = select_lh_adaptive(inp, square_grid(set), mode);
            } else {
                if (!ell || !h) throw ConfigError("--ell/--h", "give both bandwidths or --adaptive");
                bw = {*ell, *h};
            }
            const auto i0 = ecfg.i0();
            const auto curve = monotone_curve(inp, bw, mode, i0.lo, i0.hi, npts);
            const std::string file = output_file(cfg, "monotone.csv");
            write_curve_csv(file, curve);
            out << "ell = " << format_double(bw.ell) << "\nh = " << format_double(bw.h) << "\n";
            return 0;
        }

        const auto spec = experiment_spec(cfg);
        const std::filesystem::path dir = cfg.out;
        std::filesystem::create_directories(dir);
        const auto report = run_experiment(spec);
        {
            std::ofstream f(dir / "report.json");
            f << report_to_json(spec, report);
            if (!f) throw std::runtime_error("write failed for '" + (dir / "report.json").string() + "'");
        }
        {
            std::ofstream f(dir / "table1.csv");
            f << table1_csv(spec, report);
            if (!f) throw std::runtime_error("write failed for '" + (dir / "table1.csv").string() + "'");
        }
        if (cfg.n_curves > 0) emit_figure_data(spec, cfg.n_curves, dir);
        if (cfg.verbosity > 1) {
            for (const auto& r : report.per_rep) {
                out << "rep " << r.index << " seed " << r.seed << ": ";
                if (r.ok) {
                    out << "eta " << format_double(r.selected_eta) << ", ell "
                        << format_double(r.selected_lh.ell) << ", h " << format_double(r.selected_lh.h)
                        << ", monotone " << format_double(r.err_monotone) << ", nadaraya-watson "
                        << format_double(r.err_nw) << "\n";
                } else {
                    out << "failed: " << r.error << "\n";
                }
            }
        }
        if (cfg.verbosity > 0) {
            out << "model " << cfg.model << ": monotone " << format_double(report.mean_monotone)
                << " (" << format_double(report.sd_monotone) << "), nadaraya-watson "
                << format_double(report.mean_nw) << " (" << format_double(report.sd_nw) << "), "
                << report.failed << " failed\n";
        }
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace monodrift
