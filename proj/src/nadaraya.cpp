#include "monodrift/nadaraya.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "monodrift/quadrature.hpp"

namespace monodrift {

void EstimatorConfig::validate() const {
    if (!(l0 < r0)) throw std::invalid_argument("l0 must be smaller than r0");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (!(t0 >= 0.0)) throw std::invalid_argument("t0 must be nonnegative");
    if (!(m_threshold > 0.0 && m_threshold < 1.0)) {
        throw std::invalid_argument("m_threshold must lie in (0, 1)");
    }
    if (z_grid_points < 50) throw std::invalid_argument("z_grid_points must be at least 50");
}

void EstimatorConfig::validate_for(const PathBundle& paths) const {
    validate();
    if (!(t0 < paths.horizon())) {
        throw std::invalid_argument("t0 must be smaller than the observation horizon T");
    }
}

void EstimatorConfig::check_eta(double eta) const {
    if (!(eta > 0.0) || !std::isfinite(eta)) {
        throw std::invalid_argument("bandwidth eta must be positive, got " + std::to_string(eta));
    }
    if (theory_strict && eta > 1.0) {
        throw std::invalid_argument("bandwidth eta must lie in (0, 1], got " + std::to_string(eta));
    }
}

ObservationWindow observation_window(const PathBundle& paths, const EstimatorConfig& cfg) {
    cfg.validate_for(paths);
    ObservationWindow w;
    w.dt = paths.dt();
    w.first_step = static_cast<std::size_t>(std::ceil(cfg.t0 / w.dt - 1e-9));
    if (w.first_step >= paths.n_steps()) {
        throw std::invalid_argument("observation window [t0, T - dt] contains no grid point");
    }
    w.steps_per_path = paths.n_steps() - w.first_step;
    w.length = static_cast<double>(w.steps_per_path) * w.dt;
    return w;
}

namespace {

struct Sums {
    double density = 0.0;  // sum K_eta(X - x)
    double drift = 0.0;    // sum K_eta(X - x) dX
};

Sums kernel_sums(const PathBundle& paths, const ObservationWindow& w, const Kernel& kernel,
                 double eta, double x) {
    Sums s;
    const double radius = kernel.support_radius() * eta;
    for (std::size_t i = 0; i < paths.n_paths(); ++i) {
        const auto row = paths.path(i);
        for (std::size_t k = w.first_step; k < paths.n_steps(); ++k) {
            const double u = row[k] - x;
            if (std::abs(u) >= radius) continue;
            const double kv = kernel.pdf(u / eta) / eta;
            s.density += kv;
            s.drift += kv * (row[k + 1] - row[k]);
        }
    }
    return s;
}

}  // namespace

double density_estimate(const PathBundle& paths, const EstimatorConfig& cfg, double eta, double x) {
    cfg.check_eta(eta);
    const auto w = observation_window(paths, cfg);
    const double norm = 1.0 / (static_cast<double>(paths.n_paths()) * w.length);
    return kernel_sums(paths, w, cfg.kernel, eta, x).density * w.dt * norm;
}

double af_estimate(const PathBundle& paths, const EstimatorConfig& cfg, double eta, double x) {
    cfg.check_eta(eta);
    const auto w = observation_window(paths, cfg);
    const double norm = 1.0 / (static_cast<double>(paths.n_paths()) * w.length);
    return kernel_sums(paths, w, cfg.kernel, eta, x).drift * norm;
}

CurveOnGrid nw_drift_on(const PathBundle& paths, const EstimatorConfig& cfg, double eta,
                        double lo, double hi, std::size_t n_points) {
    cfg.check_eta(eta);
    const auto w = observation_window(paths, cfg);
    const double norm = 1.0 / (static_cast<double>(paths.n_paths()) * w.length);
    const double floor = 0.5 * cfg.m_threshold;
    return CurveOnGrid::tabulate(lo, hi, n_points, [&](double x) {
        const auto s = kernel_sums(paths, w, cfg.kernel, eta, x);
        const double f = s.density * w.dt * norm;
        return f > floor ? (s.drift * norm) / f : 0.0;
    });
}

CurveOnGrid nw_drift(const PathBundle& paths, const EstimatorConfig& cfg, double eta) {
    const auto span = cfg.i_2eps();
    return nw_drift_on(paths, cfg, eta, span.lo, span.hi, cfg.z_grid_points);
}

std::vector<double> loocv_criteria(const PathBundle& paths, const EstimatorConfig& cfg,
                                   std::span<const double> eta_grid) {
    if (eta_grid.empty()) throw std::invalid_argument("bandwidth grid for LooCV is empty");
    for (double eta : eta_grid) cfg.check_eta(eta);
    const auto w = observation_window(paths, cfg);
    const std::size_t n_eta = eta_grid.size();
    const std::size_t m = w.steps_per_path;
    const std::size_t n_points = paths.n_paths() * m;

    std::vector<double> xs(n_points), dxs(n_points);
    for (std::size_t i = 0; i < paths.n_paths(); ++i) {
        const auto row = paths.path(i);
        for (std::size_t k = 0; k < m; ++k) {
            xs[i * m + k] = row[w.first_step + k];
            dxs[i * m + k] = row[w.first_step + k + 1] - row[w.first_step + k];
        }
    }

    // Raw kernel sums at every observed point, one array per bandwidth:
    // dens[e][p] = sum_q K_e(x_q - x_p), loo[e][p] = sum_{q off path(p)} K_e(x_q - x_p) dx_q.
    // Each unordered pair (p, q) is visited once, as a contiguous tail q > p.
    const Eigen::Map<const Eigen::ArrayXd> x(xs.data(), static_cast<Eigen::Index>(n_points));
    const Eigen::Map<const Eigen::ArrayXd> dx(dxs.data(), static_cast<Eigen::Index>(n_points));
    std::vector<Eigen::ArrayXd> dens(n_eta, Eigen::ArrayXd::Zero(x.size()));
    std::vector<Eigen::ArrayXd> loo(n_eta, Eigen::ArrayXd::Zero(x.size()));
    const bool gaussian = cfg.kernel.family() == KernelFamily::Gaussian;
    const double k0 = cfg.kernel.pdf(0.0);

    Eigen::ArrayXd d2, kv;
    for (Eigen::Index p = 0; p < x.size(); ++p) {
        const Eigen::Index tail = x.size() - p - 1;
        const auto path_end = static_cast<Eigen::Index>((static_cast<std::size_t>(p) / m + 1) * m);
        const Eigen::Index cross = x.size() - path_end;
        d2 = (x.tail(tail) - x[p]).square();
        for (std::size_t e = 0; e < n_eta; ++e) {
            const double eta = eta_grid[e];
            if (gaussian) {
                kv = (d2 * (-0.5 / (eta * eta))).exp() * (k0 / eta);
            } else {
                kv = (1.0 - d2 * (1.0 / (eta * eta))).max(0.0).cube() * (k0 / eta);
            }
            auto& de = dens[e];
            auto& le = loo[e];
            de.tail(tail) += kv;
            de[p] += kv.sum() + k0 / eta;
            if (cross > 0) {
                le.tail(cross) += kv.tail(cross) * dx[p];
                le[p] += (kv.tail(cross) * dx.tail(cross)).sum();
            }
        }
    }

    const double norm = 1.0 / (static_cast<double>(paths.n_paths()) * w.length);
    const double floor = 0.5 * cfg.m_threshold;
    std::vector<double> crit(n_eta, 0.0);
    for (std::size_t p = 0; p < n_points; ++p) {
        for (std::size_t e = 0; e < n_eta; ++e) {
            const auto pi = static_cast<Eigen::Index>(p);
            const double f = dens[e][pi] * w.dt * norm;
            const double a = f > floor ? loo[e][pi] * norm / f : 0.0;
            crit[e] += a * a * w.dt - 2.0 * a * dxs[p];
        }
    }
    return crit;
}

double loocv_criterion(const PathBundle& paths, const EstimatorConfig& cfg, double eta) {
    const double grid[] = {eta};
    return loocv_criteria(paths, cfg, grid).front();
}

double select_eta_loocv(const PathBundle& paths, const EstimatorConfig& cfg,
                        std::span<const double> eta_grid) {
    const auto crit = loocv_criteria(paths, cfg, eta_grid);
    std::size_t best = 0;
    for (std::size_t e = 1; e < crit.size(); ++e) {
        if (crit[e] < crit[best] || (crit[e] == crit[best] && eta_grid[e] < eta_grid[best])) {
            best = e;
        }
    }
    return eta_grid[best];
}

}  // namespace monodrift
