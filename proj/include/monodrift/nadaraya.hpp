#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "monodrift/curve.hpp"
#include "monodrift/kernel.hpp"
#include "monodrift/sde.hpp"

namespace monodrift {

/// Geometry and thresholds shared by the estimators.
///
/// I_lambda = [l0 - lambda, r0 + lambda]; the drift estimate is tabulated on
/// I_{2 eps}, the monotone estimate targets I_0. Time integrals run over
/// [t0, T] and the Nadaraya–Watson ratio is truncated where the density
/// estimate is at most m_threshold / 2.
struct EstimatorConfig {
    double l0 = -1.0;
    double r0 = 1.0;
    double eps = 0.01;
    double t0 = 0.5;
    double m_threshold = 0.05;
    Kernel kernel{KernelFamily::Gaussian};
    std::size_t z_grid_points = 200;
    /// Enforce the bandwidth ranges under which the risk bounds hold:
    /// eta in (0, 1] and ell, h in (0, min(1, m_b) eps).
    bool theory_strict = false;

    Interval interval(double lambda) const noexcept { return {l0 - lambda, r0 + lambda}; }
    Interval i0() const noexcept { return interval(0.0); }
    Interval i_eps() const noexcept { return interval(eps); }
    Interval i_2eps() const noexcept { return interval(2.0 * eps); }

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;
    /// validate() plus t0 < T for the given observation horizon.
    void validate_for(const PathBundle& paths) const;
    /// eta > 0 (and eta <= 1 in theory-strict mode).
    void check_eta(double eta) const;

    friend bool operator==(const EstimatorConfig&, const EstimatorConfig&) = default;
};

/// Grid points t_k = k T/n entering the time sums: t0 <= t_k <= T - dt.
struct ObservationWindow {
    std::size_t first_step = 0;
    std::size_t steps_per_path = 0;
    double dt = 0.0;
    /// Discretized window length (n - first_step) dt; equals T - t0 when t0
    /// lies on the grid.
    double length = 0.0;
};

ObservationWindow observation_window(const PathBundle& paths, const EstimatorConfig& cfg);

/// (1/(N T0)) sum_i sum_k K_eta(X^i_{t_k} - x) dt.
double density_estimate(const PathBundle& paths, const EstimatorConfig& cfg, double eta, double x);

/// (1/(N T0)) sum_i sum_k K_eta(X^i_{t_k} - x) (X^i_{t_{k+1}} - X^i_{t_k}).
double af_estimate(const PathBundle& paths, const EstimatorConfig& cfg, double eta, double x);

/// Truncated ratio af/f, zero where f <= m_threshold / 2, tabulated on
/// I_{2 eps} with cfg.z_grid_points points.
CurveOnGrid nw_drift(const PathBundle& paths, const EstimatorConfig& cfg, double eta);

/// Same estimator on an arbitrary uniform grid.
CurveOnGrid nw_drift_on(const PathBundle& paths, const EstimatorConfig& cfg, double eta,
                        double lo, double hi, std::size_t n_points);

/// Leave-one-out contrast for every bandwidth of the grid, in grid order.
std::vector<double> loocv_criteria(const PathBundle& paths, const EstimatorConfig& cfg,
                                   std::span<const double> eta_grid);

double loocv_criterion(const PathBundle& paths, const EstimatorConfig& cfg, double eta);

/// Grid bandwidth minimizing the leave-one-out contrast; ties go to the
/// smaller bandwidth.
double select_eta_loocv(const PathBundle& paths, const EstimatorConfig& cfg,
                        std::span<const double> eta_grid);

}  // namespace monodrift
