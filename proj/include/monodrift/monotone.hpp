#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "monodrift/curve.hpp"
#include "monodrift/nadaraya.hpp"

namespace monodrift {

enum class MonotoneMode { Oracle, Practical };

MonotoneMode parse_monotone_mode(std::string_view name);
std::string_view to_string(MonotoneMode mode);

/// Re-inversion bandwidth ell and inverse-smoothing bandwidth h.
struct BandwidthPair {
    double ell = 0.0;
    double h = 0.0;

    friend auto operator<=>(const BandwidthPair&, const BandwidthPair&) = default;
};

/// All pairs (ell, h) of the square grid H x H, ordered by (ell, h).
std::vector<BandwidthPair> square_grid(std::span<const double> bandwidths);

/// Input to the monotonization: a pilot estimate of a decreasing function b
/// tabulated on I_{2 eps}, and optionally the true values b(r_eps) and
/// b(l_eps) (oracle mode).
struct MonotoneInput {
    CurveOnGrid curve;
    EstimatorConfig cfg;
    std::optional<double> endpoint_lo_val;  // b(r_eps)
    std::optional<double> endpoint_hi_val;  // b(l_eps)
    double m_b = 1.0;

    void validate() const;
    bool has_endpoints() const noexcept { return endpoint_lo_val && endpoint_hi_val; }
};

/// Strictly decreasing smoothing of the generalized inverse of the pilot:
/// l_{2 eps} + ∫_{I_{2 eps}} 𝒦((b̂(z) - w) / h) dz, trapezoid on the curve grid.
double inverse_estimate(const MonotoneInput& inp, double h, double w);
std::vector<double> inverse_estimates(const MonotoneInput& inp, double h,
                                      std::span<const double> ws);

/// b(r_eps) + ∫_{b(r_eps)}^{b(l_eps)} 𝒦((inverse(z) - x) / ell) dz with the
/// true endpoint values. Throws std::logic_error if they are missing.
double monotone_estimate(const MonotoneInput& inp, BandwidthPair bw, double x);

/// Slope test b̂(r_eps) - b̂(l_eps) <= -(m_b / 2)(r_eps - l_eps), endpoints
/// interpolated from the curve.
bool omega_event(const MonotoneInput& inp);

/// monotone_estimate with endpoints read off the curve, multiplied by the
/// indicator of omega_event.
double practical_estimate(const MonotoneInput& inp, BandwidthPair bw, double x);

/// Tabulates the oracle or practical estimator on n uniform points of [lo, hi].
CurveOnGrid monotone_curve(const MonotoneInput& inp, BandwidthPair bw, MonotoneMode mode,
                           double lo, double hi, std::size_t n_points);

/// Number of I_0 points used by the bandwidth selection criterion.
inline constexpr std::size_t kSelectionPoints = 201;

/// Trapezoid L1 distance on I_0 between the estimator and the pilot curve.
double selection_criterion(const MonotoneInput& inp, BandwidthPair bw, MonotoneMode mode);

/// Criterion for each candidate, in grid order.
std::vector<double> selection_criteria(const MonotoneInput& inp,
                                       std::span<const BandwidthPair> grid, MonotoneMode mode);

/// argmin of selection_criterion over the grid, ties broken by (ell, h).
BandwidthPair select_lh_adaptive(const MonotoneInput& inp, std::span<const BandwidthPair> grid,
                                 MonotoneMode mode);

/// Inverse smoothing applied to an exact strictly decreasing function b, with
/// refined quadrature. Reference for the deterministic approximation error.
double smooth_inverse_oracle(const std::function<double(double)>& b, const EstimatorConfig& cfg,
                             double h, double w);

/// b(r_eps) + ∫_{b(I_eps)} 𝒦((b^{-1}(z) - x) / ell) dz for an exact b.
double smooth_monotone_oracle(const std::function<double(double)>& b,
                              const EstimatorConfig& cfg, double ell, double x);

}  // namespace monodrift
