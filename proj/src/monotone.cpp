#include "monodrift/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "monodrift/quadrature.hpp"

namespace monodrift {

MonotoneMode parse_monotone_mode(std::string_view name) {
    if (name == "oracle") return MonotoneMode::Oracle;
    if (name == "practical") return MonotoneMode::Practical;
    throw std::invalid_argument("unknown mode '" + std::string(name) +
                                "' (expected oracle | practical)");
}

std::string_view to_string(MonotoneMode mode) {
    return mode == MonotoneMode::Oracle ? "oracle" : "practical";
}

std::vector<BandwidthPair> square_grid(std::span<const double> bandwidths) {
    std::vector<BandwidthPair> out;
    out.reserve(bandwidths.size() * bandwidths.size());
    for (double ell : bandwidths) {
        for (double h : bandwidths) out.push_back({ell, h});
    }
    std::sort(out.begin(), out.end());
    return out;
}

void MonotoneInput::validate() const {
    cfg.validate();
    if (!curve.spans(cfg.i_2eps())) {
        throw std::invalid_argument("monotone input curve must span I_2eps = [l0 - 2 eps, r0 + 2 eps]");
    }
    if (!(m_b > 0.0)) throw std::invalid_argument("slope bound m_b must be positive");
    if (endpoint_lo_val.has_value() != endpoint_hi_val.has_value()) {
        throw std::invalid_argument("both endpoint values must be given together");
    }
    if (has_endpoints() && !(*endpoint_hi_val > *endpoint_lo_val)) {
        throw std::invalid_argument("endpoint b(l_eps) must exceed b(r_eps)");
    }
}

namespace {

void check_bandwidth(const MonotoneInput& inp, double bw, const char* name) {
    if (!(bw > 0.0) || !std::isfinite(bw)) {
        throw std::invalid_argument(std::string(name) + " must be positive");
    }
    if (inp.cfg.theory_strict) {
        const double bound = std::min(1.0, inp.m_b) * inp.cfg.eps;
        if (!(bw < bound)) {
            throw std::invalid_argument(std::string(name) + " = " + std::to_string(bw) +
                                        " violates the admissible range (0, " +
                                        std::to_string(bound) + ")");
        }
    }
}

/// Precomputed quadrature data for one pilot curve and one pair of endpoint
/// values [lo_val, hi_val] of the outer integral.
class Smoother {
public:
    Smoother(const MonotoneInput& inp, double lo_val, double hi_val)
        : kernel_(inp.cfg.kernel),
          base_(inp.cfg.i_2eps().lo),
          pilot_(inp.curve.values()),
          pilot_weights_(trapezoid_weights(inp.curve.lo(), inp.curve.hi(), inp.curve.size())),
          lo_val_(lo_val),
          z_(linspace(lo_val, hi_val, inp.cfg.z_grid_points)),
          z_weights_(trapezoid_weights(lo_val, hi_val, inp.cfg.z_grid_points)) {}

    double inverse(double h, double w) const {
        double acc = 0.0;
        for (std::size_t j = 0; j < pilot_.size(); ++j) {
            acc += pilot_weights_[j] * kernel_.cdf((pilot_[j] - w) / h);
        }
        return base_ + acc;
    }

    /// Smoothed inverse at the outer nodes z_j.
    std::vector<double> inverse_table(double h) const {
        std::vector<double> g(z_.size());
        for (std::size_t j = 0; j < z_.size(); ++j) g[j] = inverse(h, z_[j]);
        return g;
    }

    double reinvert(const std::vector<double>& g, double ell, double x) const {
        double acc = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            acc += z_weights_[j] * kernel_.cdf((g[j] - x) / ell);
        }
        return lo_val_ + acc;
    }

private:
    Kernel kernel_;
    double base_;
    const std::vector<double>& pilot_;
    std::vector<double> pilot_weights_;
    double lo_val_;
    std::vector<double> z_;
    std::vector<double> z_weights_;
};

struct Endpoints {
    double lo_val;
    double hi_val;
    bool active;  // false: practical estimator zeroed by the slope test
};

Endpoints endpoints_for(const MonotoneInput& inp, MonotoneMode mode) {
    if (mode == MonotoneMode::Oracle) {
        if (!inp.has_endpoints()) {
            throw std::logic_error(
                "oracle monotone estimate needs b(l_eps) and b(r_eps); use the practical "
                "estimator when they are unknown");
        }
        return {*inp.endpoint_lo_val, *inp.endpoint_hi_val, true};
    }
    const auto ie = inp.cfg.i_eps();
    return {inp.curve.interpolate(ie.hi), inp.curve.interpolate(ie.lo), omega_event(inp)};
}

std::vector<double> evaluate(const MonotoneInput& inp, BandwidthPair bw, MonotoneMode mode,
                             std::span<const double> xs) {
    inp.validate();
    check_bandwidth(inp, bw.ell, "ell");
    check_bandwidth(inp, bw.h, "h");
    const auto ends = endpoints_for(inp, mode);
    std::vector<double> out(xs.size(), 0.0);
    if (!ends.active) return out;
    Smoother s(inp, ends.lo_val, ends.hi_val);
    const auto g = s.inverse_table(bw.h);
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = s.reinvert(g, bw.ell, xs[i]);
    return out;
}

double l1_on_grid(std::span<const double> a, std::span<const double> b, double dx) {
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = std::abs(a[i] - b[i]);
    return trapezoid(diff, dx);
}

}  // namespace

double inverse_estimate(const MonotoneInput& inp, double h, double w) {
    const double ws[] = {w};
    return inverse_estimates(inp, h, ws).front();
}

std::vector<double> inverse_estimates(const MonotoneInput& inp, double h,
                                      std::span<const double> ws) {
    inp.validate();
    check_bandwidth(inp, h, "h");
    // outer nodes are irrelevant here; any valid endpoint pair will do
    Smoother s(inp, 0.0, 1.0);
    std::vector<double> out(ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) out[i] = s.inverse(h, ws[i]);
    return out;
}

double monotone_estimate(const MonotoneInput& inp, BandwidthPair bw, double x) {
    const double xs[] = {x};
    return evaluate(inp, bw, MonotoneMode::Oracle, xs).front();
}

bool omega_event(const MonotoneInput& inp) {
    const auto ie = inp.cfg.i_eps();
    const double at_r = inp.curve.interpolate(ie.hi);
    const double at_l = inp.curve.interpolate(ie.lo);
    return at_r - at_l <= -0.5 * inp.m_b * ie.length();
}

double practical_estimate(const MonotoneInput& inp, BandwidthPair bw, double x) {
    const double xs[] = {x};
    return evaluate(inp, bw, MonotoneMode::Practical, xs).front();
}

CurveOnGrid monotone_curve(const MonotoneInput& inp, BandwidthPair bw, MonotoneMode mode,
                           double lo, double hi, std::size_t n_points) {
    const auto xs = linspace(lo, hi, n_points);
    return CurveOnGrid(lo, hi, evaluate(inp, bw, mode, xs));
}

std::vector<double> selection_criteria(const MonotoneInput& inp,
                                       std::span<const BandwidthPair> grid, MonotoneMode mode) {
    inp.validate();
    for (const auto& bw : grid) {
        check_bandwidth(inp, bw.ell, "ell");
        check_bandwidth(inp, bw.h, "h");
    }
    const auto i0 = inp.cfg.i0();
    const auto xs = linspace(i0.lo, i0.hi, kSelectionPoints);
    const double dx = i0.length() / static_cast<double>(kSelectionPoints - 1);
    std::vector<double> pilot(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) pilot[i] = inp.curve.interpolate(xs[i]);

    std::vector<double> crit(grid.size());
    const auto ends = endpoints_for(inp, mode);
    if (!ends.active) {
        const std::vector<double> zeros(xs.size(), 0.0);
        std::fill(crit.begin(), crit.end(), l1_on_grid(zeros, pilot, dx));
        return crit;
    }

    Smoother s(inp, ends.lo_val, ends.hi_val);
    std::map<double, std::vector<double>> inverse_by_h;
    std::vector<double> est(xs.size());
    for (std::size_t c = 0; c < grid.size(); ++c) {
        auto it = inverse_by_h.find(grid[c].h);
        if (it == inverse_by_h.end()) {
            it = inverse_by_h.emplace(grid[c].h, s.inverse_table(grid[c].h)).first;
        }
        for (std::size_t i = 0; i < xs.size(); ++i) est[i] = s.reinvert(it->second, grid[c].ell, xs[i]);
        crit[c] = l1_on_grid(est, pilot, dx);
    }
    return crit;
}

double selection_criterion(const MonotoneInput& inp, BandwidthPair bw, MonotoneMode mode) {
    const BandwidthPair one[] = {bw};
    return selection_criteria(inp, one, mode).front();
}

BandwidthPair select_lh_adaptive(const MonotoneInput& inp, std::span<const BandwidthPair> grid,
                                 MonotoneMode mode) {
    if (grid.empty()) throw std::invalid_argument("bandwidth pair grid is empty");
    const auto crit = selection_criteria(inp, grid, mode);
    std::size_t best = 0;
    for (std::size_t c = 1; c < grid.size(); ++c) {
        if (crit[c] < crit[best] || (crit[c] == crit[best] && grid[c] < grid[best])) best = c;
    }
    return grid[best];
}

double smooth_inverse_oracle(const std::function<double(double)>& b, const EstimatorConfig& cfg,
                             double h, double w) {
    if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
    const auto span = cfg.i_2eps();
    const Kernel k = cfg.kernel;
    const auto r = integrate_refined([&](double z) { return k.cdf((b(z) - w) / h); }, span.lo,
                                     span.hi);
    return span.lo + r.value;
}

namespace {

/// Solves b(x) = z on I_{2 eps} for decreasing b by bisection.
double invert_decreasing(const std::function<double(double)>& b, Interval span, double z) {
    double lo = span.lo, hi = span.hi;
    if (z >= b(lo)) return lo;
    if (z <= b(hi)) return hi;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (b(mid) > z) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double smooth_monotone_oracle(const std::function<double(double)>& b,
                              const EstimatorConfig& cfg, double ell, double x) {
    if (!(ell > 0.0)) throw std::invalid_argument("ell must be positive");
    const auto ie = cfg.i_eps();
    const auto span = cfg.i_2eps();
    const double lo_val = b(ie.hi), hi_val = b(ie.lo);
    const Kernel k = cfg.kernel;
    const auto r = integrate_refined(
        [&](double z) { return k.cdf((invert_decreasing(b, span, z) - x) / ell); }, lo_val,
        hi_val);
    return lo_val + r.value;
}

}  // namespace monodrift
