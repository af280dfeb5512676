#include "monodrift/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace monodrift {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n < 2) throw std::invalid_argument("linspace needs at least two points");
    std::vector<double> out(n);
    // convex combination: exact endpoints, and an exact midpoint on symmetric ranges
    const double last = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / last;
        out[i] = lo * (1.0 - t) + hi * t;
    }
    return out;
}

double trapezoid(std::span<const double> values, double dx) {
    if (values.size() < 2) return 0.0;
    double inner = 0.0;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) inner += values[i];
    return dx * (inner + 0.5 * (values.front() + values.back()));
}

std::vector<double> trapezoid_weights(double lo, double hi, std::size_t n) {
    if (n < 2) throw std::invalid_argument("trapezoid needs at least two nodes");
    const double dx = (hi - lo) / static_cast<double>(n - 1);
    std::vector<double> w(n, dx);
    w.front() = w.back() = 0.5 * dx;
    return w;
}

RefinedIntegral integrate_refined(const std::function<double(double)>& f, double a, double b,
                                  double tol, std::size_t min_intervals,
                                  std::size_t max_intervals) {
    if (a == b) return {0.0, 0, true};
    std::size_t n = 1;
    double sum = 0.5 * (f(a) + f(b));  // sum of trapezoid-weighted samples / dx
    double estimate = sum * (b - a);
    double previous = estimate;
    while (n < max_intervals) {
        const double dx = (b - a) / static_cast<double>(2 * n);
        double added = 0.0;
        for (std::size_t i = 0; i < n; ++i) added += f(a + dx * static_cast<double>(2 * i + 1));
        sum += added;
        n *= 2;
        previous = estimate;
        estimate = sum * dx;
        if (n >= min_intervals && std::abs(estimate - previous) < tol) {
            return {estimate, n, true};
        }
    }
    return {estimate, n, false};
}

}  // namespace monodrift
