#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace monodrift {

/// n equally spaced points on [lo, hi], endpoints included.
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Composite trapezoid rule for samples on a uniform grid of spacing dx.
double trapezoid(std::span<const double> values, double dx);

/// Trapezoid weights for n uniform nodes on [lo, hi].
std::vector<double> trapezoid_weights(double lo, double hi, std::size_t n);

struct RefinedIntegral {
    double value = 0.0;
    std::size_t intervals = 0;
    bool converged = false;
};

/// Trapezoid rule on [a, b] with the number of intervals doubled (reusing
/// previous nodes) until two successive estimates differ by less than tol.
RefinedIntegral integrate_refined(const std::function<double(double)>& f, double a, double b,
                                  double tol = 1e-8, std::size_t min_intervals = 1024,
                                  std::size_t max_intervals = std::size_t{1} << 22);

}  // namespace monodrift
