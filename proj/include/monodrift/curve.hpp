#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace monodrift {

/// Closed interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const noexcept { return hi - lo; }
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

/// Real function tabulated at equally spaced abscissae on [lo, hi]
/// (both endpoints included).
class CurveOnGrid {
public:
    CurveOnGrid() = default;
    /// Throws std::invalid_argument on fewer than 2 points, lo >= hi, or
    /// non-finite values.
    CurveOnGrid(double lo, double hi, std::vector<double> values);

    static CurveOnGrid tabulate(double lo, double hi, std::size_t n,
                                const std::function<double(double)>& f);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    std::size_t size() const noexcept { return values_.size(); }
    double step() const noexcept { return (hi_ - lo_) / static_cast<double>(values_.size() - 1); }
    double abscissa(std::size_t i) const noexcept;
    std::vector<double> abscissae() const;

    const std::vector<double>& values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Linear interpolation; clamps to the end values outside [lo, hi].
    double interpolate(double x) const noexcept;

    bool spans(Interval iv, double tol = 1e-9) const noexcept;

private:
    double lo_ = 0.0;
    double hi_ = 1.0;
    std::vector<double> values_;
};

}  // namespace monodrift
