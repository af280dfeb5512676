#include "monodrift/curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "monodrift/quadrature.hpp"

namespace monodrift {

CurveOnGrid::CurveOnGrid(double lo, double hi, std::vector<double> values)
    : lo_(lo), hi_(hi), values_(std::move(values)) {
    if (values_.size() < 2) throw std::invalid_argument("curve needs at least two points");
    if (!(lo_ < hi_)) throw std::invalid_argument("curve requires lo < hi");
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("curve contains a non-finite value");
    }
}

CurveOnGrid CurveOnGrid::tabulate(double lo, double hi, std::size_t n,
                                  const std::function<double(double)>& f) {
    auto xs = linspace(lo, hi, n);
    std::vector<double> vs(n);
    std::transform(xs.begin(), xs.end(), vs.begin(), f);
    return CurveOnGrid(lo, hi, std::move(vs));
}

double CurveOnGrid::abscissa(std::size_t i) const noexcept {
    const double t = static_cast<double>(i) / static_cast<double>(values_.size() - 1);
    return lo_ * (1.0 - t) + hi_ * t;
}

std::vector<double> CurveOnGrid::abscissae() const { return linspace(lo_, hi_, values_.size()); }

double CurveOnGrid::interpolate(double x) const noexcept {
    if (x <= lo_) return values_.front();
    if (x >= hi_) return values_.back();
    const double pos = (x - lo_) / step();
    auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= values_.size()) return values_.back();
    const double t = pos - static_cast<double>(i);
    return values_[i] + t * (values_[i + 1] - values_[i]);
}

bool CurveOnGrid::spans(Interval iv, double tol) const noexcept {
    return std::abs(lo_ - iv.lo) <= tol && std::abs(hi_ - iv.hi) <= tol;
}

}  // namespace monodrift
