#include "monodrift/kernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace monodrift {

namespace {

constexpr double kTriweightNorm = 35.0 / 32.0;

}  // namespace

KernelFamily parse_kernel_family(std::string_view name) {
    if (name == "gaussian") return KernelFamily::Gaussian;
    if (name == "triweight") return KernelFamily::Triweight;
    throw std::invalid_argument("unknown kernel '" + std::string(name) +
                                "' (expected gaussian | triweight)");
}

std::string_view to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::Gaussian: return "gaussian";
        case KernelFamily::Triweight: return "triweight";
    }
    return "?";
}

double Kernel::pdf(double u) const noexcept {
    if (family_ == KernelFamily::Gaussian) {
        return std::exp(-0.5 * u * u) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
    }
    if (std::abs(u) >= 1.0) return 0.0;
    const double s = 1.0 - u * u;
    return kTriweightNorm * s * s * s;
}

double Kernel::derivative(double u) const noexcept {
    if (family_ == KernelFamily::Gaussian) return -u * pdf(u);
    if (std::abs(u) >= 1.0) return 0.0;
    const double s = 1.0 - u * u;
    return -6.0 * kTriweightNorm * u * s * s;
}

double Kernel::cdf(double u) const noexcept {
    if (family_ == KernelFamily::Gaussian) {
        return 0.5 * std::erfc(-u / std::numbers::sqrt2);
    }
    if (u <= -1.0) return 0.0;
    if (u >= 1.0) return 1.0;
    // antiderivative of (1 - t^2)^3 is t - t^3 + 3t^5/5 - t^7/7
    const double u2 = u * u;
    const double poly = u * (1.0 + u2 * (-1.0 + u2 * (0.6 - u2 / 7.0)));
    const double v = 0.5 + kTriweightNorm * poly;
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

double Kernel::pdf_scaled(double u, double bandwidth) const {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw std::invalid_argument("kernel bandwidth must be positive and finite");
    }
    return pdf(u / bandwidth) / bandwidth;
}

double Kernel::support_radius() const noexcept {
    return family_ == KernelFamily::Gaussian ? std::numeric_limits<double>::infinity() : 1.0;
}

double Kernel::abs_first_moment() const noexcept {
    // Gaussian: sqrt(2/pi); triweight: 2 * (35/32) * ∫_0^1 y (1-y^2)^3 dy = 35/128
    if (family_ == KernelFamily::Gaussian) {
        return std::numbers::sqrt2 * std::numbers::inv_sqrtpi;
    }
    return 35.0 / 128.0;
}

}  // namespace monodrift
