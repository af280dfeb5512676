#pragma once

#include <string>
#include <string_view>

namespace monodrift {

enum class KernelFamily { Gaussian, Triweight };

KernelFamily parse_kernel_family(std::string_view name);
std::string_view to_string(KernelFamily family);

/// Symmetric smoothing kernel K together with its derivative and its
/// distribution function 𝒦(w) = ∫_{-∞}^{w} K(y) dy.
///
/// The bandwidth is not part of the kernel; scaled evaluations take it per
/// call so one instance serves every smoothing stage.
class Kernel {
public:
    constexpr explicit Kernel(KernelFamily family = KernelFamily::Gaussian) noexcept
        : family_(family) {}

    constexpr KernelFamily family() const noexcept { return family_; }

    double pdf(double u) const noexcept;
    double derivative(double u) const noexcept;
    double cdf(double u) const noexcept;

    /// (1/bw) K(u/bw). Throws std::invalid_argument unless bw > 0.
    double pdf_scaled(double u, double bandwidth) const;

    /// Half-width of the support; +inf for the Gaussian.
    double support_radius() const noexcept;

    /// ∫ |y| K(y) dy.
    double abs_first_moment() const noexcept;

    friend constexpr bool operator==(Kernel, Kernel) = default;

private:
    KernelFamily family_;
};

}  // namespace monodrift
