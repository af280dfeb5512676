#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace monodrift {

/// dX = drift(X) dt + vol(X) dW started at x0. slope_bound is a constant
/// m_a > 0 with drift' <= -m_a on the working interval.
struct SdeModel {
    std::function<double(double)> drift;
    std::function<double(double)> vol;
    double x0 = 0.0;
    std::string label;
    double slope_bound = 0.0;
};

/// "A": drift -x. "B": drift sin(5x/4) - 3x/2. Both with unit volatility
/// and x0 = 0.5. Throws std::invalid_argument listing the valid names.
SdeModel builtin_model(std::string_view name);

class SimulationDiverged : public std::runtime_error {
public:
    SimulationDiverged(std::size_t path, std::size_t step);
    std::size_t path() const noexcept { return path_; }

private:
    std::size_t path_;
};

class HittingBudgetExhausted : public std::runtime_error {
public:
    HittingBudgetExhausted(std::size_t found, std::size_t wanted, std::size_t budget);
};

/// N paths observed on the uniform grid {kT/n ; k = 0..n}, row-major.
class PathBundle {
public:
    PathBundle() = default;
    PathBundle(std::size_t n_paths, std::size_t n_steps, double horizon, std::uint64_t seed,
               std::vector<double> values);

    std::size_t n_paths() const noexcept { return n_paths_; }
    std::size_t n_steps() const noexcept { return n_steps_; }
    double horizon() const noexcept { return horizon_; }
    double dt() const noexcept { return horizon_ / static_cast<double>(n_steps_); }
    std::uint64_t seed() const noexcept { return seed_; }

    std::span<const double> path(std::size_t i) const noexcept {
        return {values_.data() + i * (n_steps_ + 1), n_steps_ + 1};
    }
    std::span<double> path(std::size_t i) noexcept {
        return {values_.data() + i * (n_steps_ + 1), n_steps_ + 1};
    }
    double at(std::size_t i, std::size_t k) const noexcept { return values_[i * (n_steps_ + 1) + k]; }
    const std::vector<double>& values() const noexcept { return values_; }

    friend bool operator==(const PathBundle&, const PathBundle&) = default;

private:
    std::size_t n_paths_ = 0;
    std::size_t n_steps_ = 0;
    double horizon_ = 0.0;
    std::uint64_t seed_ = 0;
    std::vector<double> values_;
};

/// Euler–Maruyama on the observation grid. Path i draws from its own stream
/// keyed by (seed, i), so a path does not depend on how many others exist.
PathBundle simulate_copies(const SdeModel& model, std::size_t n_paths, std::size_t n_steps,
                           double horizon, std::uint64_t seed);

struct LongPathCopies {
    PathBundle copies;
    std::vector<std::size_t> start_indices;  // grid index of each copy on the long path
    std::vector<double> long_path;
};

/// Cuts n_copies segments from one long trajectory: copy 1 starts at 0, copy
/// i starts at the first grid crossing of x0 after start_{i-1} + n_steps.
/// max_steps = 0 selects the default budget 500 * n_copies * n_steps.
LongPathCopies extract_copies_detailed(const SdeModel& model, std::size_t n_copies,
                                       std::size_t n_steps, double horizon, std::uint64_t seed,
                                       std::size_t max_steps = 0);

PathBundle extract_copies_from_long_path(const SdeModel& model, std::size_t n_copies,
                                         std::size_t n_steps, double horizon,
                                         std::uint64_t seed, std::size_t max_steps = 0);

}  // namespace monodrift
