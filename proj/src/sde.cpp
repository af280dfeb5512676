#include "monodrift/sde.hpp"

#include <cmath>
#include <random>

namespace monodrift {

namespace {

// Stream tag for the long trajectory; path streams use their index.
constexpr std::uint64_t kLongPathStream = 0xffffffffffffull;

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

void check_dims(std::size_t n_paths, std::size_t n_steps, double horizon) {
    if (n_paths < 1) throw std::invalid_argument("need at least one path");
    if (n_steps < 1) throw std::invalid_argument("need at least one time step");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("time horizon must be positive");
    }
}

class EulerStepper {
public:
    EulerStepper(const SdeModel& model, double dt) : model_(model), dt_(dt), sqrt_dt_(std::sqrt(dt)) {}

    double operator()(double x, std::mt19937_64& rng) {
        return x + model_.drift(x) * dt_ + model_.vol(x) * sqrt_dt_ * normal_(rng);
    }

private:
    const SdeModel& model_;
    double dt_;
    double sqrt_dt_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace

SimulationDiverged::SimulationDiverged(std::size_t path, std::size_t step)
    : std::runtime_error("simulation diverged on path " + std::to_string(path) + " at step " +
                         std::to_string(step)),
      path_(path) {}

HittingBudgetExhausted::HittingBudgetExhausted(std::size_t found, std::size_t wanted,
                                               std::size_t budget)
    : std::runtime_error("hitting-time budget of " + std::to_string(budget) +
                         " steps exhausted after " + std::to_string(found) + " of " +
                         std::to_string(wanted) + " copies") {}

SdeModel builtin_model(std::string_view name) {
    if (name == "A") {
        return {[](double x) { return -x; }, [](double) { return 1.0; }, 0.5, "A", 1.0};
    }
    if (name == "B") {
        return {[](double x) { return std::sin(1.25 * x) - 1.5 * x; }, [](double) { return 1.0; },
                0.5, "B", 0.25};
    }
    throw std::invalid_argument("unknown model '" + std::string(name) + "' (valid: A, B)");
}

PathBundle::PathBundle(std::size_t n_paths, std::size_t n_steps, double horizon,
                       std::uint64_t seed, std::vector<double> values)
    : n_paths_(n_paths), n_steps_(n_steps), horizon_(horizon), seed_(seed),
      values_(std::move(values)) {
    check_dims(n_paths, n_steps, horizon);
    if (values_.size() != n_paths_ * (n_steps_ + 1)) {
        throw std::invalid_argument("path bundle size does not match its dimensions");
    }
}

PathBundle simulate_copies(const SdeModel& model, std::size_t n_paths, std::size_t n_steps,
                           double horizon, std::uint64_t seed) {
    check_dims(n_paths, n_steps, horizon);
    const std::size_t width = n_steps + 1;
    std::vector<double> values(n_paths * width);
    for (std::size_t i = 0; i < n_paths; ++i) {
        auto rng = make_stream(seed, i);
        EulerStepper step(model, horizon / static_cast<double>(n_steps));
        double* row = values.data() + i * width;
        row[0] = model.x0;
        for (std::size_t k = 0; k < n_steps; ++k) {
            row[k + 1] = step(row[k], rng);
            if (!std::isfinite(row[k + 1])) throw SimulationDiverged(i, k + 1);
        }
    }
    return PathBundle(n_paths, n_steps, horizon, seed, std::move(values));
}

LongPathCopies extract_copies_detailed(const SdeModel& model, std::size_t n_copies,
                                       std::size_t n_steps, double horizon, std::uint64_t seed,
                                       std::size_t max_steps) {
    check_dims(n_copies, n_steps, horizon);
    const std::size_t budget = max_steps == 0 ? 500 * n_copies * n_steps : max_steps;

    auto rng = make_stream(seed, kLongPathStream);
    EulerStepper step(model, horizon / static_cast<double>(n_steps));
    std::vector<double> path{model.x0};
    auto extend_to = [&](std::size_t index) {
        while (path.size() <= index) {
            if (path.size() > budget) return false;
            const double next = step(path.back(), rng);
            if (!std::isfinite(next)) throw SimulationDiverged(0, path.size());
            path.push_back(next);
        }
        return true;
    };

    std::vector<std::size_t> starts{0};
    while (starts.size() < n_copies) {
        // first sign change of X - x0 on a grid pair (k-1, k) with k-1 >= previous start + n
        std::size_t k = starts.back() + n_steps + 1;
        for (;; ++k) {
            if (!extend_to(k)) throw HittingBudgetExhausted(starts.size(), n_copies, budget);
            if ((path[k - 1] < model.x0) != (path[k] < model.x0)) break;
        }
        starts.push_back(k);
    }
    if (!extend_to(starts.back() + n_steps)) {
        throw HittingBudgetExhausted(starts.size() - 1, n_copies, budget);
    }

    const std::size_t width = n_steps + 1;
    std::vector<double> values(n_copies * width);
    for (std::size_t i = 0; i < n_copies; ++i) {
        std::copy_n(path.begin() + static_cast<std::ptrdiff_t>(starts[i]), width,
                    values.begin() + static_cast<std::ptrdiff_t>(i * width));
        values[i * width] = model.x0;
    }
    return {PathBundle(n_copies, n_steps, horizon, seed, std::move(values)), std::move(starts),
            std::move(path)};
}

PathBundle extract_copies_from_long_path(const SdeModel& model, std::size_t n_copies,
                                         std::size_t n_steps, double horizon,
                                         std::uint64_t seed, std::size_t max_steps) {
    return extract_copies_detailed(model, n_copies, n_steps, horizon, seed, max_steps).copies;
}

}  // namespace monodrift
