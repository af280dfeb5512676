#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "monodrift/paths_io.hpp"
#include "monodrift/sde.hpp"
#include "oracles.hpp"

using namespace monodrift;

TEST_CASE("builtin models") {
    const auto a = builtin_model("A");
    CHECK(a.drift(1.0) == -1.0);
    CHECK(a.drift(-1.0) == 1.0);
    CHECK(a.x0 == 0.5);
    CHECK(a.vol(0.3) == 1.0);
    CHECK(a.slope_bound == 1.0);

    const auto b = builtin_model("B");
    CHECK(b.drift(0.0) == 0.0);
    CHECK(b.x0 == 0.5);

    // -a'(x) = 3/2 - (5/4) cos(5x/4) minimized on a fine grid over two periods
    double smallest = 1e9;
    for (int i = -200000; i <= 200000; ++i) {
        const double x = i * 1e-4;
        smallest = std::min(smallest, 1.5 - 1.25 * std::cos(1.25 * x));
    }
    CHECK(b.slope_bound == doctest::Approx(smallest).epsilon(1e-9));
    CHECK(b.slope_bound == 0.25);

    try {
        builtin_model("C");
        FAIL("expected an error");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("A") != std::string::npos);
        CHECK(msg.find("B") != std::string::npos);
    }
}

TEST_CASE("built-in drifts decrease at least at the slope bound on the working interval") {
    for (const char* name : {"A", "B"}) {
        const auto m = builtin_model(name);
        for (int i = 0; i < 400; ++i) {
            const double y = -1.02 + 2.04 * i / 400.0;
            for (int j = i + 1; j <= 400; j += 37) {
                const double x = -1.02 + 2.04 * j / 400.0;
                CHECK(m.drift(x) < m.drift(y));
                CHECK(m.drift(x) - m.drift(y) <= -m.slope_bound * (x - y) + 1e-12);
            }
        }
    }
}

TEST_CASE("deterministic dynamics") {
    SUBCASE("no dynamics keeps every row at x0") {
        const auto model = oracle::deterministic_model([](double) { return 0.0; }, 0.5);
        const auto paths = simulate_copies(model, 4, 20, 2.0, 3);
        for (double v : paths.values()) CHECK(v == 0.5);
    }
    SUBCASE("linear decay follows the closed-form Euler recursion") {
        const auto model = oracle::deterministic_model([](double x) { return -x; }, 0.5);
        const auto paths = simulate_copies(model, 2, 50, 5.0, 3);
        for (std::size_t k = 0; k <= 50; ++k) {
            CHECK(paths.at(1, k) == doctest::Approx(0.5 * std::pow(0.9, k)).epsilon(1e-13));
        }
    }
}

TEST_CASE("Model A moments") {
    const auto a = builtin_model("A");
    SUBCASE("variance at T") {
        const auto paths = simulate_copies(a, 10000, 50, 5.0, 21);
        double m = 0.0, s = 0.0;
        for (std::size_t i = 0; i < paths.n_paths(); ++i) m += paths.at(i, 50);
        m /= 1e4;
        for (std::size_t i = 0; i < paths.n_paths(); ++i) s += std::pow(paths.at(i, 50) - m, 2);
        const double var = s / (1e4 - 1);
        const double exact = 0.5 * (1.0 - std::exp(-10.0));
        CHECK(std::abs(var - exact) <= 0.1 * exact);
    }
    SUBCASE("mean at T on a fine grid") {
        const auto paths = simulate_copies(a, 10000, 500, 5.0, 22);
        double m = 0.0;
        for (std::size_t i = 0; i < paths.n_paths(); ++i) m += paths.at(i, 500);
        m /= 1e4;
        const double se = std::sqrt(0.5 / 1e4);
        CHECK(std::abs(m - 0.5 * std::exp(-5.0)) <= 3.0 * se);
    }
}

TEST_CASE("reproducible and independent streams") {
    const auto a = builtin_model("A");
    const auto p1 = simulate_copies(a, 10, 50, 5.0, 99);
    const auto p2 = simulate_copies(a, 10, 50, 5.0, 99);
    CHECK(p1 == p2);
    CHECK(simulate_copies(a, 10, 50, 5.0, 100).values() != p1.values());

    // a path does not depend on the number of paths simulated with it
    const auto few = simulate_copies(a, 3, 50, 5.0, 99);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::equal(few.path(i).begin(), few.path(i).end(), p1.path(i).begin()));
    }

    const auto two = simulate_copies(a, 2, 10000, 100.0, 5);
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t k = 0; k < 10000; ++k) {
        const double x = two.at(0, k + 1) - two.at(0, k);
        const double y = two.at(1, k + 1) - two.at(1, k);
        sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
    }
    const double n = 10000.0;
    const double rho = (sxy - sx * sy / n) / std::sqrt((sxx - sx * sx / n) * (syy - sy * sy / n));
    CHECK(std::abs(rho) < 0.05);
}

TEST_CASE("divergence names the path") {
    SdeModel wild{[](double x) { return x * x * x; }, [](double) { return 1.0; }, 3.0, "wild", 1.0};
    try {
        simulate_copies(wild, 3, 200, 50.0, 1);
        FAIL("expected divergence");
    } catch (const SimulationDiverged& e) {
        CHECK(e.path() == 0);
        CHECK(std::string(e.what()).find("path 0") != std::string::npos);
    }
}

TEST_CASE("invalid dimensions") {
    const auto a = builtin_model("A");
    CHECK_THROWS_AS(simulate_copies(a, 0, 10, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(simulate_copies(a, 1, 0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(simulate_copies(a, 1, 10, 0.0, 1), std::invalid_argument);
}

TEST_CASE("copies from one long path") {
    const auto a = builtin_model("A");
    SUBCASE("shape") {
        const auto copies = extract_copies_from_long_path(a, 3, 50, 5.0, 4);
        CHECK(copies.n_paths() == 3);
        CHECK(copies.n_steps() == 50);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(copies.path(i).size() == 51);
            CHECK(copies.at(i, 0) == 0.5);
        }
    }
    SUBCASE("start indices agree with an independent rescan of the long path") {
        const std::size_t n = 50;
        const auto r = extract_copies_detailed(a, 2, n, 5.0, 8);
        REQUIRE(r.start_indices.size() == 2);
        CHECK(r.start_indices[0] == 0);
        CHECK(r.start_indices[1] > r.start_indices[0]);
        CHECK(r.start_indices[1] - r.start_indices[0] >= n);

        std::size_t expected = 0;
        for (std::size_t k = n + 1; k < r.long_path.size(); ++k) {
            const double before = r.long_path[k - 1] - 0.5, after = r.long_path[k] - 0.5;
            if ((before < 0.0 && after >= 0.0) || (before >= 0.0 && after < 0.0)) {
                expected = k;
                break;
            }
        }
        CHECK(r.start_indices[1] == expected);
        for (std::size_t k = 1; k <= n; ++k) {
            CHECK(r.copies.at(1, k) == r.long_path[expected + k]);
        }
    }
    SUBCASE("many copies keep increasing starts") {
        const auto r = extract_copies_detailed(a, 20, 50, 5.0, 9);
        for (std::size_t i = 1; i < 20; ++i) {
            CHECK(r.start_indices[i] >= r.start_indices[i - 1] + 50);
        }
    }
    SUBCASE("no return to x0 exhausts the budget") {
        const auto decay = oracle::deterministic_model([](double x) { return -x; }, 0.5);
        CHECK_THROWS_AS(extract_copies_from_long_path(decay, 3, 50, 5.0, 1), HittingBudgetExhausted);
    }
    SUBCASE("budget is configurable") {
        CHECK_THROWS_AS(extract_copies_from_long_path(a, 5, 50, 5.0, 1, 120), HittingBudgetExhausted);
    }
}

TEST_CASE("path CSV round trip is value exact") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> mag(-300.0, 300.0);
    std::normal_distribution<double> z;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n_paths = 1 + trial % 4, n_steps = 1 + trial % 7;
        std::vector<double> v(n_paths * (n_steps + 1));
        for (auto& x : v) x = z(rng) * std::pow(10.0, mag(rng) / 10.0);
        const PathBundle paths(n_paths, n_steps, 0.1 + trial, 1000 + trial, v);
        std::stringstream ss;
        write_paths_csv(ss, paths);
        CHECK(read_paths_csv(ss) == paths);
    }
    const auto sim = simulate_copies(builtin_model("B"), 5, 30, 5.0, 77);
    std::stringstream ss;
    write_paths_csv(ss, sim);
    CHECK(ss.str().rfind("T=5,n_steps=30,n_paths=5,seed=77\n", 0) == 0);
    CHECK(read_paths_csv(ss) == sim);
}

TEST_CASE("malformed path CSV") {
    std::stringstream bad_header("T=5,n=3\n1,2,3,4\n");
    CHECK_THROWS_AS(read_paths_csv(bad_header), FormatError);
    std::stringstream short_row("T=5,n_steps=3,n_paths=1,seed=0\n1,2,3\n");
    CHECK_THROWS_AS(read_paths_csv(short_row), FormatError);
    std::stringstream bad_number("T=5,n_steps=1,n_paths=1,seed=0\n1,abc\n");
    CHECK_THROWS_AS(read_paths_csv(bad_number), FormatError);
}
