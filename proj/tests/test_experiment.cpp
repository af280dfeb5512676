#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "monodrift/experiment.hpp"
#include "monodrift/quadrature.hpp"

using namespace monodrift;
namespace fs = std::filesystem;

namespace {

ExperimentSpec small_spec(const char* model = "A") {
    ExperimentSpec spec;
    spec.model = builtin_model(model);
    spec.n_paths = 40;
    spec.repetitions = 6;
    spec.eta_grid = {0.2, 0.35, 0.5};
    const std::vector<double> set{0.05, 0.1, 0.2};
    spec.lh_grid = square_grid(set);
    spec.seed = 42;
    return spec;
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("monodrift_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::vector<std::vector<double>> read_rows(const fs::path& file, std::string& header) {
    std::ifstream in(file);
    std::getline(in, header);
    std::vector<std::vector<double>> rows;
    for (std::string line; std::getline(in, line);) {
        std::vector<double> row;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("bandwidth sets") {
    const auto set = default_bandwidth_set();
    REQUIRE(set.size() == 35);
    CHECK(set.front() == doctest::Approx(0.05));
    CHECK(set.back() == doctest::Approx(1.75));
    const auto g = arithmetic_grid(0.1, 0.2, 4);
    CHECK(g.size() == 4);
    CHECK(g[3] == doctest::Approx(0.7));
    const ExperimentSpec spec;
    CHECK(spec.lh_grid.size() == 35 * 35);
    CHECK(spec.n_paths == 100);
    CHECK(spec.n_steps == 50);
    CHECK(spec.horizon == 5.0);
    CHECK(spec.repetitions == 100);
    CHECK(spec.cfg.eps == 0.01);
}

TEST_CASE("integrated L1 error") {
    const Interval i0{-1.0, 1.0};
    const auto truth = [](double x) { return std::sin(3.0 * x) - x; };
    const auto exact = CurveOnGrid::tabulate(-1.0, 1.0, 201, truth);
    CHECK(integrated_l1_error(exact, truth, i0) == 0.0);
    const auto shifted = CurveOnGrid::tabulate(-1.0, 1.0, 201, [&](double x) { return truth(x) + 0.1; });
    CHECK(integrated_l1_error(shifted, truth, i0) == doctest::Approx(0.2).epsilon(1e-12));

    const auto narrow = CurveOnGrid::tabulate(-0.5, 1.0, 201, truth);
    CHECK_THROWS_AS(integrated_l1_error(narrow, truth, i0), std::invalid_argument);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> amp(0.05, 0.4), freq(2.0, 12.0), phase(0.0, 6.28);
    for (int trial = 0; trial < 5; ++trial) {
        // random offsets crossing zero many times; the reference integrates
        // the piecewise-linear interpolant of the tabulated estimate
        const double a = amp(rng), f = freq(rng), p = phase(rng);
        const auto est = CurveOnGrid::tabulate(-1.0, 1.0, 201, [&](double x) {
            return truth(x) + a * std::sin(f * x + p) + 0.3 * a;
        });
        const auto xs = linspace(-1.0, 1.0, 100001);
        std::vector<double> d(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) d[i] = std::abs(est.interpolate(xs[i]) - truth(xs[i]));
        const double reference = trapezoid(d, xs[1] - xs[0]);
        CHECK(std::abs(integrated_l1_error(est, truth, i0) - reference) < 1e-3);
    }
}

TEST_CASE("spec validation") {
    auto spec = small_spec();
    CHECK_NOTHROW(spec.validate());
    auto bad = spec;
    bad.repetitions = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = spec;
    bad.eta_grid.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = spec;
    bad.lh_grid.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = spec;
    bad.cfg.t0 = 5.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("single repetition gives degenerate statistics") {
    auto spec = small_spec();
    spec.repetitions = 1;
    const auto report = run_experiment(spec);
    REQUIRE(report.per_rep.size() == 1);
    const auto& row = report.per_rep[0];
    CHECK(row.ok);
    CHECK(row.seed == 42);
    CHECK(report.mean_monotone == row.err_monotone);
    CHECK(report.mean_nw == row.err_nw);
    CHECK(report.sd_monotone == 0.0);
    CHECK(report.sd_nw == 0.0);
    CHECK_FALSE(report.sd_defined);
    CHECK(report_to_json(spec, report).find("\"sd_defined\": false") != std::string::npos);
}

TEST_CASE("reports are deterministic and independent of scheduling") {
    auto spec = small_spec();
    spec.threads = 1;
    const auto serial = run_experiment(spec);
    spec.threads = 3;
    const auto pooled = run_experiment(spec);
    CHECK(report_to_json(spec, serial) == report_to_json(spec, pooled));
    CHECK(table1_csv(spec, serial) == table1_csv(spec, pooled));

    // rows recomputed one at a time in reverse order
    for (std::size_t i = spec.repetitions; i-- > 0;) {
        const auto r = run_repetition(spec, i);
        CHECK(r.seed == spec.seed + i);
        CHECK(r.err_monotone == serial.per_rep[i].err_monotone);
        CHECK(r.err_nw == serial.per_rep[i].err_nw);
        CHECK(r.selected_eta == serial.per_rep[i].selected_eta);
        CHECK(r.selected_lh == serial.per_rep[i].selected_lh);
    }

    double m = 0.0, n = 0.0;
    for (const auto& r : serial.per_rep) {
        CHECK(r.ok);
        CHECK(r.err_monotone >= 0.0);
        CHECK(r.err_nw >= 0.0);
        CHECK(std::find(spec.eta_grid.begin(), spec.eta_grid.end(), r.selected_eta) != spec.eta_grid.end());
        CHECK(std::find(spec.lh_grid.begin(), spec.lh_grid.end(), r.selected_lh) != spec.lh_grid.end());
        m += r.err_monotone;
        n += r.err_nw;
    }
    const double reps = static_cast<double>(spec.repetitions);
    m /= reps;
    n /= reps;
    double sm = 0.0, sn = 0.0;
    for (const auto& r : serial.per_rep) {
        sm += (r.err_monotone - m) * (r.err_monotone - m);
        sn += (r.err_nw - n) * (r.err_nw - n);
    }
    CHECK(std::abs(serial.mean_monotone - m) <= 1e-12);
    CHECK(std::abs(serial.mean_nw - n) <= 1e-12);
    CHECK(std::abs(serial.sd_monotone - std::sqrt(sm / (reps - 1))) <= 1e-12);
    CHECK(std::abs(serial.sd_nw - std::sqrt(sn / (reps - 1))) <= 1e-12);
    CHECK(serial.sd_defined);
}

TEST_CASE("different seeds give different reports") {
    auto spec = small_spec();
    spec.repetitions = 2;
    const auto a = run_experiment(spec);
    spec.seed = 43;
    const auto b = run_experiment(spec);
    CHECK(a.per_rep[1].err_nw == b.per_rep[0].err_nw);
    CHECK(a.per_rep[0].err_nw != b.per_rep[0].err_nw);
}

TEST_CASE("failed repetitions") {
    SUBCASE("summaries skip failed rows") {
        ExperimentReport report;
        report.per_rep.resize(4);
        const double mono[] = {0.1, 0.3, 99.0, 0.2};
        for (std::size_t i = 0; i < 4; ++i) {
            report.per_rep[i].index = i;
            report.per_rep[i].ok = i != 2;
            report.per_rep[i].err_monotone = mono[i];
            report.per_rep[i].err_nw = 2 * mono[i];
        }
        report.per_rep[2].error = "boom";
        summarize(report);
        CHECK(report.failed == 1);
        CHECK(report.mean_monotone == doctest::Approx(0.2));
        CHECK(report.mean_nw == doctest::Approx(0.4));
        CHECK(report.sd_monotone == doctest::Approx(0.1));
        CHECK(report.sd_defined);
    }
    SUBCASE("a diverging model aborts the experiment") {
        auto spec = small_spec();
        spec.model = SdeModel{[](double x) { return x * x * x; }, [](double) { return 1.0; }, 3.0, "wild", 1.0};
        spec.horizon = 50.0;
        spec.n_steps = 200;
        spec.repetitions = 3;
        const auto r = run_repetition(spec, 0);
        CHECK_FALSE(r.ok);
        CHECK(r.error.find("path") != std::string::npos);
        CHECK_THROWS_AS(run_experiment(spec), ExperimentFailed);
    }
}

TEST_CASE("JSON and table output") {
    auto spec = small_spec("B");
    spec.repetitions = 2;
    const auto report = run_experiment(spec);
    const auto json = report_to_json(spec, report);
    CHECK(json.find("\"model\": \"B\"") != std::string::npos);
    CHECK(json.find("\"per_rep\"") != std::string::npos);
    CHECK(json.find("\"mean_monotone\"") != std::string::npos);
    const auto csv = table1_csv(spec, report);
    CHECK(csv.rfind("model,repetitions,failed,mean_monotone,sd_monotone,mean_nw,sd_nw\nB,2,0,", 0) == 0);
}

TEST_CASE("figure data") {
    SUBCASE("Model A") {
        const auto dir = scratch_dir("fig_a");
        auto spec = small_spec("A");
        const auto files = emit_figure_data(spec, 5, dir);
        REQUIRE(files.size() == 6);
        CHECK(fs::exists(dir / "figures.gp"));
        for (std::size_t k = 0; k < 5; ++k) {
            std::string header;
            const auto rows = read_rows(dir / ("fig_" + std::to_string(k) + ".csv"), header);
            CHECK(header == "x,truth,estimate");
            REQUIRE(rows.size() == 201);
            CHECK(rows[100][0] == 0.0);
            CHECK(rows[100][1] == 0.0);
            for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][2] < rows[i - 1][2]);
        }
        std::ifstream gp(dir / "figures.gp");
        const std::string script((std::istreambuf_iterator<char>(gp)), {});
        CHECK(script.find("fig_4.csv") != std::string::npos);
        fs::remove_all(dir);
    }
    SUBCASE("Model B truth column") {
        const auto dir = scratch_dir("fig_b");
        auto spec = small_spec("B");
        emit_figure_data(spec, 1, dir);
        std::string header;
        const auto rows = read_rows(dir / "fig_0.csv", header);
        REQUIRE(rows.size() == 201);
        CHECK(rows.back()[0] == 1.0);
        CHECK(rows.back()[1] == doctest::Approx(std::sin(1.25) - 1.5).epsilon(1e-15));
        CHECK(rows.back()[1] == doctest::Approx(-0.5510).epsilon(1e-4));
        fs::remove_all(dir);
    }
    SUBCASE("more curves than repetitions") {
        auto spec = small_spec();
        CHECK_THROWS_AS(emit_figure_data(spec, 7, scratch_dir("fig_c")), std::invalid_argument);
    }
}
