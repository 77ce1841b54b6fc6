#include "stadlab/study.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace stadlab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("fit_scaling recovers exact power laws") {
    std::vector<double> ls, qs;
    for (double l : {5.0, 8.0, 13.0, 21.0, 34.0}) {
        ls.push_back(l);
        qs.push_back(7.5 * std::pow(l, -4.0));
    }
    const FitResult fit = fit_scaling(ls, qs);
    CHECK(fit.slope == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(std::exp(fit.intercept) == doctest::Approx(7.5).epsilon(1e-12));
    CHECK(fit.residual < 1e-12);
    CHECK(fit.used == 5);
    CHECK(fit.excluded == 0);
}

TEST_CASE("fit_scaling excludes nonpositive samples") {
    const FitResult fit = fit_scaling({2.0, 3.0, 4.0, 5.0}, {4.0, 0.0, 16.0, -1.0});
    CHECK(fit.used == 2);
    CHECK(fit.excluded == 2);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
    // Under two usable points: no fit.
    CHECK(fit_scaling({1.0}, {1.0}).used == 1);
    CHECK(fit_scaling({1.0}, {1.0}).slope == 0.0);
}

TEST_CASE("config round-trips through JSON bit-exactly") {
    StudyConfig c;
    c.alpha = 1.25;
    c.beta = 0.7300000000000001;  // not exactly representable in short decimal
    c.h = 0.034;
    c.refinements = 1;
    c.windows = {{100.0, 5.0}, {M_PI * 37.0, 4.0}};
    c.n_lo = 4;
    c.n_hi = 9;
    c.window_halfwidth = 3.5;
    c.delta = 0.5;
    c.gamma1 = -0.25;
    c.gamma2 = 0.75;
    c.output_dir = "elsewhere";
    const StudyConfig back = config_from_json(to_json(c));
    CHECK(back.alpha == c.alpha);
    CHECK(back.beta == c.beta);
    CHECK(back.h == c.h);
    CHECK(back.refinements == c.refinements);
    REQUIRE(back.windows.size() == 2);
    CHECK(back.windows[1].center == c.windows[1].center);
    CHECK(back.n_lo == c.n_lo);
    CHECK(back.n_hi == c.n_hi);
    CHECK(back.window_halfwidth == c.window_halfwidth);
    CHECK(back.delta == c.delta);
    CHECK(back.gamma1 == c.gamma1);
    CHECK(back.gamma2 == c.gamma2);
    CHECK(back.output_dir == c.output_dir);
    // Serialization itself is reproducible.
    CHECK(to_json(back) == to_json(c));
}

TEST_CASE("config validation rejects bad geometry") {
    StudyConfig c;
    c.gamma1 = 0.5;
    c.gamma2 = -0.5;
    CHECK_THROWS_AS(config_from_json(to_json(c)), std::invalid_argument);
    StudyConfig d;
    d.h = -1.0;
    CHECK_THROWS_AS(config_from_json(to_json(d)), std::invalid_argument);
    CHECK_THROWS(config_from_json("{\"alpha\": 1.0}"));  // missing keys
}

TEST_CASE("resolved_windows: explicit list wins, else bouncing-ball range") {
    StudyConfig c;
    c.windows = {{42.0, 3.0}};
    REQUIRE(c.resolved_windows().size() == 1);
    CHECK(c.resolved_windows()[0].center == 42.0);
    c.windows.clear();
    c.n_lo = 2;
    c.n_hi = 4;
    c.window_halfwidth = 5.0;
    const auto ws = c.resolved_windows();
    REQUIRE(ws.size() == 3);
    CHECK(ws[0].center == doctest::Approx(std::pow(2.5 * M_PI, 2)));
    CHECK(ws[2].center == doctest::Approx(std::pow(4.5 * M_PI, 2)));
    CHECK(ws[1].halfwidth == 5.0);
}

TEST_CASE("scaling CSV: frozen header and 17-digit rows") {
    CHECK(std::string(kScalingCsvHeader) ==
          "lambda,wing_mass,l4_wing_mass,l2_wing_norm,flux_weighted,lhs_normderiv,lhs_L2,"
          "lhs_L2bis,strip_mass,zoneI,zoneII,zoneIII,f_norm,wing_slope,flux_slope");
    ScalingRow r;
    r.lambda = 0.1;  // 0.1 requires all 17 digits
    const std::string text = scaling_csv_text({r});
    CHECK(text.find("0.10000000000000001") != std::string::npos);
    CHECK(text.substr(0, std::string(kScalingCsvHeader).size()) == kScalingCsvHeader);
}

TEST_CASE("scaling_svg is a plot with points and a reference line") {
    std::vector<ScalingRow> rows(3);
    for (int i = 0; i < 3; ++i) {
        rows[i].lambda = 10.0 + 5 * i;
        rows[i].wing_mass = std::pow(rows[i].lambda, -4.0);
    }
    const std::string svg = scaling_svg(rows, "wing_mass", -4.0);
    CHECK(svg.find("<svg") == 0);
    CHECK(std::count(svg.begin(), svg.end(), '\n') > 5);
    CHECK(svg.find("circle") != std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
    CHECK(svg.find("reference slope -4.0") != std::string::npos);
    // Zero-mass rows are skipped, not plotted at -inf.
    rows[1].wing_mass = 0.0;
    const std::string svg2 = scaling_svg(rows, "wing_mass", -4.0);
    CHECK(svg2.find("inf") == std::string::npos);
    CHECK(svg2.find("nan") == std::string::npos);
}

TEST_CASE("run_study writes CSV + SVG and is byte-deterministic") {
    StudyConfig c;
    c.alpha = 1.0;
    c.beta = 1.0;
    c.h = 0.1;
    c.windows = {{30.0, 6.0}};
    c.output_dir = "test_study_out_a";
    const StudyResult a = run_study(c);
    CHECK(!a.rows.empty());
    const std::string csv_a = slurp(a.csv_path);
    CHECK(csv_a.substr(0, std::string(kScalingCsvHeader).size()) == kScalingCsvHeader);
    for (const auto& p : a.svg_paths) CHECK(std::filesystem::exists(p));

    c.output_dir = "test_study_out_b";
    const StudyResult b = run_study(c);
    CHECK(slurp(b.csv_path) == csv_a);

    std::filesystem::remove_all("test_study_out_a");
    std::filesystem::remove_all("test_study_out_b");
}
