#include "stadlab/quasimode.hpp"

#include <doctest.h>

#include <cmath>

using namespace stadlab;

TEST_CASE("sin^4 bump: support, symmetry, and second derivative") {
    CHECK(sin4_bump(-0.5, -0.5, 0.5) == 0.0);
    CHECK(sin4_bump(0.7, -0.5, 0.5) == 0.0);
    CHECK(sin4_bump(0.0, -0.5, 0.5) == doctest::Approx(1.0));
    CHECK(sin4_bump(0.2, -0.5, 0.5) == doctest::Approx(sin4_bump(-0.2, -0.5, 0.5)));
    // Finite-difference check of the closed-form second derivative.
    const double x = 0.13, eps = 1e-5;
    const double fd = (sin4_bump(x + eps, -0.5, 0.5) - 2 * sin4_bump(x, -0.5, 0.5) +
                       sin4_bump(x - eps, -0.5, 0.5)) /
                      (eps * eps);
    CHECK(sin4_bump_d2(x, -0.5, 0.5) == doctest::Approx(fd).epsilon(1e-5));
}

TEST_CASE("analytic ||phi''||/||phi|| ratio") {
    // ||phi||^2 = 35 L / 128 and ||phi''||^2 = 4 pi^4 / L^3 give
    // pi^2 sqrt(512/35) / L^2.
    CHECK(sin4_analytic_ratio(1.0) == doctest::Approx(M_PI * M_PI * std::sqrt(512.0 / 35.0)));
    CHECK(sin4_analytic_ratio(2.0) == doctest::Approx(sin4_analytic_ratio(1.0) / 4.0));
    // Numerical quadrature cross-check of both norms at L = 1.
    const int N = 20000;
    double nphi = 0.0, nd2 = 0.0;
    for (int i = 0; i < N; ++i) {
        const double x = -0.5 + (i + 0.5) / N;
        nphi += sin4_bump(x, -0.5, 0.5) * sin4_bump(x, -0.5, 0.5) / N;
        nd2 += sin4_bump_d2(x, -0.5, 0.5) * sin4_bump_d2(x, -0.5, 0.5) / N;
    }
    CHECK(std::sqrt(nd2 / nphi) == doctest::Approx(sin4_analytic_ratio(1.0)).epsilon(1e-6));
}

TEST_CASE("explicit quasimode: localized, normalized, near-analytic residual") {
    const QuasimodeSpec spec{5, -0.5, 0.5};
    const double h = quasimode_min_resolution(spec, 1.0) / 2.0;
    const TriMesh mesh = build_mesh(MeshDomain::Stadium, 1.0, 1.0, h);
    const OperatorPair op = assemble(mesh);
    const ModeField mode = explicit_quasimode(spec, mesh, op);

    CHECK(op.m_norm(mode.vector) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mode.provenance == Provenance::ExplicitQuasimode);
    // Frequency near the transverse (5+1/2) pi / beta.
    CHECK(mode.lambdasq() == doctest::Approx(std::pow(5.5 * M_PI, 2)).epsilon(2e-2));
    // Measured ||f|| tracks the analytic ||phi''||/||phi|| within 10%.
    CHECK(mode.f_norm ==
          doctest::Approx(sin4_analytic_ratio(1.0)).epsilon(0.10));
    // Fully supported in the rectangle: wing mass is exactly zero.
    CHECK(wing_mass_of_quasimode(mode, mesh, op) == 0.0);
}

TEST_CASE("explicit quasimode rejects an under-resolved mesh") {
    const QuasimodeSpec spec{12, -0.5, 0.5};
    const TriMesh mesh = build_mesh(MeshDomain::Stadium, 1.0, 1.0, 0.05);
    const OperatorPair op = assemble(mesh);
    CHECK(quasimode_min_resolution(spec, 1.0) == doctest::Approx(1.0 / (8.0 * 12.5)));
    CHECK_THROWS_AS(explicit_quasimode(spec, mesh, op), std::invalid_argument);
}

TEST_CASE("mode_from_eigenpair carries a near-zero residual") {
    const TriMesh mesh = build_mesh(MeshDomain::RectangleOnly, 2.0, 1.0, 0.05);
    const OperatorPair op = assemble(mesh);
    const auto pairs = solve_window(mesh, op, {10.0, 8.0}, 10);
    REQUIRE(!pairs.empty());
    const ModeField m = mode_from_eigenpair(pairs.front(), op);
    CHECK(m.lambda == pairs.front().lambda);
    CHECK(m.f_norm < 1e-6 * m.lambdasq());
    CHECK(std::isnan(m.analytic_f_ratio));
}

TEST_CASE("window combinations: residual matches the orthonormal expansion") {
    const TriMesh mesh = build_mesh(MeshDomain::RectangleOnly, 2.0, 1.0, 0.05);
    const OperatorPair op = assemble(mesh);
    const SpectralWindow win{15.0, 10.0};
    auto pairs = solve_window(mesh, op, win, 20);
    REQUIRE(pairs.size() >= 2);
    pairs.resize(2);
    const ModeField m = window_combination(pairs, {3.0, 4.0}, win, op);
    CHECK(op.m_norm(m.vector) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(m.lambdasq() == doctest::Approx(win.center));
    // ||f||^2 = sum c_i^2 (lambda_i^2 - lambda^2)^2 / sum c_i^2.
    const double c[2] = {3.0, 4.0};
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 2; ++i) {
        num += c[i] * c[i] * std::pow(pairs[i].lambdasq - win.center, 2);
        den += c[i] * c[i];
    }
    CHECK(m.f_norm == doctest::Approx(std::sqrt(num / den)).epsilon(1e-8));
    // Validation: mismatched sizes and out-of-window pairs are rejected.
    CHECK_THROWS_AS(window_combination(pairs, {1.0}, win, op), std::invalid_argument);
    CHECK_THROWS_AS(window_combination(pairs, {1.0, 1.0}, {100.0, 1.0}, op),
                    std::invalid_argument);
}
