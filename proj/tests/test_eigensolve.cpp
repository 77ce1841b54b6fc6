#include "stadlab/eigensolve.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace stadlab;

namespace {

// Dirichlet eigenvalues of [-a,a] x [-b,b]: (k pi / 2a)^2 + (m pi / 2b)^2.
std::vector<double> rectangle_spectrum(double a, double b, double lambdasq_max) {
    std::vector<double> vals;
    for (int k = 1;; ++k) {
        const double vx = std::pow(k * M_PI / (2 * a), 2);
        if (vx > lambdasq_max) break;
        for (int m = 1;; ++m) {
            const double v = vx + std::pow(m * M_PI / (2 * b), 2);
            if (v > lambdasq_max) break;
            vals.push_back(v);
        }
    }
    std::sort(vals.begin(), vals.end());
    return vals;
}

}  // namespace

TEST_CASE("rectangle spectrum oracle: first eigenvalues within 0.5%") {
    const TriMesh mesh = build_mesh(MeshDomain::RectangleOnly, 2.0, 1.0, 0.05);
    const OperatorPair op = assemble(mesh);
    const auto exact = rectangle_spectrum(2.0, 1.0, 30.0);
    REQUIRE(exact.size() >= 8);
    const auto pairs = solve_window(mesh, op, {15.0, 15.0}, 60);
    REQUIRE(pairs.size() >= 8);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(pairs[i].lambdasq == doctest::Approx(exact[i]).epsilon(5e-3));
        CHECK(pairs[i].lambdasq >= exact[i]);  // conforming FEM bounds from above
        CHECK(pairs[i].residual_bound < 1e-7);
        // M-normalized vectors.
        CHECK(op.m_norm(pairs[i].vector) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("disk ground state matches the Bessel J0 zero") {
    const TriMesh mesh = build_mesh(MeshDomain::DiskOnly, 1.0, 1.0, 0.04);
    const OperatorPair op = assemble(mesh);
    const double j01 = 2.404825557695773;  // first zero of J0
    const auto pairs = solve_window(mesh, op, {j01 * j01, 3.0}, 4);
    REQUIRE(!pairs.empty());
    // Discrete value overshoots by O(h^2) plus the inscribed-domain shift.
    CHECK(pairs.front().lambdasq == doctest::Approx(j01 * j01).epsilon(1e-2));
}

TEST_CASE("count_below matches the closed-form rectangle count") {
    const TriMesh mesh = build_mesh(MeshDomain::RectangleOnly, 2.0, 1.0, 0.05);
    const OperatorPair op = assemble(mesh);
    for (double cut : {10.0, 20.0, 40.0}) {
        // Discrete eigenvalues sit slightly above the exact ones, so compare
        // against the exact count with a small one-sided slack.
        const int exact_count = static_cast<int>(rectangle_spectrum(2.0, 1.0, cut).size());
        const int got = count_below(op, cut);
        CHECK(got <= exact_count);
        CHECK(got >= exact_count - 2);
    }
}

TEST_CASE("solve_window returns exactly the window content") {
    const TriMesh mesh = build_mesh(MeshDomain::RectangleOnly, 2.0, 1.0, 0.05);
    const OperatorPair op = assemble(mesh);
    const SpectralWindow win{20.0, 6.0};
    const auto pairs = solve_window(mesh, op, win, 40);
    const int expected = count_below(op, win.center + win.halfwidth) -
                         count_below(op, win.center - win.halfwidth);
    CHECK(static_cast<int>(pairs.size()) == expected);
    for (const auto& ep : pairs) {
        CHECK(ep.lambdasq >= win.center - win.halfwidth);
        CHECK(ep.lambdasq <= win.center + win.halfwidth);
    }
    CHECK(std::is_sorted(pairs.begin(), pairs.end(),
                         [](const Eigenpair& a, const Eigenpair& b) {
                             return a.lambdasq < b.lambdasq;
                         }));
    // Pairwise M-orthogonal.
    for (std::size_t i = 0; i < pairs.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            CHECK(std::abs(op.m_inner(pairs[i].vector, pairs[j].vector)) < 1e-8);
}

TEST_CASE("solver is deterministic") {
    const TriMesh mesh = build_mesh(MeshDomain::RectangleOnly, 2.0, 1.0, 0.08);
    const OperatorPair op = assemble(mesh);
    const auto a = solve_window(mesh, op, {15.0, 10.0}, 30);
    const auto b = solve_window(mesh, op, {15.0, 10.0}, 30);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].lambdasq == b[i].lambdasq);
        CHECK((a[i].vector - b[i].vector).norm() == 0.0);
    }
}

TEST_CASE("bouncing_ball_window centers at the transverse frequency") {
    const SpectralWindow w = bouncing_ball_window(3, 1.0, 2.0);
    CHECK(w.center == doctest::Approx(std::pow(3.5 * M_PI, 2)));
    CHECK(w.halfwidth == 2.0);
}

TEST_CASE("cluster_offsets groups near-degenerate values") {
    std::vector<Eigenpair> ps(5);
    ps[0].lambdasq = 1.0;
    ps[1].lambdasq = 1.0 + 1e-9;
    ps[2].lambdasq = 2.0;
    ps[3].lambdasq = 3.0;
    ps[4].lambdasq = 3.0 + 5e-7;
    const auto off = cluster_offsets(ps, 1e-5);
    REQUIRE(off.size() == 4);
    CHECK(off[0] == 0);
    CHECK(off[1] == 2);
    CHECK(off[2] == 3);
    CHECK(off[3] == 5);
}
