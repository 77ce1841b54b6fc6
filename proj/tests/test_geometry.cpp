#include "stadlab/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace stadlab;

TEST_CASE("classify partitions the plane") {
    StadiumGeometry g(2.0, 1.0);
    CHECK(g.classify({0.0, 0.0}) == RegionTag::Rectangle);
    CHECK(g.classify({2.5, 0.3}) == RegionTag::WingPlus);   // 0.5^2 + 0.3^2 = 0.34 <= 1
    CHECK(g.classify({-2.5, 0.3}) == RegionTag::WingMinus);
    CHECK(g.classify({3.2, 0.0}) == RegionTag::Outside);    // 1.2^2 > 1
    CHECK(g.classify({0.0, 1.5}) == RegionTag::Outside);
    // Boundary points resolve to the inside tag.
    CHECK(g.classify({2.0, 1.0}) == RegionTag::Rectangle);
    CHECK(g.classify({3.0, 0.0}) == RegionTag::WingPlus);
    CHECK_THROWS_AS(g.classify({std::nan(""), 0.0}), std::domain_error);
}

TEST_CASE("classify is mirror symmetric") {
    StadiumGeometry g(1.5, 0.7);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dx(-3.0, 3.0), dy(-1.5, 1.5);
    for (int i = 0; i < 1000; ++i) {
        const Vec2 p(dx(rng), dy(rng));
        const RegionTag t = g.classify(p);
        const RegionTag tx = g.classify({-p.x(), p.y()});
        const RegionTag ty = g.classify({p.x(), -p.y()});
        CHECK(ty == t);
        if (t == RegionTag::WingPlus)
            CHECK(tx == RegionTag::WingMinus);
        else if (t == RegionTag::WingMinus)
            CHECK(tx == RegionTag::WingPlus);
        else
            CHECK(tx == t);
    }
}

TEST_CASE("weight is max(|x| - alpha, 0)") {
    StadiumGeometry g(2.0, 1.0);
    CHECK(g.weight({2.5, 0.3}) == doctest::Approx(0.5));
    CHECK(g.weight({1.0, 0.9}) == 0.0);
    CHECK(g.weight({-2.25, 0.1}) == doctest::Approx(0.25));
    CHECK(g.weight({2.0, -1.0}) == 0.0);  // vanishes on the gluing line
    CHECK_THROWS_AS(g.weight({5.0, 0.0}), std::domain_error);
}

TEST_CASE("zone thresholds with lower-zone tie-break") {
    StadiumGeometry g(2.0, 1.0);
    const double lambda = 20.0, delta = 1.0;  // delta/lambda^2 = 0.0025
    CHECK(g.zone({2.001, 0.0}, lambda, delta) == WingZone::I);
    CHECK(g.zone({2.3, 0.0}, lambda, delta) == WingZone::II);
    CHECK(g.zone({2.6, 0.0}, lambda, delta) == WingZone::III);
    // Exact thresholds resolve to the lower zone.
    CHECK(g.zone({2.0025, 0.0}, lambda, delta) == WingZone::I);
    CHECK(g.zone({2.5, 0.0}, lambda, delta) == WingZone::II);
    CHECK_THROWS_AS(g.zone({0.0, 0.0}, lambda, delta), std::domain_error);
    CHECK_THROWS_AS(g.zone({2.3, 0.0}, -1.0, delta), std::invalid_argument);
    CHECK_THROWS_AS(g.zone({2.3, 0.0}, lambda, 0.0), std::invalid_argument);
}

TEST_CASE("boundary normals: sides axis-aligned, arcs radial, unit length") {
    StadiumGeometry g(1.0, 1.0);
    CHECK((g.boundary_normal({0.0, 1.0}) - Vec2(0, 1)).norm() == doctest::Approx(0.0));
    CHECK((g.boundary_normal({0.7, -1.0}) - Vec2(0, -1)).norm() == doctest::Approx(0.0));
    const double s = std::sqrt(0.5);
    CHECK((g.boundary_normal({1.0 + s, s}) - Vec2(s, s)).norm() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK((g.boundary_normal({2.0, 0.0}) - Vec2(1, 0)).norm() == doctest::Approx(0.0));
    CHECK((g.boundary_normal({-2.0, 0.0}) - Vec2(-1, 0)).norm() == doctest::Approx(0.0));
    CHECK_THROWS_AS(g.boundary_normal({0.0, 0.0}), std::domain_error);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> th(-M_PI / 2, M_PI / 2);
    for (int i = 0; i < 1000; ++i) {
        const double t = th(rng);
        const Vec2 p(1.0 + std::cos(t), std::sin(t));
        CHECK(g.boundary_normal(p).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("tangential/normal split of x d/dx") {
    StadiumGeometry g(1.0, 1.0);
    CHECK(g.tangential_normal_split({0.7, 1.0}).q == doctest::Approx(0.0));
    CHECK(g.tangential_normal_split({2.0, 0.0}).q == doctest::Approx(2.0));
    CHECK(g.tangential_normal_split({1.0, 1.0}).q == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("|q| <= 4 w on the arcs (10^4 sampled points)") {
    StadiumGeometry g(1.0, 1.0);
    std::mt19937 rng(20240824u);
    std::uniform_real_distribution<double> th(0.0, M_PI / 2);
    std::bernoulli_distribution side, upper;
    for (int i = 0; i < 10000; ++i) {
        // Bias samples toward the joins (w -> 0) with a squared angle.
        double t = th(rng);
        if (i % 2) t = M_PI / 2 * (1.0 - (1.0 - 2.0 * t / M_PI) * (1.0 - 2.0 * t / M_PI));
        const double sx = side(rng) ? 1.0 : -1.0;
        const double sy = upper(rng) ? 1.0 : -1.0;
        // Pull radially inward by 1e-12 so round-off in sin^2 + cos^2 cannot
        // push the sample outside the (exactly defined) closed stadium.
        const double r = 1.0 - 1e-12;
        const Vec2 p(sx * (1.0 + r * std::sin(t)), sy * r * std::cos(t));
        const double w = g.weight(p);
        const double q = g.tangential_normal_split(p).q;
        CHECK(std::abs(q) <= 4.0 * w + 1e-12);
    }
}

TEST_CASE("constructor validates parameters") {
    CHECK_THROWS_AS(StadiumGeometry(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(StadiumGeometry(1.0, -2.0), std::invalid_argument);
    CHECK(StadiumGeometry(2.0, 1.0).area() == doctest::Approx(8.0 + M_PI));
}
