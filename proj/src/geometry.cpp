#include "stadlab/geometry.hpp"

#include <algorithm>

namespace stadlab {

RegionTag StadiumGeometry::classify(const Vec2& p) const {
    if (!std::isfinite(p.x()) || !std::isfinite(p.y()))
        throw std::domain_error("classify: non-finite coordinates");
    const double ax = std::abs(p.x());
    if (ax <= alpha_ && std::abs(p.y()) <= beta_) return RegionTag::Rectangle;
    if (p.x() > alpha_) {
        const double dx = p.x() - alpha_;
        if (dx * dx + p.y() * p.y() <= beta_ * beta_) return RegionTag::WingPlus;
    } else if (p.x() < -alpha_) {
        const double dx = p.x() + alpha_;
        if (dx * dx + p.y() * p.y() <= beta_ * beta_) return RegionTag::WingMinus;
    }
    return RegionTag::Outside;
}

double StadiumGeometry::weight(const Vec2& p) const {
    if (classify(p) == RegionTag::Outside)
        throw std::domain_error("weight: point outside the stadium");
    return std::max(std::abs(p.x()) - alpha_, 0.0);
}

WingZone StadiumGeometry::zone(const Vec2& p, double lambda, double delta) const {
    const RegionTag tag = classify(p);
    if (tag != RegionTag::WingPlus && tag != RegionTag::WingMinus)
        throw std::domain_error("zone: point not in a wing");
    if (!(lambda > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("zone: lambda, delta must be positive");
    const double w = weight(p);
    // Ties resolve to the lower zone.
    if (w <= delta / (lambda * lambda)) return WingZone::I;
    if (w <= beta_ / 2.0) return WingZone::II;
    return WingZone::III;
}

bool StadiumGeometry::on_boundary(const Vec2& p) const {
    const double tol = snap_tolerance();
    const double ax = std::abs(p.x());
    if (ax <= alpha_ + tol && std::abs(std::abs(p.y()) - beta_) <= tol) return true;
    for (double cx : {alpha_, -alpha_}) {
        const double r = std::hypot(p.x() - cx, p.y());
        if (std::abs(r - beta_) <= tol && (cx > 0 ? p.x() >= alpha_ - tol : p.x() <= -alpha_ + tol))
            return true;
    }
    return false;
}

Vec2 StadiumGeometry::boundary_normal(const Vec2& p) const {
    const double tol = snap_tolerance();
    const double ax = std::abs(p.x());
    // Straight top/bottom sides take precedence; at the joins (|x| = alpha)
    // the radial arc normal coincides with the vertical one.
    if (ax <= alpha_ + tol && std::abs(std::abs(p.y()) - beta_) <= tol)
        return Vec2(0.0, p.y() > 0 ? 1.0 : -1.0);
    for (double cx : {alpha_, -alpha_}) {
        const double dx = p.x() - cx;
        const double r = std::hypot(dx, p.y());
        if (std::abs(r - beta_) <= tol && (cx > 0 ? p.x() >= alpha_ - tol : p.x() <= -alpha_ + tol) &&
            r > 0)
            return Vec2(dx / r, p.y() / r);
    }
    throw std::domain_error("boundary_normal: point not on the boundary");
}

StadiumGeometry::Split StadiumGeometry::tangential_normal_split(const Vec2& p) const {
    const Vec2 n = boundary_normal(p);
    // (x, 0) = p * t + q * n with t the unit tangent (-n_y, n_x).
    Split s;
    s.q = p.x() * n.x();
    s.p = p.x() * (-n.y());
    return s;
}

}  // namespace stadlab
