#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>

namespace stadlab {

using Vec2 = Eigen::Vector2d;

enum class RegionTag { Rectangle, WingPlus, WingMinus, Outside };

// Wing zones used by the boundary-layer estimates: I is the layer
// 0 <= w <= delta/lambda^2, II the intermediate band up to beta/2,
// III everything beyond.  Threshold ties resolve to the lower zone.
enum class WingZone { I, II, III };

// Bunimovich stadium: rectangle [-alpha,alpha] x [-beta,beta] with two
// radius-beta half-disks glued to its vertical sides.  All queries are
// exact (mesh-free).
class StadiumGeometry {
public:
    StadiumGeometry(double alpha, double beta) : alpha_(alpha), beta_(beta) {
        if (!(alpha > 0.0) || !(beta > 0.0))
            throw std::invalid_argument("StadiumGeometry: alpha, beta must be positive");
    }

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double area() const { return 4.0 * alpha_ * beta_ + M_PI * beta_ * beta_; }

    RegionTag classify(const Vec2& p) const;

    // w = max(|x| - alpha, 0); defined on the closure of S, zero on R.
    double weight(const Vec2& p) const;

    WingZone zone(const Vec2& p, double lambda, double delta) const;

    // Outward unit normal; p must be within snap_tolerance() of the exact
    // boundary.  Axis-aligned on the straight sides, radial from
    // (+-alpha, 0) on the wing arcs.
    Vec2 boundary_normal(const Vec2& p) const;

    // Decompose x d/dx = p d/dl + q d/dN at a boundary point.
    // q = x * N_x; q vanishes on the top/bottom sides and is O(w) on the arcs.
    struct Split {
        double p;
        double q;
    };
    Split tangential_normal_split(const Vec2& p) const;

    double snap_tolerance() const { return 1e-9 * beta_; }

private:
    bool on_boundary(const Vec2& p) const;

    double alpha_;
    double beta_;
};

}  // namespace stadlab
