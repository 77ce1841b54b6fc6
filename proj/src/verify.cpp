#include "stadlab/verify.hpp"

#include <algorithm>
#include <cmath>

namespace stadlab {

namespace {

double p1_at(const TriGeom& g, const std::array<int, 3>& tri, const Eigen::VectorXd& full,
             const Vec2& p) {
    const double lam1 = g.grad[1].dot(p - g.v[0]);
    const double lam2 = g.grad[2].dot(p - g.v[0]);
    return full[tri[0]] * (1.0 - lam1 - lam2) + full[tri[1]] * lam1 + full[tri[2]] * lam2;
}

}  // namespace

RellichReport rellich_residual(const ModeField& mode, const VectorFieldSpec& field,
                               const TriMesh& mesh, const OperatorPair& op) {
    RellichReport r;
    r.kind = field.kind();
    const double lambdasq = mode.lambdasq();

    r.lhs = commutator_form(field, mode.vector, lambdasq, mesh, op);

    // Volume term: int (2 Au + (div A) u) f dA, element-wise quadrature with
    // the P1 interpolants of u and f and the constant element gradient.
    const Eigen::VectorXd ufull = op.to_full(mode.vector);
    const Eigen::VectorXd ffull = op.to_full(mode.f);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const TriGeom g = tri_geom(mesh, static_cast<int>(t));
        const auto& tri = mesh.triangles[t];
        Vec2 grad(0.0, 0.0);
        for (int j = 0; j < 3; ++j) grad += ufull[tri[j]] * g.grad[j];
        tri_quadrature(g.v[0], g.v[1], g.v[2], field.quadrature_levels(g.v),
                       [&](const Vec2& p, double wq) {
                           const double u = p1_at(g, tri, ufull, p);
                           const double f = p1_at(g, tri, ffull, p);
                           const double au = field.coeff(p).dot(grad);
                           r.rhs_volume += wq * (2.0 * au + field.divergence(p) * u) * f;
                       });
    }

    // Boundary term: for zero-trace u the tangential derivative vanishes, so
    // (dN u)(Au) = (a . N) (dN u)^2 with the recovered trace g.
    const NormalTrace trace(mode.vector, lambdasq, mode.f, mesh, op);
    for (const auto& q : boundary_quadrature(mesh)) {
        const double g = trace.eval(mesh, q.edge, q.t);
        r.rhs_boundary += q.weight * field.coeff(q.point).dot(q.normal) * g * g;
    }

    r.residual = std::abs(r.lhs - r.rhs_volume - r.rhs_boundary);
    r.scale = std::max({std::abs(r.lhs), std::abs(r.rhs_boundary), 1.0});
    return r;
}

XdxChainReport xdx_chain(const ModeField& mode, const TriMesh& mesh, const OperatorPair& op) {
    XdxChainReport r;
    const double lambdasq = mode.lambdasq();
    const Eigen::VectorXd ufull = op.to_full(mode.vector);
    const Eigen::VectorXd ffull = op.to_full(mode.f);

    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const TriGeom g = tri_geom(mesh, static_cast<int>(t));
        const auto& tri = mesh.triangles[t];
        Vec2 grad(0.0, 0.0);
        for (int j = 0; j < 3; ++j) grad += ufull[tri[j]] * g.grad[j];
        r.grad_x_sq += g.area * grad.x() * grad.x();
        tri_quadrature(g.v[0], g.v[1], g.v[2], 0, [&](const Vec2& p, double wq) {
            const double u = p1_at(g, tri, ufull, p);
            const double f = p1_at(g, tri, ffull, p);
            r.f_term += wq * (2.0 * p.x() * grad.x() + u) * f;
        });
    }

    const NormalTrace trace(mode.vector, lambdasq, mode.f, mesh, op);
    for (const auto& q : boundary_quadrature(mesh)) {
        const double g = trace.eval(mesh, q.edge, q.t);
        const double contrib = q.weight * q.point.x() * q.normal.x() * g * g;
        r.boundary_term += contrib;
        if (q.tag == BoundaryTag::ArcPlus || q.tag == BoundaryTag::ArcMinus)
            r.boundary_term_wing += contrib;
    }

    const double rhs = 0.5 * (r.boundary_term + r.f_term);
    r.discrepancy = std::abs(r.grad_x_sq - rhs) / std::max(r.grad_x_sq, 1.0);
    r.wing_reduction_gap = std::abs(r.boundary_term - r.boundary_term_wing);
    return r;
}

LowerBoundLhs lower_bound_lhs(const ObservableReport& report) {
    LowerBoundLhs t;
    t.normderiv = report.lhs_normderiv;
    t.L2 = report.lhs_L2;
    t.L2bis = report.lhs_L2bis;
    const double l2 = report.lambda * report.lambda;
    t.lambda2_wing_norm = l2 * std::sqrt(std::max(0.0, report.wing_mass));
    return t;
}

double radial_boundary_factor_min(const TriMesh& mesh) {
    double m = 1e300;
    for (const auto& q : boundary_quadrature(mesh)) m = std::min(m, q.point.dot(q.normal));
    return m;
}

}  // namespace stadlab
