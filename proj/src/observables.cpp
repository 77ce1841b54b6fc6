#include "stadlab/observables.hpp"

#include <Eigen/SparseCholesky>

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace stadlab {

namespace {

double p1_value(const TriGeom& g, const std::array<int, 3>& tri, const Eigen::VectorXd& full,
                const Vec2& p) {
    const double lam1 = g.grad[1].dot(p - g.v[0]);
    const double lam2 = g.grad[2].dot(p - g.v[0]);
    return full[tri[0]] * (1.0 - lam1 - lam2) + full[tri[1]] * lam1 + full[tri[2]] * lam2;
}

constexpr int kSplitLevels = 3;  // 64 sub-triangles for straddling elements

}  // namespace

double region_mass(const Eigen::VectorXd& u_interior,
                   const std::function<bool(const Vec2&)>& predicate, const TriMesh& mesh,
                   const OperatorPair& op) {
    const Eigen::VectorXd full = op.to_full(u_interior);
    double mass = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const TriGeom g = tri_geom(mesh, static_cast<int>(t));
        const Vec2 centroid = (g.v[0] + g.v[1] + g.v[2]) / 3.0;
        const bool c0 = predicate(g.v[0]);
        const bool unanimous =
            c0 == predicate(g.v[1]) && c0 == predicate(g.v[2]) && c0 == predicate(centroid);
        const int level = unanimous ? 0 : kSplitLevels;
        tri_quadrature(g.v[0], g.v[1], g.v[2], level, [&](const Vec2& p, double wq) {
            if (!predicate(p)) return;
            const double u = p1_value(g, mesh.triangles[t], full, p);
            mass += wq * u * u;
        });
    }
    return mass;
}

double strip_mass(const Eigen::VectorXd& u_interior, double g1, double g2, const TriMesh& mesh,
                  const OperatorPair& op) {
    if (!(-mesh.alpha <= g1 && g1 < g2 && g2 <= mesh.alpha))
        throw std::invalid_argument("strip_mass: need -alpha <= g1 < g2 <= alpha");
    return region_mass(
        u_interior,
        [&](const Vec2& p) {
            return std::abs(p.y()) <= mesh.beta && std::abs(p.x()) <= mesh.alpha &&
                   (p.x() <= g1 || p.x() >= g2);
        },
        mesh, op);
}

NormalTrace::NormalTrace(const Eigen::VectorXd& u_interior, double lambdasq,
                         const Eigen::VectorXd& f, const TriMesh& mesh, const OperatorPair& op) {
    if (mesh.boundary_edges.empty()) throw std::runtime_error("NormalTrace: empty boundary");
    const int nv = op.n_vertices();

    // 1D boundary mass matrix over the polygonal boundary edges.
    std::vector<int> bidx(nv, -1);
    std::vector<int> bverts;
    for (const auto& e : mesh.boundary_edges)
        for (int v : {e.a, e.b})
            if (bidx[v] < 0) {
                bidx[v] = static_cast<int>(bverts.size());
                bverts.push_back(v);
            }
    const int nb = static_cast<int>(bverts.size());

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(4 * mesh.boundary_edges.size());
    for (const auto& e : mesh.boundary_edges) {
        const double len = (mesh.vertices[e.b] - mesh.vertices[e.a]).norm();
        const int ia = bidx[e.a], ib = bidx[e.b];
        trips.emplace_back(ia, ia, len / 3.0);
        trips.emplace_back(ib, ib, len / 3.0);
        trips.emplace_back(ia, ib, len / 6.0);
        trips.emplace_back(ib, ia, len / 6.0);
    }
    Eigen::SparseMatrix<double> B(nb, nb);
    B.setFromTriplets(trips.begin(), trips.end());

    const Eigen::VectorXd ufull = op.to_full(u_interior);
    const Eigen::VectorXd ffull = op.to_full(f);
    const Eigen::VectorXd rfull = op.Kfull * ufull - lambdasq * (op.Mfull * ufull) -
                                  op.Mfull * ffull;
    Eigen::VectorXd rhs(nb);
    for (int i = 0; i < nb; ++i) rhs[i] = rfull[bverts[i]];

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(B);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("NormalTrace: singular boundary mass");
    const Eigen::VectorXd g = ldlt.solve(rhs);

    value_of_vertex_.assign(nv, 0.0);
    for (int i = 0; i < nb; ++i) value_of_vertex_[bverts[i]] = g[i];
}

double NormalTrace::at_vertex(int vertex) const { return value_of_vertex_[vertex]; }

double NormalTrace::eval(const TriMesh& mesh, int edge, double t) const {
    const auto& e = mesh.boundary_edges[edge];
    return (1.0 - t) * value_of_vertex_[e.a] + t * value_of_vertex_[e.b];
}

double raw_normal_trace(const Eigen::VectorXd& u_interior, const TriMesh& mesh,
                        const OperatorPair& op, int edge, const Vec2& normal) {
    const auto& e = mesh.boundary_edges[edge];
    const Eigen::VectorXd full = op.to_full(u_interior);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        int hits = 0;
        for (int j = 0; j < 3; ++j)
            if (tri[j] == e.a || tri[j] == e.b) ++hits;
        if (hits == 2) return element_gradient(mesh, full, static_cast<int>(t)).dot(normal);
    }
    throw std::runtime_error("raw_normal_trace: edge has no adjacent triangle");
}

double weighted_flux(const Eigen::VectorXd& u_interior, double lambdasq, const Eigen::VectorXd& f,
                     const TriMesh& mesh, const OperatorPair& op) {
    const NormalTrace trace(u_interior, lambdasq, f, mesh, op);
    double flux = 0.0;
    for (const auto& q : boundary_quadrature(
             mesh, std::vector<BoundaryTag>{BoundaryTag::ArcPlus, BoundaryTag::ArcMinus})) {
        const double w = std::max(std::abs(q.point.x()) - mesh.alpha, 0.0);
        const double g = trace.eval(mesh, q.edge, q.t);
        flux += q.weight * w * g * g;
    }
    return flux;
}

GradientIdentity gradient_identity_report(const Eigen::VectorXd& u_interior, double lambdasq,
                                          const Eigen::VectorXd& f, const OperatorPair& op,
                                          double s) {
    GradientIdentity gi;
    gi.grad_norm_sq = u_interior.dot(op.K * u_interior);
    const double usq = u_interior.dot(op.M * u_interior);
    const double fu = f.dot(op.M * u_interior);
    gi.rhs = lambdasq * usq + fu;
    gi.discrepancy = std::abs(gi.grad_norm_sq - gi.rhs) / std::max(gi.grad_norm_sq, 1e-300);
    const double lambda = std::sqrt(lambdasq);
    const double fsq = f.dot(op.M * f);
    const double denom = std::pow(lambda, std::max(2.0, s)) * usq + std::pow(lambda, -s) * fsq;
    gi.implied_Cs = denom > 0 ? gi.grad_norm_sq / denom : 0.0;
    return gi;
}

ObservableReport observe(const ModeField& mode, const TriMesh& mesh, const OperatorPair& op,
                         const ObserveParams& params) {
    ObservableReport r;
    r.lambda = mode.lambda;
    r.f_norm = mode.f_norm;
    const double lambdasq = mode.lambdasq();
    const Eigen::VectorXd full = op.to_full(mode.vector);

    const double t_zone1 = params.delta / lambdasq;
    const double t_zone2 = mesh.beta / 2.0;

    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const TriGeom g = tri_geom(mesh, static_cast<int>(t));
        const auto& tri = mesh.triangles[t];
        const Vec2 centroid = (g.v[0] + g.v[1] + g.v[2]) / 3.0;
        const bool wing = std::abs(centroid.x()) > mesh.alpha;

        // Subdivide elements cut by a zone threshold or a strip edge.
        int level = 0;
        if (wing) {
            double wmin = 1e300, wmax = -1e300;
            for (const auto& v : g.v) {
                const double w = std::abs(v.x()) - mesh.alpha;
                wmin = std::min(wmin, w);
                wmax = std::max(wmax, w);
            }
            wmin = std::max(wmin, 0.0);
            if ((wmin < t_zone1 && wmax > t_zone1) || (wmin < t_zone2 && wmax > t_zone2))
                level = kSplitLevels;
        } else {
            double xmin = 1e300, xmax = -1e300;
            for (const auto& v : g.v) {
                xmin = std::min(xmin, v.x());
                xmax = std::max(xmax, v.x());
            }
            if ((xmin < params.strip_g1 && xmax > params.strip_g1) ||
                (xmin < params.strip_g2 && xmax > params.strip_g2))
                level = kSplitLevels;
        }

        tri_quadrature(g.v[0], g.v[1], g.v[2], level, [&](const Vec2& p, double wq) {
            const double u = p1_value(g, tri, full, p);
            const double m = wq * u * u;
            r.total_mass += m;
            if (wing) {
                r.wing_mass += m;
                if (centroid.x() > 0)
                    r.wing_mass_plus += m;
                else
                    r.wing_mass_minus += m;
                const double w = std::max(std::abs(p.x()) - mesh.alpha, 0.0);
                if (w <= t_zone1)
                    r.zoneI += m;
                else if (w <= t_zone2)
                    r.zoneII += m;
                else
                    r.zoneIII += m;
            } else if (p.x() <= params.strip_g1 || p.x() >= params.strip_g2) {
                r.strip_mass += m;
            }
        });
    }

    r.grad_norm_sq = mode.vector.dot(op.K * mode.vector);

    const NormalTrace trace(mode.vector, lambdasq, mode.f, mesh, op);
    for (const auto& q : boundary_quadrature(mesh)) {
        const double g = trace.eval(mesh, q.edge, q.t);
        r.flux_unweighted += q.weight * g * g;
        if (q.tag == BoundaryTag::ArcPlus || q.tag == BoundaryTag::ArcMinus) {
            const double w = std::max(std::abs(q.point.x()) - mesh.alpha, 0.0);
            r.flux_weighted += q.weight * w * g * g;
        }
    }

    const double l2 = lambdasq;
    r.lhs_normderiv = r.f_norm * r.f_norm + r.flux_weighted;
    r.lhs_L2 = r.f_norm * r.f_norm + l2 * l2 * l2 * l2 * r.wing_mass;
    r.lhs_L2bis = l2 * r.f_norm * r.f_norm + l2 * l2 * r.wing_mass;
    return r;
}

const char* const kObservableCsvHeader =
    "lambda,total_mass,wing_mass,flux_weighted,lhs_normderiv,lhs_L2,lhs_L2bis,strip_mass,zoneI,"
    "zoneII,zoneIII,f_norm";

void write_observable_csv_row(std::ostream& out, const ObservableReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g",
                  r.lambda, r.total_mass, r.wing_mass, r.flux_weighted, r.lhs_normderiv, r.lhs_L2,
                  r.lhs_L2bis, r.strip_mass, r.zoneI, r.zoneII, r.zoneIII, r.f_norm);
    out << buf << "\n";
}

}  // namespace stadlab
