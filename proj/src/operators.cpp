#include "stadlab/operators.hpp"

#include <stdexcept>

namespace stadlab {

TriGeom tri_geom(const TriMesh& mesh, int t) {
    TriGeom g;
    for (int j = 0; j < 3; ++j) g.v[j] = mesh.vertices[mesh.triangles[t][j]];
    const Vec2 e1 = g.v[1] - g.v[0];
    const Vec2 e2 = g.v[2] - g.v[0];
    const double det = e1.x() * e2.y() - e1.y() * e2.x();
    if (!(det > 0)) throw std::runtime_error("tri_geom: degenerate or inverted triangle");
    g.area = 0.5 * det;
    // grad lambda_i from the edge opposite vertex i, rotated by 90 degrees.
    g.grad[0] = Vec2(g.v[1].y() - g.v[2].y(), g.v[2].x() - g.v[1].x()) / det;
    g.grad[1] = Vec2(g.v[2].y() - g.v[0].y(), g.v[0].x() - g.v[2].x()) / det;
    g.grad[2] = Vec2(g.v[0].y() - g.v[1].y(), g.v[1].x() - g.v[0].x()) / det;
    return g;
}

void tri_quadrature(const Vec2& a, const Vec2& b, const Vec2& c, int subdivide_levels,
                    const std::function<void(const Vec2&, double)>& visit) {
    if (subdivide_levels > 0) {
        const Vec2 ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
        tri_quadrature(a, ab, ca, subdivide_levels - 1, visit);
        tri_quadrature(ab, b, bc, subdivide_levels - 1, visit);
        tri_quadrature(ca, bc, c, subdivide_levels - 1, visit);
        tri_quadrature(ab, bc, ca, subdivide_levels - 1, visit);
        return;
    }
    const double area =
        0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
    // Midpoint-of-edge rule, exact for quadratics.
    visit(0.5 * (a + b), area / 3.0);
    visit(0.5 * (b + c), area / 3.0);
    visit(0.5 * (c + a), area / 3.0);
}

Eigen::VectorXd OperatorPair::to_full(const Eigen::VectorXd& u) const {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(n_vertices());
    for (int i = 0; i < n(); ++i) full[vertex_of_interior[i]] = u[i];
    return full;
}

Eigen::VectorXd OperatorPair::restrict_interior(const Eigen::VectorXd& full) const {
    Eigen::VectorXd u(n());
    for (int i = 0; i < n(); ++i) u[i] = full[vertex_of_interior[i]];
    return u;
}

Eigen::VectorXd OperatorPair::mass_solve(const Eigen::VectorXd& rhs) const {
    // The cached solver holds references into M's storage; if this pair was
    // moved or M was replaced since the cache was built, rebuild it.
    if (mass_cg_ && mass_cg_key_ != static_cast<const void*>(M.valuePtr())) mass_cg_.reset();
    if (!mass_cg_) {
        mass_cg_key_ = M.valuePtr();
        mass_cg_ = std::make_unique<MassCG>();
        mass_cg_->setTolerance(1e-14);
        mass_cg_->setMaxIterations(2000);
        mass_cg_->compute(M);
    }
    return mass_cg_->solve(rhs);
}

OperatorPair assemble(const TriMesh& mesh) {
    const int nv = static_cast<int>(mesh.vertices.size());
    const auto bmask = mesh.boundary_vertex_mask();

    OperatorPair op;
    op.interior_of_vertex.assign(nv, -1);
    for (int v = 0; v < nv; ++v) {
        if (!bmask[v]) {
            op.interior_of_vertex[v] = static_cast<int>(op.vertex_of_interior.size());
            op.vertex_of_interior.push_back(v);
        }
    }
    const int ni = op.n();
    const std::size_t nt = mesh.triangles.size();

    // Entries are accumulated straight into reserved uncompressed sparse
    // storage (coeffRef) instead of triplet buffers: on fine meshes the
    // triplet lists dominate peak memory by gigabytes.  A vertex's column
    // holds at most (incident triangles + 2) distinct entries on a manifold
    // mesh, which gives an exact-enough per-column reservation.
    Eigen::VectorXi cap_full = Eigen::VectorXi::Constant(nv, 2);
    for (const auto& tri : mesh.triangles)
        for (int j = 0; j < 3; ++j) ++cap_full[tri[j]];
    Eigen::VectorXi cap_int(ni);
    for (int i = 0; i < ni; ++i) cap_int[i] = cap_full[op.vertex_of_interior[i]];

    for (int which = 0; which < 2; ++which) {
        Eigen::SparseMatrix<double>& A = which == 0 ? op.Kfull : op.Mfull;
        Eigen::SparseMatrix<double>& Ai = which == 0 ? op.K : op.M;
        A.resize(nv, nv);
        A.reserve(cap_full);
        Ai.resize(ni, ni);
        Ai.reserve(cap_int);
        for (std::size_t t = 0; t < nt; ++t) {
            const TriGeom g = tri_geom(mesh, static_cast<int>(t));
            const auto& tri = mesh.triangles[t];
            double local[3][3];
            if (which == 0) {
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) local[i][j] = g.area * g.grad[i].dot(g.grad[j]);
            } else {
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) local[i][j] = g.area / 12.0 * (i == j ? 2.0 : 1.0);
            }
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    A.coeffRef(tri[i], tri[j]) += local[i][j];
                    const int ii = op.interior_of_vertex[tri[i]];
                    const int jj = op.interior_of_vertex[tri[j]];
                    if (ii >= 0 && jj >= 0) Ai.coeffRef(ii, jj) += local[i][j];
                }
        }
        A.makeCompressed();
        Ai.makeCompressed();
    }
    return op;
}

Eigen::SparseMatrix<double> apply_scalar_weight(const TriMesh& mesh, const OperatorPair& op,
                                                const std::function<double(const Vec2&)>& weightfn,
                                                int subdivide_levels) {
    using T = Eigen::Triplet<double>;
    std::vector<T> trips;
    trips.reserve(9 * mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const TriGeom g = tri_geom(mesh, static_cast<int>(t));
        const auto& tri = mesh.triangles[t];
        double local[3][3] = {};
        tri_quadrature(g.v[0], g.v[1], g.v[2], subdivide_levels, [&](const Vec2& p, double wq) {
            const double wval = weightfn(p);
            if (wval == 0.0) return;
            // Barycentric coordinates of p in the parent element.
            double lam[3];
            for (int i = 0; i < 3; ++i) lam[i] = 1.0;
            lam[1] = g.grad[1].dot(p - g.v[0]);
            lam[2] = g.grad[2].dot(p - g.v[0]);
            lam[0] = 1.0 - lam[1] - lam[2];
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) local[i][j] += wq * wval * lam[i] * lam[j];
        });
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const int ii = op.interior_of_vertex[tri[i]];
                const int jj = op.interior_of_vertex[tri[j]];
                if (ii >= 0 && jj >= 0 && local[i][j] != 0.0) trips.emplace_back(ii, jj, local[i][j]);
            }
    }
    Eigen::SparseMatrix<double> W(op.n(), op.n());
    W.setFromTriplets(trips.begin(), trips.end());
    return W;
}

Eigen::VectorXd residual(const OperatorPair& op, const Eigen::VectorXd& u, double lambdasq) {
    if (u.size() != op.n()) throw std::invalid_argument("residual: dimension mismatch");
    const Eigen::VectorXd r = op.K * u - lambdasq * (op.M * u);
    return op.mass_solve(r);
}

Eigen::VectorXd interpolate_interior(const TriMesh& mesh, const OperatorPair& op,
                                     const std::function<double(const Vec2&)>& fn) {
    Eigen::VectorXd u(op.n());
    for (int i = 0; i < op.n(); ++i) u[i] = fn(mesh.vertices[op.vertex_of_interior[i]]);
    return u;
}

Vec2 element_gradient(const TriMesh& mesh, const Eigen::VectorXd& full, int t) {
    const TriGeom g = tri_geom(mesh, t);
    Vec2 grad(0.0, 0.0);
    for (int j = 0; j < 3; ++j) grad += full[mesh.triangles[t][j]] * g.grad[j];
    return grad;
}

}  // namespace stadlab
