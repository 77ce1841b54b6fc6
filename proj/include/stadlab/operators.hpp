#pragma once

#include "stadlab/mesh.hpp"

#include <Eigen/Sparse>

#include <functional>
#include <memory>

namespace stadlab {

// Geometry of one P1 element: area and the (constant) gradients of the
// three nodal basis functions.
struct TriGeom {
    double area;
    Vec2 grad[3];
    Vec2 v[3];
};

TriGeom tri_geom(const TriMesh& mesh, int t);

// Degree-2 interior quadrature rule on a triangle (3 points, weights area/3).
struct TriQuadPoint {
    Vec2 point;
    double weight;
};
void tri_quadrature(const Vec2& a, const Vec2& b, const Vec2& c, int subdivide_levels,
                    const std::function<void(const Vec2&, double)>& visit);

// Stiffness/mass pair of the discrete Dirichlet Laplacian.  K, M act on
// interior vertices (Dirichlet rows eliminated); Kfull, Mfull keep all
// vertices and back the variational flux recovery.
class OperatorPair {
public:
    Eigen::SparseMatrix<double> K;
    Eigen::SparseMatrix<double> M;
    Eigen::SparseMatrix<double> Kfull;
    Eigen::SparseMatrix<double> Mfull;
    std::vector<int> interior_of_vertex;  // -1 for boundary vertices
    std::vector<int> vertex_of_interior;

    int n() const { return static_cast<int>(vertex_of_interior.size()); }
    int n_vertices() const { return static_cast<int>(interior_of_vertex.size()); }

    Eigen::VectorXd to_full(const Eigen::VectorXd& u) const;
    Eigen::VectorXd restrict_interior(const Eigen::VectorXd& full) const;

    // M^{-1} rhs via Jacobi-preconditioned CG (mass matrices are uniformly
    // well conditioned).
    Eigen::VectorXd mass_solve(const Eigen::VectorXd& rhs) const;

    double m_inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
        return u.dot(M * v);
    }
    double m_norm(const Eigen::VectorXd& u) const { return std::sqrt(std::max(0.0, m_inner(u, u))); }

private:
    using MassCG = Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                                            Eigen::DiagonalPreconditioner<double>>;
    mutable std::unique_ptr<MassCG> mass_cg_;
    mutable const void* mass_cg_key_ = nullptr;  // M storage the cache was built on
};

OperatorPair assemble(const TriMesh& mesh);

// Interior symmetric form of the weighted mass integral of weightfn,
// element-wise degree-2 quadrature; subdivide_levels splits each element
// 4^levels ways before applying the rule (for weights with interfaces not
// aligned to the mesh).
Eigen::SparseMatrix<double> apply_scalar_weight(const TriMesh& mesh, const OperatorPair& op,
                                                const std::function<double(const Vec2&)>& weightfn,
                                                int subdivide_levels = 0);

// M-Riesz representative f of the residual functional: M f = K u - lambdasq M u.
Eigen::VectorXd residual(const OperatorPair& op, const Eigen::VectorXd& u, double lambdasq);

// Nodal interpolant of fn on interior vertices.
Eigen::VectorXd interpolate_interior(const TriMesh& mesh, const OperatorPair& op,
                                     const std::function<double(const Vec2&)>& fn);

// Gradient of the P1 field (full nodal values) on element t.
Vec2 element_gradient(const TriMesh& mesh, const Eigen::VectorXd& full, int t);

}  // namespace stadlab
