#pragma once

#include "stadlab/fields.hpp"
#include "stadlab/observables.hpp"

namespace stadlab {

// One commutator identity check:
//   <u, [Delta - lambda^2, A] u> = <2Au + (div A) u, f> + int_{dS} (dN u)(Au) dl.
struct RellichReport {
    FieldKind kind = FieldKind::XdX;
    double lhs = 0.0;
    double rhs_volume = 0.0;
    double rhs_boundary = 0.0;
    double residual = 0.0;  // |lhs - rhs_volume - rhs_boundary|
    double scale = 1.0;     // max(|lhs|, |rhs_boundary|, 1)

    double relative() const { return residual / scale; }
};

RellichReport rellich_residual(const ModeField& mode, const VectorFieldSpec& field,
                               const TriMesh& mesh, const OperatorPair& op);

// The A = x d/dx specialization, rearranged as
//   ||u_x||^2 = (1/2) [ int_{dS} q (dN u)^2 dl + int (2 x u_x + u) f dA ],
// with q = x N_x.  The boundary term localizes to dS cap W on the stadium.
struct XdxChainReport {
    double grad_x_sq = 0.0;
    double boundary_term = 0.0;
    double boundary_term_wing = 0.0;  // arcs only
    double f_term = 0.0;
    double discrepancy = 0.0;     // relative, against max(grad_x_sq, 1)
    double wing_reduction_gap = 0.0;  // |boundary_term - boundary_term_wing|
};

XdxChainReport xdx_chain(const ModeField& mode, const TriMesh& mesh, const OperatorPair& op);

// The three lower-bound left-hand sides, plus lambda^2 ||u||_{L2(W)} for the
// o(lambda^-2) class.
struct LowerBoundLhs {
    double normderiv = 0.0;  // ||f||^2 + int w (dN u)^2
    double L2 = 0.0;         // ||f||^2 + lambda^8 * wing_mass
    double L2bis = 0.0;      // lambda^2 ||f||^2 + lambda^4 * wing_mass
    double lambda2_wing_norm = 0.0;
};

LowerBoundLhs lower_bound_lhs(const ObservableReport& report);

// min over boundary quadrature points of (x,y) . N; the stadium is
// star-shaped about the origin, so this should be >= 0 up to round-off.
double radial_boundary_factor_min(const TriMesh& mesh);

}  // namespace stadlab
