#pragma once

#include "stadlab/operators.hpp"

#include <string>

namespace stadlab {

enum class FieldKind { XdX, Radial, CutoffX, WingY };

const char* field_kind_name(FieldKind k);
FieldKind field_kind_from_name(const std::string& s);

// Ramp knots: the cutoff rises from 0 to 1 over [lo, hi] (in w for the
// x-cutoff, in |y| for the odd y-cutoff).
struct CutoffSpec {
    double lo = 0.0;
    double hi = 1.0;
};

// Quintic smoothstep: C^2, s(0)=0, s(1)=1, s'=s''=0 at both ends.
double smoothstep(double t);
double smoothstep_d1(double t);
double smoothstep_d2(double t);

// Commutant vector field A = a d/dx + b d/dy with analytic divergence and
// an integrated-by-parts quadratic form for <u, [Delta - lambda^2, A] u>.
class VectorFieldSpec {
public:
    static VectorFieldSpec xdx();
    static VectorFieldSpec radial();
    // a = phi(x) with phi odd, rising over w in [knots.lo, knots.hi]
    // (defaults beta/4 .. beta/2), phi_x >= 0.
    static VectorFieldSpec cutoff_x(double alpha, double beta);
    static VectorFieldSpec cutoff_x(double alpha, double beta, CutoffSpec knots);
    // b = lambda^2 w_+^2 chi(y), chi the odd ramp over |y| in
    // [knots.lo, knots.hi] (defaults beta/20 .. beta/10).
    static VectorFieldSpec wing_y(double alpha, double beta, double lambda);
    static VectorFieldSpec wing_y(double alpha, double beta, double lambda, CutoffSpec knots);

    FieldKind kind() const { return kind_; }
    double lambda() const { return lambda_; }

    Vec2 coeff(const Vec2& p) const;
    double divergence(const Vec2& p) const;

    // Element quadrature subdivision hint: nonzero when the element meets a
    // cutoff ramp (the ramps are narrower than coarse elements, so the
    // baseline rule cannot see them).
    int quadrature_levels(const Vec2 v[3]) const;

    // phi and chi with derivatives (zero for kinds that do not use them).
    double phi(double x) const;
    double phi_x(double x) const;
    double phi_xx(double x) const;
    double chi(double y) const;
    double chi_y(double y) const;
    double chi_yy(double y) const;

    double alpha_ = 0.0;
    double beta_ = 0.0;

private:
    FieldKind kind_ = FieldKind::XdX;
    double lambda_ = 0.0;
    CutoffSpec knots_;
};

// Au at the element quadrature points of the P1 field.
struct FieldSample {
    Vec2 point;
    double weight;
    double value;  // (Au)(point)
};
std::vector<FieldSample> apply(const VectorFieldSpec& field, const Eigen::VectorXd& u_interior,
                               const TriMesh& mesh, const OperatorPair& op);

// <u, [Delta - lambda^2, A] u> evaluated via the integrated-by-parts
// transcription of the commutator (exact forms for zero-trace P1 fields):
//   XdX:     2 ||u_x||^2
//   Radial:  2 ||grad u||^2
//   CutoffX: int 2 phi_x u_x^2 + phi_xx u u_x
//   WingY:   lambda^2 int 4 w sgn(x) chi u_x u_y + 2 w^2 chi_y u_y^2
//                        + (2 H(w) chi + w^2 chi_yy) u u_y
double commutator_form(const VectorFieldSpec& field, const Eigen::VectorXd& u_interior,
                       double lambdasq, const TriMesh& mesh, const OperatorPair& op);

}  // namespace stadlab
