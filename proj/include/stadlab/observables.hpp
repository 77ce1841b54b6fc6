#pragma once

#include "stadlab/quasimode.hpp"

#include <functional>
#include <iosfwd>

namespace stadlab {

// Measured functionals of one mode.  CSV column order is frozen:
// lambda, total_mass, wing_mass, flux_weighted, lhs_normderiv, lhs_L2,
// lhs_L2bis, strip_mass, zoneI, zoneII, zoneIII, f_norm.
struct ObservableReport {
    double lambda = 0.0;
    double total_mass = 0.0;
    double wing_mass = 0.0;
    double wing_mass_plus = 0.0;
    double wing_mass_minus = 0.0;
    double strip_mass = 0.0;
    double flux_weighted = 0.0;    // int_{dS cap W} w |dN u|^2 dl
    double flux_unweighted = 0.0;  // int_{dS} |dN u|^2 dl
    double grad_norm_sq = 0.0;
    double zoneI = 0.0;
    double zoneII = 0.0;
    double zoneIII = 0.0;
    double f_norm = 0.0;
    double lhs_normderiv = 0.0;  // ||f||^2 + flux_weighted
    double lhs_L2 = 0.0;         // ||f||^2 + lambda^8 wing_mass
    double lhs_L2bis = 0.0;      // lambda^2 ||f||^2 + lambda^4 wing_mass
};

// int u^2 over the region selected by the predicate; elements that
// straddle the interface are integrated with split (subdivided) quadrature.
double region_mass(const Eigen::VectorXd& u_interior,
                   const std::function<bool(const Vec2&)>& predicate, const TriMesh& mesh,
                   const OperatorPair& op);

// Mass in ([-alpha,g1] u [g2,alpha]) x [-beta,beta].
double strip_mass(const Eigen::VectorXd& u_interior, double g1, double g2, const TriMesh& mesh,
                  const OperatorPair& op);

// Variational flux recovery: boundary function g with
// int g v dl = a(u,v) - lambda^2 (u,v) - <f,v> for boundary hats v.
class NormalTrace {
public:
    NormalTrace(const Eigen::VectorXd& u_interior, double lambdasq, const Eigen::VectorXd& f,
                const TriMesh& mesh, const OperatorPair& op);

    double at_vertex(int vertex) const;
    // Linear interpolation along boundary edge e at parameter t.
    double eval(const TriMesh& mesh, int edge, double t) const;

private:
    std::vector<double> value_of_vertex_;  // indexed by global vertex, 0 off-boundary
};

// One-sided P1 gradient trace (fallback path).
double raw_normal_trace(const Eigen::VectorXd& u_interior, const TriMesh& mesh,
                        const OperatorPair& op, int edge, const Vec2& normal);

double weighted_flux(const Eigen::VectorXd& u_interior, double lambdasq, const Eigen::VectorXd& f,
                     const TriMesh& mesh, const OperatorPair& op);

struct GradientIdentity {
    double grad_norm_sq = 0.0;  // <Ku, u>
    double rhs = 0.0;           // lambda^2 <Mu, u> + <f, u>
    double discrepancy = 0.0;   // relative
    double implied_Cs = 0.0;    // ||grad u||^2 / (lambda^max(2,s) ||u||^2 + lambda^-s ||f||^2)
};
GradientIdentity gradient_identity_report(const Eigen::VectorXd& u_interior, double lambdasq,
                                          const Eigen::VectorXd& f, const OperatorPair& op,
                                          double s = 2.0);

struct ObserveParams {
    double delta = 1.0;  // zone-I layer constant
    double strip_g1 = -0.5;
    double strip_g2 = 0.5;
};

ObservableReport observe(const ModeField& mode, const TriMesh& mesh, const OperatorPair& op,
                         const ObserveParams& params = {});

extern const char* const kObservableCsvHeader;
void write_observable_csv_row(std::ostream& out, const ObservableReport& r);

}  // namespace stadlab
