#pragma once

#include "stadlab/eigensolve.hpp"

#include <limits>

namespace stadlab {

enum class Provenance { Eigenpair, ExplicitQuasimode, SpectralWindowCombination };

// A mode record: M-normalized field u with its frequency, residual
// f = (Delta - lambda^2) u in discrete form, and provenance.
struct ModeField {
    Eigen::VectorXd vector;  // interior dofs, M-normalized
    Eigen::VectorXd f;       // M-Riesz representative of the residual
    double lambda = 0.0;
    double f_norm = 0.0;  // measured ||f||_M
    Provenance provenance = Provenance::Eigenpair;
    // Exact ||phi''||/||phi|| for the explicit separable family (NaN otherwise).
    double analytic_f_ratio = std::numeric_limits<double>::quiet_NaN();

    double lambdasq() const { return lambda * lambda; }
};

ModeField mode_from_eigenpair(const Eigenpair& ep, const OperatorPair& op);

// The separable family phi(x) cos((n+1/2) pi y / beta) with a sin^4 bump
// profile on [support_lo, support_hi].
struct QuasimodeSpec {
    int n = 10;
    double support_lo = -0.5;
    double support_hi = 0.5;
};

// sin^4 bump and derivatives on [lo, hi]; zero outside.
double sin4_bump(double x, double lo, double hi);
double sin4_bump_d2(double x, double lo, double hi);

// ||phi''|| / ||phi|| for the sin^4 bump of width L: pi^2 sqrt(512/35) / L^2.
double sin4_analytic_ratio(double L);

double quasimode_min_resolution(const QuasimodeSpec& spec, double beta);

ModeField explicit_quasimode(const QuasimodeSpec& spec, const TriMesh& mesh,
                             const OperatorPair& op);

double wing_mass_of_quasimode(const ModeField& mode, const TriMesh& mesh, const OperatorPair& op);

// u = sum c_i u_i over eigenpairs of one window; f follows from the
// orthonormal expansion.
ModeField window_combination(const std::vector<Eigenpair>& pairs,
                             const std::vector<double>& coefficients,
                             const SpectralWindow& window, const OperatorPair& op);

}  // namespace stadlab
