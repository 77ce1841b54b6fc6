#pragma once

#include "stadlab/operators.hpp"

namespace stadlab {

struct Eigenpair {
    double lambdasq = 0.0;
    double lambda = 0.0;
    double residual_bound = 0.0;  // ||K u - lambda^2 M u||_{M^-1} / lambda^2
    Eigen::VectorXd vector;       // interior dofs, M-normalized
};

struct SpectralWindow {
    double center = 0.0;
    double halfwidth = 0.0;
};

// Spectral window centered at the bouncing-ball frequency ((n+1/2)*pi/beta)^2.
SpectralWindow bouncing_ball_window(int n, double beta, double halfwidth);

struct SolveOptions {
    double tol = 1e-9;          // relative eigen-residual target
    int max_lanczos = 3000;     // hard cap on Krylov dimension
    unsigned seed = 20240824u;  // deterministic start vector
    bool parity_align = true;   // snap vectors onto mirror-parity sectors
    // Eigenvalues closer than cluster_gap_rel * max(1, center) are treated
    // as one cluster when aligning parities.
    double cluster_gap_rel = 1e-5;
};

// Number of discrete eigenvalues <= lambdasq_max, from the inertia of
// K - lambdasq_max M (LDL^T sign count).  Near-singular shifts retry with
// a relative offset of 1e-8.
int count_below(const OperatorPair& op, double lambdasq_max);

// All eigenpairs in [center - halfwidth, center + halfwidth] (up to
// max_count, sorted), via shift-invert Lanczos at the window center with
// full reorthogonalization.  Completeness is checked against inertia
// counts at the window edges.
std::vector<Eigenpair> solve_window(const TriMesh& mesh, const OperatorPair& op,
                                    const SpectralWindow& window, int max_count,
                                    const SolveOptions& opts = {});

// Group sorted eigenpairs into near-degenerate clusters; returns the first
// index of each cluster plus a terminating size entry.
std::vector<int> cluster_offsets(const std::vector<Eigenpair>& pairs, double gap);

}  // namespace stadlab
