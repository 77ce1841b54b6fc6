#include "stadlab/eigensolve.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <random>
#include <stdexcept>

namespace stadlab {

SpectralWindow bouncing_ball_window(int n, double beta, double halfwidth) {
    if (n < 0) throw std::invalid_argument("bouncing_ball_window: n must be >= 0");
    const double mu = (n + 0.5) * M_PI / beta;
    return {mu * mu, halfwidth};
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using LDLT = Eigen::SimplicialLDLT<SpMat>;

// Factor K - s M, nudging the shift off near-singular pivots.
double factor_shifted(const OperatorPair& op, double s, LDLT& ldlt) {
    double shift = s;
    for (int attempt = 0; attempt < 6; ++attempt) {
        SpMat A = op.K - shift * op.M;
        ldlt.compute(A);
        if (ldlt.info() == Eigen::Success) {
            const auto& D = ldlt.vectorD();
            const double dmax = D.cwiseAbs().maxCoeff();
            if (D.cwiseAbs().minCoeff() > 1e-14 * dmax) return shift;
        }
        shift += 1e-8 * std::max(std::abs(s), 1.0);
    }
    throw std::runtime_error("factor_shifted: persistent near-singular pivot");
}

int negative_count(const LDLT& ldlt) {
    const auto& D = ldlt.vectorD();
    int neg = 0;
    for (Eigen::Index i = 0; i < D.size(); ++i)
        if (D[i] < 0) ++neg;
    return neg;
}

}  // namespace

int count_below(const OperatorPair& op, double lambdasq_max) {
    if (!std::isfinite(lambdasq_max))
        throw std::invalid_argument("count_below: lambdasq_max must be finite");
    // The Dirichlet spectrum is strictly positive.
    if (lambdasq_max <= 0) return 0;
    LDLT ldlt;
    factor_shifted(op, lambdasq_max, ldlt);
    return negative_count(ldlt);
}

namespace {

struct ParityOps {
    std::vector<int> px;  // interior-dof permutations
    std::vector<int> py;
};

ParityOps interior_parity(const TriMesh& mesh, const OperatorPair& op) {
    ParityOps p;
    p.px.resize(op.n());
    p.py.resize(op.n());
    for (int i = 0; i < op.n(); ++i) {
        const int v = op.vertex_of_interior[i];
        p.px[i] = op.interior_of_vertex[mesh.mirror_x[v]];
        p.py[i] = op.interior_of_vertex[mesh.mirror_y[v]];
        if (p.px[i] < 0 || p.py[i] < 0)
            throw std::runtime_error("parity: mirror of interior vertex is not interior");
    }
    return p;
}

Eigen::VectorXd permute(const std::vector<int>& perm, const Eigen::VectorXd& u) {
    Eigen::VectorXd out(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) out[perm[i]] = u[i];
    return out;
}

// Project u onto the four mirror-parity sectors; returns them ordered
// (++, +-, -+, --) in (x,y) parity.
std::array<Eigen::VectorXd, 4> parity_components(const ParityOps& p, const Eigen::VectorXd& u) {
    const Eigen::VectorXd ux = permute(p.px, u);
    const Eigen::VectorXd uy = permute(p.py, u);
    const Eigen::VectorXd uxy = permute(p.py, ux);
    std::array<Eigen::VectorXd, 4> out;
    out[0] = 0.25 * (u + ux + uy + uxy);
    out[1] = 0.25 * (u + ux - uy - uxy);
    out[2] = 0.25 * (u - ux + uy - uxy);
    out[3] = 0.25 * (u - ux - uy + uxy);
    return out;
}

double true_residual(const OperatorPair& op, const Eigen::VectorXd& u, double lambdasq) {
    const Eigen::VectorXd r = op.K * u - lambdasq * (op.M * u);
    const Eigen::VectorXd f = op.mass_solve(r);
    return std::sqrt(std::max(0.0, r.dot(f)));
}

// Replace each cluster's vectors with parity-pure combinations.  Mirror
// reflections commute with K and M exactly on the symmetric mesh, so this
// only removes cross-sector numerical contamination (and rotates genuine
// near-degenerate clusters onto their invariant sectors).
void align_parity(const TriMesh& mesh, const OperatorPair& op, std::vector<Eigenpair>& pairs,
                  double gap, double tol) {
    if (pairs.empty()) return;
    const ParityOps par = interior_parity(mesh, op);
    const auto offsets = cluster_offsets(pairs, gap);
    for (std::size_t c = 0; c + 1 < offsets.size(); ++c) {
        const int lo = offsets[c], hi = offsets[c + 1];
        const int csize = hi - lo;
        // Candidate parity-pure vectors from all cluster members.
        std::vector<Eigen::VectorXd> cand;
        for (int i = lo; i < hi; ++i) {
            auto comps = parity_components(par, pairs[i].vector);
            std::sort(comps.begin(), comps.end(),
                      [](const auto& a, const auto& b) { return a.squaredNorm() > b.squaredNorm(); });
            for (auto& v : comps) cand.push_back(std::move(v));
        }
        // Greedy M-orthonormal selection of csize vectors.
        std::vector<Eigen::VectorXd> sel;
        for (auto& v : cand) {
            if (static_cast<int>(sel.size()) == csize) break;
            Eigen::VectorXd w = v;
            for (const auto& s : sel) w -= op.m_inner(s, w) * s;
            const double nrm = op.m_norm(w);
            if (nrm > 0.2) sel.push_back(w / nrm);
        }
        if (static_cast<int>(sel.size()) != csize) continue;  // keep original vectors
        // Accept the aligned set only if residuals stay acceptable.
        std::vector<Eigenpair> replacement(csize);
        bool ok = true;
        for (int i = 0; i < csize; ++i) {
            const double lam2 = sel[i].dot(op.K * sel[i]) / op.m_inner(sel[i], sel[i]);
            const double res = true_residual(op, sel[i], lam2) / lam2;
            if (res > std::max(tol, 5.0 * pairs[lo + i].residual_bound)) {
                ok = false;
                break;
            }
            replacement[i] = {lam2, std::sqrt(lam2), res, sel[i]};
        }
        if (!ok) continue;
        std::sort(replacement.begin(), replacement.end(),
                  [](const Eigenpair& a, const Eigenpair& b) { return a.lambdasq < b.lambdasq; });
        for (int i = 0; i < csize; ++i) pairs[lo + i] = std::move(replacement[i]);
    }
}

}  // namespace

std::vector<int> cluster_offsets(const std::vector<Eigenpair>& pairs, double gap) {
    std::vector<int> off{0};
    for (std::size_t i = 1; i < pairs.size(); ++i)
        if (pairs[i].lambdasq - pairs[i - 1].lambdasq > gap) off.push_back(static_cast<int>(i));
    off.push_back(static_cast<int>(pairs.size()));
    return off;
}

std::vector<Eigenpair> solve_window(const TriMesh& mesh, const OperatorPair& op,
                                    const SpectralWindow& window, int max_count,
                                    const SolveOptions& opts) {
    if (!(window.center > 0)) throw std::invalid_argument("solve_window: center must be > 0");
    if (!(window.halfwidth > 0)) throw std::invalid_argument("solve_window: halfwidth must be > 0");

    const double lo = window.center - window.halfwidth;
    const double hi = window.center + window.halfwidth;
    const int n_window = (lo > 0 ? count_below(op, hi) - count_below(op, lo) : count_below(op, hi));
    if (n_window == 0) return {};
    const int target = std::min(n_window, max_count);

    LDLT ldlt;
    const double sigma = factor_shifted(op, window.center, ldlt);
    const int n = op.n();

    std::vector<Eigenpair> found;

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    for (int round = 0; round < 3 && static_cast<int>(found.size()) < target; ++round) {
        const int remaining = target - static_cast<int>(found.size());
        int m_max = std::min<int>(n, opts.max_lanczos);
        int m_goal = std::min(m_max, std::max(40, 3 * remaining + 20));

        Eigen::MatrixXd V(n, m_goal + 1);   // M-orthonormal Lanczos basis
        Eigen::MatrixXd MV(n, m_goal + 1);  // M * basis
        std::vector<double> alpha, beta;

        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = gauss(rng);
        // Deflate previously found pairs.
        auto deflate = [&](Eigen::VectorXd& w) {
            for (const auto& ep : found) w -= op.m_inner(ep.vector, w) * ep.vector;
        };
        deflate(v);
        {
            const double nrm = op.m_norm(v);
            if (nrm == 0) break;
            v /= nrm;
        }
        V.col(0) = v;
        MV.col(0) = op.M * v;

        int m = 0;
        std::vector<Eigenpair> ritz;
        while (true) {
            // Expand to m_goal columns.
            while (m < m_goal) {
                Eigen::VectorXd w = ldlt.solve(MV.col(m));
                deflate(w);
                const double a = MV.col(m).dot(w);
                alpha.push_back(a);
                // Full reorthogonalization, two passes.
                for (int pass = 0; pass < 2; ++pass) {
                    Eigen::VectorXd coef = MV.leftCols(m + 1).transpose() * w;
                    w -= V.leftCols(m + 1) * coef;
                }
                const double b = std::sqrt(std::max(0.0, w.dot(op.M * w)));
                beta.push_back(b);
                ++m;
                if (b < 1e-13) break;
                V.col(m) = w / b;
                MV.col(m) = op.M * V.col(m);
            }

            // Ritz pairs of the tridiagonal.
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                T(i, i) = alpha[i];
                if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
            ritz.clear();
            bool all_converged = true;
            for (int i = 0; i < m; ++i) {
                const double nu = es.eigenvalues()[i];
                if (nu == 0) continue;
                const double lam2 = sigma + 1.0 / nu;
                if (lam2 < lo || lam2 > hi) continue;
                const double bound = beta[m - 1] * std::abs(es.eigenvectors()(m - 1, i));
                if (bound > 1e-11 * std::abs(nu)) {
                    all_converged = false;
                    continue;
                }
                Eigenpair ep;
                ep.vector = V.leftCols(m) * es.eigenvectors().col(i);
                const double nrm = op.m_norm(ep.vector);
                ep.vector /= nrm;
                ep.lambdasq = lam2;
                ep.lambda = std::sqrt(lam2);
                ep.residual_bound = true_residual(op, ep.vector, lam2) / lam2;
                if (ep.residual_bound > opts.tol) {
                    all_converged = false;
                    continue;
                }
                ritz.push_back(std::move(ep));
            }
            const bool exhausted = (m >= m_max) || (beta.back() < 1e-13);
            if ((all_converged && static_cast<int>(ritz.size()) >= remaining) || exhausted) break;
            const int new_goal = std::min(m_max, m_goal + std::max(20, m_goal / 2));
            if (new_goal == m_goal) break;
            m_goal = new_goal;
            V.conservativeResize(Eigen::NoChange, m_goal + 1);
            MV.conservativeResize(Eigen::NoChange, m_goal + 1);
        }
        for (auto& ep : ritz) found.push_back(std::move(ep));
    }

    std::sort(found.begin(), found.end(),
              [](const Eigenpair& a, const Eigenpair& b) { return a.lambdasq < b.lambdasq; });
    // Drop duplicates picked up across deflation rounds.
    std::vector<Eigenpair> unique;
    for (auto& ep : found) {
        bool dup = false;
        for (const auto& kept : unique)
            if (std::abs(kept.lambdasq - ep.lambdasq) < 1e-10 * std::max(1.0, window.center) &&
                std::abs(op.m_inner(kept.vector, ep.vector)) > 0.5)
                dup = true;
        if (!dup) unique.push_back(std::move(ep));
    }
    if (static_cast<int>(unique.size()) > max_count) unique.resize(max_count);

    if (static_cast<int>(unique.size()) < target)
        throw std::runtime_error("solve_window: converged " + std::to_string(unique.size()) +
                                 " of " + std::to_string(target) + " eigenpairs in window");

    if (opts.parity_align && !mesh.mirror_x.empty())
        align_parity(mesh, op, unique, opts.cluster_gap_rel * std::max(1.0, window.center),
                     opts.tol);
    return unique;
}

}  // namespace stadlab
