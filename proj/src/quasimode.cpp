#include "stadlab/quasimode.hpp"

#include "stadlab/geometry.hpp"

#include <stdexcept>

namespace stadlab {

ModeField mode_from_eigenpair(const Eigenpair& ep, const OperatorPair& op) {
    ModeField m;
    m.vector = ep.vector;
    m.lambda = ep.lambda;
    m.provenance = Provenance::Eigenpair;
    m.f = residual(op, m.vector, ep.lambdasq);
    m.f_norm = op.m_norm(m.f);
    return m;
}

double sin4_bump(double x, double lo, double hi) {
    if (x <= lo || x >= hi) return 0.0;
    const double s = std::sin(M_PI * (x - lo) / (hi - lo));
    return s * s * s * s;
}

double sin4_bump_d2(double x, double lo, double hi) {
    if (x <= lo || x >= hi) return 0.0;
    const double c = M_PI / (hi - lo);
    const double t = c * (x - lo);
    const double s = std::sin(t), co = std::cos(t);
    // (sin^4)'' = c^2 (12 sin^2 cos^2 - 4 sin^4)
    return c * c * (12.0 * s * s * co * co - 4.0 * s * s * s * s);
}

double sin4_analytic_ratio(double L) {
    // ||phi||^2 = 35 L / 128, ||phi''||^2 = 4 pi^4 / L^3.
    return M_PI * M_PI * std::sqrt(512.0 / 35.0) / (L * L);
}

double quasimode_min_resolution(const QuasimodeSpec& spec, double beta) {
    return beta / (8.0 * (spec.n + 0.5));
}

ModeField explicit_quasimode(const QuasimodeSpec& spec, const TriMesh& mesh,
                             const OperatorPair& op) {
    if (spec.n < 0) throw std::invalid_argument("explicit_quasimode: n must be >= 0");
    if (!(-mesh.alpha <= spec.support_lo && spec.support_lo < spec.support_hi &&
          spec.support_hi <= mesh.alpha))
        throw std::invalid_argument("explicit_quasimode: support must be inside [-alpha, alpha]");
    const double h_needed = quasimode_min_resolution(spec, mesh.beta);
    if (mesh.h > h_needed)
        throw std::invalid_argument("explicit_quasimode: mesh under-resolved, need h <= " +
                                    std::to_string(h_needed));

    const double mu = (spec.n + 0.5) * M_PI / mesh.beta;
    Eigen::VectorXd u = interpolate_interior(mesh, op, [&](const Vec2& p) {
        return sin4_bump(p.x(), spec.support_lo, spec.support_hi) * std::cos(mu * p.y());
    });
    const double nrm = op.m_norm(u);
    if (nrm == 0) throw std::runtime_error("explicit_quasimode: interpolant vanished");
    u /= nrm;

    // The mode frequency is the discrete transverse frequency, measured
    // through the operator pair itself: the Rayleigh quotient of the
    // interpolant splits as lambda_perp^2 + ||phi'||^2/||phi||^2, and the
    // longitudinal constant is known in closed form for the sin^4 profile
    // (16 pi^2 / (7 L^2)).  Subtracting it isolates lambda_perp^2, which
    // converges to mu^2 at O(h^2) but tracks the transverse consistency
    // (dispersion) shift of the discrete operator; pairing the residual
    // with mu^2 instead would let that shift, of size O(h^2 lambda^4),
    // swamp ||f|| at high n.
    const double L = spec.support_hi - spec.support_lo;
    const double lambdasq = u.dot(op.K * u) - 16.0 * M_PI * M_PI / (7.0 * L * L);

    ModeField m;
    m.vector = std::move(u);
    m.lambda = std::sqrt(lambdasq);
    m.provenance = Provenance::ExplicitQuasimode;
    m.analytic_f_ratio = sin4_analytic_ratio(spec.support_hi - spec.support_lo);
    m.f = residual(op, m.vector, lambdasq);
    m.f_norm = op.m_norm(m.f);
    return m;
}

double wing_mass_of_quasimode(const ModeField& mode, const TriMesh& mesh, const OperatorPair& op) {
    // L2 mass over elements lying in the wings; the mesh conforms to the
    // gluing lines so centroid classification is exact.
    const Eigen::VectorXd full = op.to_full(mode.vector);
    double mass = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const TriGeom g = tri_geom(mesh, static_cast<int>(t));
        const Vec2 centroid = (g.v[0] + g.v[1] + g.v[2]) / 3.0;
        if (std::abs(centroid.x()) <= mesh.alpha) continue;
        const auto& tri = mesh.triangles[t];
        // Midpoint rule, exact for the quadratic u^2.
        for (int e = 0; e < 3; ++e) {
            const double um = 0.5 * (full[tri[e]] + full[tri[(e + 1) % 3]]);
            mass += g.area / 3.0 * um * um;
        }
    }
    return mass;
}

ModeField window_combination(const std::vector<Eigenpair>& pairs,
                             const std::vector<double>& coefficients,
                             const SpectralWindow& window, const OperatorPair& op) {
    if (pairs.empty() || pairs.size() != coefficients.size())
        throw std::invalid_argument("window_combination: size mismatch");
    const double lo = window.center - window.halfwidth;
    const double hi = window.center + window.halfwidth;
    for (const auto& ep : pairs)
        if (ep.lambdasq < lo || ep.lambdasq > hi)
            throw std::invalid_argument("window_combination: eigenpair outside window");

    const double lambdasq = window.center;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(op.n());
    Eigen::VectorXd f = Eigen::VectorXd::Zero(op.n());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        u += coefficients[i] * pairs[i].vector;
        // M-Riesz representative of c_i (lambda_i^2 - lambda^2) M u_i.
        f += coefficients[i] * (pairs[i].lambdasq - lambdasq) * pairs[i].vector;
    }
    const double nrm = op.m_norm(u);
    if (nrm == 0) throw std::invalid_argument("window_combination: zero combination");
    u /= nrm;
    f /= nrm;

    ModeField m;
    m.vector = std::move(u);
    m.f = std::move(f);
    m.lambda = std::sqrt(lambdasq);
    m.f_norm = op.m_norm(m.f);
    m.provenance = Provenance::SpectralWindowCombination;
    return m;
}

}  // namespace stadlab
