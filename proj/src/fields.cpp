#include "stadlab/fields.hpp"

#include <stdexcept>

namespace stadlab {

const char* field_kind_name(FieldKind k) {
    switch (k) {
        case FieldKind::XdX: return "xdx";
        case FieldKind::Radial: return "radial";
        case FieldKind::CutoffX: return "cutoffx";
        default: return "wingy";
    }
}

FieldKind field_kind_from_name(const std::string& s) {
    if (s == "xdx") return FieldKind::XdX;
    if (s == "radial") return FieldKind::Radial;
    if (s == "cutoffx") return FieldKind::CutoffX;
    if (s == "wingy") return FieldKind::WingY;
    throw std::invalid_argument("unknown field kind: " + s);
}

double smoothstep(double t) {
    if (t <= 0) return 0.0;
    if (t >= 1) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smoothstep_d1(double t) {
    if (t <= 0 || t >= 1) return 0.0;
    return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

double smoothstep_d2(double t) {
    if (t <= 0 || t >= 1) return 0.0;
    return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
}

VectorFieldSpec VectorFieldSpec::xdx() {
    VectorFieldSpec f;
    f.kind_ = FieldKind::XdX;
    return f;
}

VectorFieldSpec VectorFieldSpec::radial() {
    VectorFieldSpec f;
    f.kind_ = FieldKind::Radial;
    return f;
}

VectorFieldSpec VectorFieldSpec::cutoff_x(double alpha, double beta) {
    return cutoff_x(alpha, beta, CutoffSpec{beta / 4.0, beta / 2.0});
}

VectorFieldSpec VectorFieldSpec::cutoff_x(double alpha, double beta, CutoffSpec knots) {
    if (!(0 < knots.lo && knots.lo < knots.hi))
        throw std::invalid_argument("cutoff_x: need 0 < lo < hi");
    VectorFieldSpec f;
    f.kind_ = FieldKind::CutoffX;
    f.alpha_ = alpha;
    f.beta_ = beta;
    f.knots_ = knots;
    return f;
}

VectorFieldSpec VectorFieldSpec::wing_y(double alpha, double beta, double lambda) {
    return wing_y(alpha, beta, lambda, CutoffSpec{beta / 20.0, beta / 10.0});
}

VectorFieldSpec VectorFieldSpec::wing_y(double alpha, double beta, double lambda,
                                        CutoffSpec knots) {
    if (!(0 < knots.lo && knots.lo < knots.hi))
        throw std::invalid_argument("wing_y: need 0 < lo < hi");
    if (!(lambda > 0)) throw std::invalid_argument("wing_y: lambda must be > 0");
    VectorFieldSpec f;
    f.kind_ = FieldKind::WingY;
    f.alpha_ = alpha;
    f.beta_ = beta;
    f.lambda_ = lambda;
    f.knots_ = knots;
    return f;
}

double VectorFieldSpec::phi(double x) const {
    const double w = std::abs(x) - alpha_;
    const double s = smoothstep((w - knots_.lo) / (knots_.hi - knots_.lo));
    return x >= 0 ? s : -s;
}

double VectorFieldSpec::phi_x(double x) const {
    const double w = std::abs(x) - alpha_;
    return smoothstep_d1((w - knots_.lo) / (knots_.hi - knots_.lo)) / (knots_.hi - knots_.lo);
}

double VectorFieldSpec::phi_xx(double x) const {
    const double w = std::abs(x) - alpha_;
    const double d = knots_.hi - knots_.lo;
    const double v = smoothstep_d2((w - knots_.lo) / d) / (d * d);
    return x >= 0 ? v : -v;
}

double VectorFieldSpec::chi(double y) const {
    const double s = smoothstep((std::abs(y) - knots_.lo) / (knots_.hi - knots_.lo));
    return y >= 0 ? s : -s;
}

double VectorFieldSpec::chi_y(double y) const {
    return smoothstep_d1((std::abs(y) - knots_.lo) / (knots_.hi - knots_.lo)) /
           (knots_.hi - knots_.lo);
}

double VectorFieldSpec::chi_yy(double y) const {
    const double d = knots_.hi - knots_.lo;
    const double v = smoothstep_d2((std::abs(y) - knots_.lo) / d) / (d * d);
    return y >= 0 ? v : -v;
}

namespace {
double wplus(double x, double alpha) { return std::max(std::abs(x) - alpha, 0.0); }
}  // namespace

int VectorFieldSpec::quadrature_levels(const Vec2 v[3]) const {
    if (kind_ == FieldKind::CutoffX) {
        double wmin = 1e300, wmax = -1e300;
        for (int j = 0; j < 3; ++j) {
            const double w = std::abs(v[j].x()) - alpha_;
            wmin = std::min(wmin, w);
            wmax = std::max(wmax, w);
        }
        return (wmax >= knots_.lo && wmin <= knots_.hi) ? 2 : 0;
    }
    if (kind_ == FieldKind::WingY) {
        double ymin = 1e300, ymax = -1e300;
        bool straddles0 = false;
        for (int j = 0; j < 3; ++j) {
            ymin = std::min(ymin, std::abs(v[j].y()));
            ymax = std::max(ymax, std::abs(v[j].y()));
            for (int k = 0; k < j; ++k) straddles0 = straddles0 || v[j].y() * v[k].y() < 0;
        }
        if (straddles0) ymin = 0.0;
        return (ymax >= knots_.lo && ymin <= knots_.hi) ? 3 : 0;
    }
    return 0;
}

Vec2 VectorFieldSpec::coeff(const Vec2& p) const {
    switch (kind_) {
        case FieldKind::XdX: return Vec2(p.x(), 0.0);
        case FieldKind::Radial: return Vec2(p.x(), p.y());
        case FieldKind::CutoffX: return Vec2(phi(p.x()), 0.0);
        default: {
            const double w = wplus(p.x(), alpha_);
            return Vec2(0.0, lambda_ * lambda_ * w * w * chi(p.y()));
        }
    }
}

double VectorFieldSpec::divergence(const Vec2& p) const {
    switch (kind_) {
        case FieldKind::XdX: return 1.0;
        case FieldKind::Radial: return 2.0;
        case FieldKind::CutoffX: return phi_x(p.x());
        default: {
            const double w = wplus(p.x(), alpha_);
            return lambda_ * lambda_ * w * w * chi_y(p.y());
        }
    }
}

std::vector<FieldSample> apply(const VectorFieldSpec& field, const Eigen::VectorXd& u_interior,
                               const TriMesh& mesh, const OperatorPair& op) {
    const Eigen::VectorXd full = op.to_full(u_interior);
    std::vector<FieldSample> out;
    out.reserve(3 * mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Vec2 grad = element_gradient(mesh, full, static_cast<int>(t));
        const TriGeom g = tri_geom(mesh, static_cast<int>(t));
        tri_quadrature(g.v[0], g.v[1], g.v[2], 0, [&](const Vec2& p, double wq) {
            const Vec2 ab = field.coeff(p);
            out.push_back({p, wq, ab.dot(grad)});
        });
    }
    return out;
}

double commutator_form(const VectorFieldSpec& field, const Eigen::VectorXd& u_interior,
                       double /*lambdasq*/, const TriMesh& mesh, const OperatorPair& op) {
    const Eigen::VectorXd full = op.to_full(u_interior);
    double acc = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const TriGeom g = tri_geom(mesh, static_cast<int>(t));
        const auto& tri = mesh.triangles[t];
        Vec2 grad(0.0, 0.0);
        for (int j = 0; j < 3; ++j) grad += full[tri[j]] * g.grad[j];

        switch (field.kind()) {
            case FieldKind::XdX:
                acc += 2.0 * g.area * grad.x() * grad.x();
                break;
            case FieldKind::Radial:
                acc += 2.0 * g.area * grad.squaredNorm();
                break;
            case FieldKind::CutoffX: {
                // int 2 phi_x u_x^2 + phi_xx u u_x
                tri_quadrature(g.v[0], g.v[1], g.v[2], field.quadrature_levels(g.v),
                               [&](const Vec2& p, double wq) {
                    double lam1 = g.grad[1].dot(p - g.v[0]);
                    double lam2 = g.grad[2].dot(p - g.v[0]);
                    const double u =
                        full[tri[0]] * (1 - lam1 - lam2) + full[tri[1]] * lam1 + full[tri[2]] * lam2;
                    acc += wq * (2.0 * field.phi_x(p.x()) * grad.x() * grad.x() +
                                 field.phi_xx(p.x()) * u * grad.x());
                });
                break;
            }
            case FieldKind::WingY: {
                // Only wing elements contribute: every term carries w_+ or
                // H(w), and H is evaluated as its wing-side limit 1 on the
                // gluing line.
                const Vec2 centroid = (g.v[0] + g.v[1] + g.v[2]) / 3.0;
                if (std::abs(centroid.x()) <= field.alpha_) break;
                const double sgnx = centroid.x() > 0 ? 1.0 : -1.0;
                const double l2 = field.lambda() * field.lambda();
                tri_quadrature(g.v[0], g.v[1], g.v[2], field.quadrature_levels(g.v),
                               [&](const Vec2& p, double wq) {
                    double lam1 = g.grad[1].dot(p - g.v[0]);
                    double lam2 = g.grad[2].dot(p - g.v[0]);
                    const double u =
                        full[tri[0]] * (1 - lam1 - lam2) + full[tri[1]] * lam1 + full[tri[2]] * lam2;
                    const double w = wplus(p.x(), field.alpha_);
                    acc += wq * l2 *
                           (4.0 * w * sgnx * field.chi(p.y()) * grad.x() * grad.y() +
                            2.0 * w * w * field.chi_y(p.y()) * grad.y() * grad.y() +
                            (2.0 * field.chi(p.y()) + w * w * field.chi_yy(p.y())) * u * grad.y());
                });
                break;
            }
        }
    }
    return acc;
}

}  // namespace stadlab
