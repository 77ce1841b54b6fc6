#include "stadlab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace stadlab {

namespace {

double canon(double v) { return v == 0.0 ? 0.0 : v; }

struct CoordKey {
    std::uint64_t x;
    std::uint64_t y;
    bool operator==(const CoordKey&) const = default;
};

struct CoordKeyHash {
    std::size_t operator()(const CoordKey& k) const {
        std::uint64_t h = k.x * 0x9e3779b97f4a7c15ULL;
        h ^= k.y + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

std::uint64_t bits(double v) {
    std::uint64_t b;
    std::memcpy(&b, &v, sizeof(b));
    return b;
}

CoordKey key_of(double x, double y) { return CoordKey{bits(canon(x)), bits(canon(y))}; }

// Vertex store with exact-coordinate deduplication.  All mirrored copies
// are produced by negating stored coordinates, so reflections are
// bit-exact and the mirror permutations below are total.
class MeshBuilder {
public:
    int add(double x, double y) {
        x = canon(x);
        y = canon(y);
        const CoordKey k = key_of(x, y);
        auto it = index_.find(k);
        if (it != index_.end()) return it->second;
        const int id = static_cast<int>(verts_.size());
        verts_.emplace_back(x, y);
        index_.emplace(k, id);
        return id;
    }

    int find(double x, double y) const {
        auto it = index_.find(key_of(x, y));
        return it == index_.end() ? -1 : it->second;
    }

    const Vec2& at(int i) const { return verts_[i]; }
    int size() const { return static_cast<int>(verts_.size()); }

    void tri(int a, int b, int c) { tris_.push_back({a, b, c}); }

    // Triangulate the strip between two polylines sharing a monotone
    // parameter; advances whichever side has the nearer next knot.
    void strip(const std::vector<int>& va, const std::vector<double>& ta,
               const std::vector<int>& vb, const std::vector<double>& tb) {
        std::size_t i = 0, o = 0;
        while (i + 1 < va.size() || o + 1 < vb.size()) {
            const bool can_a = i + 1 < va.size();
            const bool can_b = o + 1 < vb.size();
            bool advance_b;
            if (!can_a)
                advance_b = true;
            else if (!can_b)
                advance_b = false;
            else
                advance_b = tb[o + 1] <= ta[i + 1];
            if (advance_b) {
                tri(va[i], vb[o], vb[o + 1]);
                ++o;
            } else {
                tri(va[i], vb[o], va[i + 1]);
                ++i;
            }
        }
    }

    // Duplicate triangles [first, last) reflected through x -> -x (or y -> -y).
    void mirror_triangles(std::size_t first, std::size_t last, bool flip_x) {
        for (std::size_t t = first; t < last; ++t) {
            const auto tr = tris_[t];
            std::array<int, 3> m;
            for (int j = 0; j < 3; ++j) {
                const Vec2& p = verts_[tr[j]];
                m[j] = flip_x ? add(-p.x(), p.y()) : add(p.x(), -p.y());
            }
            tris_.push_back(m);
        }
    }

    std::size_t triangle_count() const { return tris_.size(); }

    TriMesh finish(MeshDomain domain, double alpha, double beta, double h) {
        TriMesh mesh;
        mesh.domain = domain;
        mesh.alpha = alpha;
        mesh.beta = beta;
        mesh.h = h;
        mesh.vertices = std::move(verts_);
        mesh.triangles = std::move(tris_);
        for (auto& t : mesh.triangles) {
            const Vec2& a = mesh.vertices[t[0]];
            const Vec2& b = mesh.vertices[t[1]];
            const Vec2& c = mesh.vertices[t[2]];
            const double s2 = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
            if (s2 < 0) std::swap(t[1], t[2]);
            if (s2 == 0) throw std::runtime_error("mesh: degenerate triangle");
        }
        mesh.mirror_x.resize(mesh.vertices.size());
        mesh.mirror_y.resize(mesh.vertices.size());
        for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
            const Vec2& p = mesh.vertices[i];
            auto mx = index_.find(key_of(-p.x(), p.y()));
            auto my = index_.find(key_of(p.x(), -p.y()));
            if (mx == index_.end() || my == index_.end())
                throw std::runtime_error("mesh: vertex set not mirror symmetric");
            mesh.mirror_x[i] = mx->second;
            mesh.mirror_y[i] = my->second;
        }
        return mesh;
    }

private:
    std::vector<Vec2> verts_;
    std::vector<std::array<int, 3>> tris_;
    std::unordered_map<CoordKey, int, CoordKeyHash> index_;
};

// Symmetric 1D grid coordinates: c[i] = d*(i - n/2), bit-mirrored about 0.
std::vector<double> symmetric_coords(int n, double halflen) {
    const double d = 2.0 * halflen / n;
    std::vector<double> c(n + 1);
    for (int k = 0; k <= n / 2; ++k) {
        c[n / 2 + k] = d * k;
        c[n / 2 - k] = -(d * k);
    }
    c[n / 2] = 0.0;
    return c;
}

// Quad grid on [-alpha,alpha] x [-beta,beta]; diagonals are uniform within
// each quadrant and arranged so that both reflections map the
// triangulation onto itself bit-exactly.  (Per-cell alternating patterns
// were tried and rejected: they behave as a lattice of defects for
// oscillatory interpolants, inflating discrete residuals by an order of
// magnitude; with quadrant-uniform diagonals the only defect lines are
// the two axes.)
void build_rect_grid(MeshBuilder& mb, int nx, int ny, const std::vector<double>& xc,
                     const std::vector<double>& yc, std::vector<std::vector<int>>& gid) {
    gid.assign(nx + 1, std::vector<int>(ny + 1));
    for (int i = 0; i <= nx; ++i)
        for (int j = 0; j <= ny; ++j) gid[i][j] = mb.add(xc[i], yc[j]);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const int v00 = gid[i][j], v10 = gid[i + 1][j];
            const int v01 = gid[i][j + 1], v11 = gid[i + 1][j + 1];
            const bool sx = i >= nx / 2;
            const bool sy = j >= ny / 2;
            if (sx == sy) {
                mb.tri(v00, v10, v11);
                mb.tri(v00, v11, v01);
            } else {
                mb.tri(v00, v10, v01);
                mb.tri(v10, v11, v01);
            }
        }
    }
}

// Graded fan over one quarter of a disk sector (theta in [0, pi/2]),
// rings r_k = k*dr, ring k carrying 2k angular intervals.  axis_idx(k)
// and glue_idx(k) supply the pre-existing vertices on theta=0 / theta=pi/2
// when shared with other structures (-1 to create).
template <typename AxisFn, typename GlueFn>
void build_quarter_fan(MeshBuilder& mb, double cx, int nr, double dr, AxisFn axis_idx,
                       GlueFn glue_idx, int center_idx) {
    std::vector<int> inner{center_idx};
    std::vector<double> tinner{0.0};
    for (int k = 1; k <= nr; ++k) {
        const double r = dr * k;
        std::vector<int> ring(2 * k + 1);
        std::vector<double> tring(2 * k + 1);
        for (int j = 0; j <= 2 * k; ++j) {
            tring[j] = static_cast<double>(j) / (2 * k);
            if (j == 0) {
                const int ax = axis_idx(k);
                ring[j] = ax >= 0 ? ax : mb.add(cx + r, 0.0);
            } else if (j == 2 * k) {
                ring[j] = glue_idx(k);
            } else {
                const double th = (M_PI / 2.0) * tring[j];
                ring[j] = mb.add(cx + r * std::cos(th), r * std::sin(th));
            }
        }
        mb.strip(inner, tinner, ring, tring);
        inner = std::move(ring);
        tinner = std::move(tring);
    }
}

BoundaryTag classify_boundary_edge(const TriMesh& mesh, int a, int b) {
    const Vec2& pa = mesh.vertices[a];
    const Vec2& pb = mesh.vertices[b];
    if (mesh.domain == MeshDomain::DiskOnly) return BoundaryTag::ArcPlus;
    if (mesh.domain == MeshDomain::RectangleOnly) {
        if (pa.x() == pb.x()) return pa.x() > 0 ? BoundaryTag::RectRight : BoundaryTag::RectLeft;
        return pa.y() > 0 ? BoundaryTag::RectTop : BoundaryTag::RectBottom;
    }
    const double tol = 1e-9 * mesh.beta;
    for (BoundaryTag tag : {BoundaryTag::ArcPlus, BoundaryTag::ArcMinus}) {
        const Vec2 c = mesh.arc_center(tag);
        const double da = (pa - c).norm() - mesh.beta;
        const double db = (pb - c).norm() - mesh.beta;
        if (std::abs(da) <= tol && std::abs(db) <= tol &&
            std::abs(pa.x()) >= mesh.alpha - tol && std::abs(pb.x()) >= mesh.alpha - tol)
            return tag;
    }
    return (pa.y() + pb.y()) > 0 ? BoundaryTag::RectTop : BoundaryTag::RectBottom;
}

void extract_boundary_edges(TriMesh& mesh) {
    std::map<std::pair<int, int>, int> count;
    for (const auto& t : mesh.triangles)
        for (int e = 0; e < 3; ++e) {
            int a = t[e], b = t[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            ++count[{a, b}];
        }
    mesh.boundary_edges.clear();
    for (const auto& [edge, c] : count) {
        if (c == 1)
            mesh.boundary_edges.push_back(
                {edge.first, edge.second, classify_boundary_edge(mesh, edge.first, edge.second)});
        else if (c != 2)
            throw std::runtime_error("mesh: non-manifold edge");
    }
}

}  // namespace

double TriMesh::triangle_area(int t) const {
    const Vec2& a = vertices[triangles[t][0]];
    const Vec2& b = vertices[triangles[t][1]];
    const Vec2& c = vertices[triangles[t][2]];
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

double TriMesh::total_area() const {
    double s = 0.0;
    for (std::size_t t = 0; t < triangles.size(); ++t) s += triangle_area(static_cast<int>(t));
    return s;
}

double TriMesh::min_angle_deg() const {
    double worst = 180.0;
    for (const auto& t : triangles) {
        for (int j = 0; j < 3; ++j) {
            const Vec2& a = vertices[t[j]];
            const Vec2 u = vertices[t[(j + 1) % 3]] - a;
            const Vec2 v = vertices[t[(j + 2) % 3]] - a;
            const double ang =
                std::atan2(std::abs(u.x() * v.y() - u.y() * v.x()), u.dot(v)) * 180.0 / M_PI;
            worst = std::min(worst, ang);
        }
    }
    return worst;
}

std::vector<bool> TriMesh::boundary_vertex_mask() const {
    std::vector<bool> mask(vertices.size(), false);
    for (const auto& e : boundary_edges) {
        mask[e.a] = true;
        mask[e.b] = true;
    }
    return mask;
}

Vec2 TriMesh::arc_center(BoundaryTag tag) const {
    if (domain == MeshDomain::DiskOnly) return Vec2(0.0, 0.0);
    if (tag == BoundaryTag::ArcPlus) return Vec2(alpha, 0.0);
    if (tag == BoundaryTag::ArcMinus) return Vec2(-alpha, 0.0);
    throw std::invalid_argument("arc_center: not an arc tag");
}

TriMesh build_mesh(MeshDomain domain, double alpha, double beta, double h) {
    if (!(alpha > 0) || !(beta > 0) || !(h > 0))
        throw std::invalid_argument("build_mesh: parameters must be positive");
    if (domain != MeshDomain::RectangleOnly && h > beta / 4.0)
        throw std::invalid_argument("build_mesh: h too large to resolve the wings (need h <= beta/4)");

    MeshBuilder mb;

    if (domain == MeshDomain::DiskOnly) {
        const int nr = std::max(2, static_cast<int>(std::llround(beta / h)));
        const double dr = beta / nr;
        const int center = mb.add(0.0, 0.0);
        std::vector<int> axis(nr + 1, -1), vert(nr + 1, -1);
        build_quarter_fan(
            mb, 0.0, nr, dr, [&](int k) { return axis[k]; },
            [&](int k) {
                if (vert[k] < 0) vert[k] = mb.add(0.0, dr * k);
                return vert[k];
            },
            center);
        const std::size_t q1 = mb.triangle_count();
        mb.mirror_triangles(0, q1, false);   // lower half of right quarter pair
        mb.mirror_triangles(0, mb.triangle_count(), true);  // left half
        TriMesh mesh = mb.finish(domain, alpha, beta, h);
        extract_boundary_edges(mesh);
        return mesh;
    }

    const int ny_half = std::max(domain == MeshDomain::RectangleOnly ? 1 : 2,
                                 static_cast<int>(std::llround(beta / h)));
    const int ny = 2 * ny_half;
    const double dy = 2.0 * beta / ny;
    const int nx = 2 * std::max(1, static_cast<int>(std::llround(alpha / dy)));
    const auto xc = symmetric_coords(nx, alpha);
    const auto yc = symmetric_coords(ny, beta);

    std::vector<std::vector<int>> gid;
    build_rect_grid(mb, nx, ny, xc, yc, gid);

    if (domain == MeshDomain::Stadium) {
        const int nr = ny / 2;
        // Right wing, upper quarter; gluing line vertices reuse the grid.
        const std::size_t w0 = mb.triangle_count();
        std::vector<int> axis(nr + 1, -1);
        build_quarter_fan(
            mb, alpha, nr, dy,
            [&](int k) {
                if (axis[k] < 0) axis[k] = mb.add(alpha + dy * k, 0.0);
                return axis[k];
            },
            [&](int k) { return gid[nx][ny / 2 + k]; }, gid[nx][ny / 2]);
        const std::size_t w1 = mb.triangle_count();
        mb.mirror_triangles(w0, w1, false);                  // lower quarter
        mb.mirror_triangles(w0, mb.triangle_count(), true);  // left wing
    }

    TriMesh mesh = mb.finish(domain, alpha, beta, h);
    extract_boundary_edges(mesh);
    return mesh;
}

TriMesh refine(const TriMesh& mesh) {
    MeshBuilder mb;
    for (const Vec2& p : mesh.vertices) mb.add(p.x(), p.y());

    // Arc-tagged boundary edges get their midpoints snapped back to the
    // exact circle.
    std::map<std::pair<int, int>, BoundaryTag> arc_edges;
    for (const auto& e : mesh.boundary_edges) {
        if (e.tag == BoundaryTag::ArcPlus || e.tag == BoundaryTag::ArcMinus) {
            int a = e.a, b = e.b;
            if (a > b) std::swap(a, b);
            arc_edges.emplace(std::make_pair(a, b), e.tag);
        }
    }

    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        int lo = a, hi = b;
        if (lo > hi) std::swap(lo, hi);
        auto it = midpoint.find({lo, hi});
        if (it != midpoint.end()) return it->second;
        const Vec2& pa = mesh.vertices[a];
        const Vec2& pb = mesh.vertices[b];
        double mx = 0.5 * (pa.x() + pb.x());
        double my = 0.5 * (pa.y() + pb.y());
        auto arc = arc_edges.find({lo, hi});
        if (arc != arc_edges.end()) {
            const Vec2 c = mesh.arc_center(arc->second);
            const double nrm = std::hypot(mx - c.x(), my - c.y());
            mx = c.x() + mesh.beta * ((mx - c.x()) / nrm);
            my = c.y() + mesh.beta * ((my - c.y()) / nrm);
        }
        const int id = mb.add(mx, my);
        midpoint.emplace(std::make_pair(lo, hi), id);
        return id;
    };

    for (const auto& t : mesh.triangles) {
        const int m01 = mid(t[0], t[1]);
        const int m12 = mid(t[1], t[2]);
        const int m02 = mid(t[0], t[2]);
        mb.tri(t[0], m01, m02);
        mb.tri(m01, t[1], m12);
        mb.tri(m02, m12, t[2]);
        mb.tri(m01, m12, m02);
    }

    TriMesh out = mb.finish(mesh.domain, mesh.alpha, mesh.beta, mesh.h / 2.0);
    extract_boundary_edges(out);
    return out;
}

std::vector<BoundaryQuadPoint> boundary_quadrature(const TriMesh& mesh,
                                                   std::optional<std::vector<BoundaryTag>> tags) {
    // 3-point Gauss-Legendre on (0,1).
    static const double gs[3] = {0.5 - std::sqrt(0.15), 0.5, 0.5 + std::sqrt(0.15)};
    static const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

    auto wanted = [&](BoundaryTag t) {
        if (!tags) return true;
        return std::find(tags->begin(), tags->end(), t) != tags->end();
    };

    std::vector<BoundaryQuadPoint> pts;
    for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
        const auto& be = mesh.boundary_edges[e];
        if (!wanted(be.tag)) continue;
        const Vec2& pa = mesh.vertices[be.a];
        const Vec2& pb = mesh.vertices[be.b];
        if (be.tag == BoundaryTag::ArcPlus || be.tag == BoundaryTag::ArcMinus) {
            const Vec2 c = mesh.arc_center(be.tag);
            const Vec2 u1 = (pa - c).normalized();
            const Vec2 u2 = (pb - c).normalized();
            const double dth = std::atan2(u1.x() * u2.y() - u1.y() * u2.x(), u1.dot(u2));
            const double arclen = mesh.beta * std::abs(dth);
            for (int g = 0; g < 3; ++g) {
                const double th = gs[g] * dth;
                const double ct = std::cos(th), st = std::sin(th);
                const Vec2 u(ct * u1.x() - st * u1.y(), st * u1.x() + ct * u1.y());
                pts.push_back({c + mesh.beta * u, gw[g] * arclen, u, be.tag,
                               static_cast<int>(e), gs[g]});
            }
        } else {
            Vec2 n;
            switch (be.tag) {
                case BoundaryTag::RectTop: n = Vec2(0, 1); break;
                case BoundaryTag::RectBottom: n = Vec2(0, -1); break;
                case BoundaryTag::RectLeft: n = Vec2(-1, 0); break;
                default: n = Vec2(1, 0); break;
            }
            const double len = (pb - pa).norm();
            for (int g = 0; g < 3; ++g)
                pts.push_back({pa + gs[g] * (pb - pa), gw[g] * len, n, be.tag,
                               static_cast<int>(e), gs[g]});
        }
    }
    return pts;
}

namespace {

const char* tag_name(BoundaryTag t) {
    switch (t) {
        case BoundaryTag::RectTop: return "RectTop";
        case BoundaryTag::RectBottom: return "RectBottom";
        case BoundaryTag::ArcPlus: return "ArcPlus";
        case BoundaryTag::ArcMinus: return "ArcMinus";
        case BoundaryTag::RectLeft: return "RectLeft";
        default: return "RectRight";
    }
}

BoundaryTag tag_from_name(const std::string& s) {
    if (s == "RectTop") return BoundaryTag::RectTop;
    if (s == "RectBottom") return BoundaryTag::RectBottom;
    if (s == "ArcPlus") return BoundaryTag::ArcPlus;
    if (s == "ArcMinus") return BoundaryTag::ArcMinus;
    if (s == "RectLeft") return BoundaryTag::RectLeft;
    if (s == "RectRight") return BoundaryTag::RectRight;
    throw std::runtime_error("unknown boundary tag: " + s);
}

const char* domain_name(MeshDomain d) {
    switch (d) {
        case MeshDomain::Stadium: return "stadium";
        case MeshDomain::RectangleOnly: return "rectangle";
        default: return "disk";
    }
}

MeshDomain domain_from_name(const std::string& s) {
    if (s == "stadium") return MeshDomain::Stadium;
    if (s == "rectangle") return MeshDomain::RectangleOnly;
    if (s == "disk") return MeshDomain::DiskOnly;
    throw std::runtime_error("unknown mesh domain: " + s);
}

}  // namespace

void write_mesh(const TriMesh& mesh, std::ostream& out) {
    char buf[80];
    out << "stadlab-mesh 1\n";
    out << "domain " << domain_name(mesh.domain) << "\n";
    std::snprintf(buf, sizeof(buf), "params %.17g %.17g %.17g\n", mesh.alpha, mesh.beta, mesh.h);
    out << buf;
    out << "vertices " << mesh.vertices.size() << "\n";
    for (const Vec2& p : mesh.vertices) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", p.x(), p.y());
        out << buf;
    }
    out << "triangles " << mesh.triangles.size() << "\n";
    for (const auto& t : mesh.triangles) out << t[0] << " " << t[1] << " " << t[2] << "\n";
    out << "boundary_edges " << mesh.boundary_edges.size() << "\n";
    for (const auto& e : mesh.boundary_edges)
        out << e.a << " " << e.b << " " << tag_name(e.tag) << "\n";
}

void write_mesh_file(const TriMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open mesh file for writing: " + path);
    write_mesh(mesh, out);
}

TriMesh read_mesh(std::istream& in) {
    std::string word;
    int version = 0;
    in >> word >> version;
    if (word != "stadlab-mesh" || version != 1) throw std::runtime_error("bad mesh file header");
    TriMesh mesh;
    std::string dom;
    in >> word >> dom;
    mesh.domain = domain_from_name(dom);
    in >> word >> mesh.alpha >> mesh.beta >> mesh.h;
    std::size_t n = 0;
    in >> word >> n;
    MeshBuilder mb;
    for (std::size_t i = 0; i < n; ++i) {
        double x, y;
        in >> x >> y;
        mb.add(x, y);
    }
    std::size_t nt = 0;
    in >> word >> nt;
    for (std::size_t i = 0; i < nt; ++i) {
        int a, b, c;
        in >> a >> b >> c;
        mb.tri(a, b, c);
    }
    std::size_t nb = 0;
    in >> word >> nb;
    std::vector<BoundaryEdge> bedges(nb);
    for (std::size_t i = 0; i < nb; ++i) {
        std::string tag;
        in >> bedges[i].a >> bedges[i].b >> tag;
        bedges[i].tag = tag_from_name(tag);
    }
    if (!in) throw std::runtime_error("truncated mesh file");
    TriMesh out = mb.finish(mesh.domain, mesh.alpha, mesh.beta, mesh.h);
    out.boundary_edges = std::move(bedges);
    return out;
}

TriMesh read_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mesh file: " + path);
    return read_mesh(in);
}

}  // namespace stadlab
