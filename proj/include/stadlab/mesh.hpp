#pragma once

#include "stadlab/geometry.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace stadlab {

// RectLeft/RectRight occur only on the rectangle-only oracle domain; the
// stadium has no vertical straight sides.
enum class BoundaryTag { RectTop, RectBottom, ArcPlus, ArcMinus, RectLeft, RectRight };

enum class MeshDomain { Stadium, RectangleOnly, DiskOnly };

struct BoundaryEdge {
    int a;
    int b;
    BoundaryTag tag;
};

// Conforming P1 triangulation.  Construction enforces mirror symmetry in
// both axes; mirror_x/mirror_y are the exact vertex permutations realizing
// the reflections (bit-identical coordinates).
struct TriMesh {
    MeshDomain domain = MeshDomain::Stadium;
    double alpha = 1.0;
    double beta = 1.0;
    double h = 0.0;

    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;  // counter-clockwise
    std::vector<BoundaryEdge> boundary_edges;
    std::vector<int> mirror_x;
    std::vector<int> mirror_y;

    double triangle_area(int t) const;
    double total_area() const;
    double min_angle_deg() const;
    std::vector<bool> boundary_vertex_mask() const;

    // Center of the exact circle an arc-tagged edge lies on.
    Vec2 arc_center(BoundaryTag tag) const;
};

TriMesh build_mesh(MeshDomain domain, double alpha, double beta, double h);
TriMesh refine(const TriMesh& mesh);

struct BoundaryQuadPoint {
    Vec2 point;     // on the exact boundary for arc edges
    double weight;  // arc-length (or segment-length) Gauss weight
    Vec2 normal;    // exact outward normal at the point
    BoundaryTag tag;
    int edge;       // index into boundary_edges
    double t;       // parameter in (0,1) along the edge, a -> b
};

// Gauss points along the selected boundary edges.  Arc edges carry exact
// arc-length weights and exact radial normals.
std::vector<BoundaryQuadPoint> boundary_quadrature(
    const TriMesh& mesh, std::optional<std::vector<BoundaryTag>> tags = std::nullopt);

void write_mesh(const TriMesh& mesh, std::ostream& out);
void write_mesh_file(const TriMesh& mesh, const std::string& path);
TriMesh read_mesh(std::istream& in);
TriMesh read_mesh_file(const std::string& path);

}  // namespace stadlab
