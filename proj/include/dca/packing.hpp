#pragma once

#include "dca/lattice.hpp"
#include "dca/surface.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace dca {

/// Combinatorial disk triangulation with consistently oriented triangles.
struct Triangulation {
    std::size_t vertex_count = 0;
    std::vector<Triangle> triangles;
    /// Boundary vertices in cyclic order.
    std::vector<Index> boundary;
};

/// One interior vertex 0 surrounded by `petals` boundary vertices 1..petals.
[[nodiscard]] Triangulation flower(int petals);

/// Removes a vertex and its star from a closed triangulation; the link becomes the boundary.
/// Vertices are renumbered densely, skipping `removed`.
[[nodiscard]] Triangulation puncture(std::size_t vertex_count, std::span<const Triangle> triangles, Index removed);

/// Punctures a welded surface at a vertex of least eccentricity in the surface graph, preferring
/// larger degree and then lower index. This keeps the spread of radii small.
[[nodiscard]] Triangulation open_surface(const WeldedSurface& s);

struct CirclePacking {
    Triangulation triangulation;
    std::vector<double> radii;
    std::vector<Point2> centers;
    /// max over interior vertices of |angle sum - 2 pi|
    double angle_residual = 0.0;
    /// max over edges of | |c_i - c_j| - (r_i + r_j) | / (r_i + r_j)
    double tangency_error = 0.0;
    std::size_t sweeps = 0;
};

/// Angle at v in the triangle of mutually tangent circles with radii rv, ra, rb.
[[nodiscard]] double tangency_angle(double rv, double ra, double rb);

/// Finds interior radii whose angle sums are 2 pi, with the boundary radii held fixed (all 1 when
/// `boundary_radii` is empty; otherwise one per entry of t.boundary), then lays the circles out in
/// the plane from the first triangle.
///
/// Throws Error(InvalidBoundaryRadii), Error(InvalidArgument) for a triangulation without interior
/// vertices, or Error(NoConvergence) after `max_sweeps` Gauss-Seidel sweeps.
[[nodiscard]] CirclePacking circle_pack(const Triangulation& t, std::span<const double> boundary_radii = {},
                                        double tol = 1e-14, std::size_t max_sweeps = 200000);

/// min over interior v and neighbours w of r_w / r_v.
[[nodiscard]] double ring_ratio(const CirclePacking& p);

/// Incenter (a z1 + b z2 + c z3) / (a + b + c), with a, b, c the side lengths opposite z1, z2, z3.
[[nodiscard]] Point2 incenter(Point2 z1, Point2 z2, Point2 z3);

/// The three kites [z_k, c, i_T, c'] of a packed triangle, where c and c' are the tangency points
/// on the two sides at z_k and i_T is the incenter.
[[nodiscard]] std::array<std::array<Point2, 4>, 3> triangle_quads(const CirclePacking& p, Index t);

struct Disk {
    Point2 center;
    double radius;
};

struct QuadOptions {
    /// Keep only quads lying inside this disk. Implies dropping boundary triangles.
    std::optional<Disk> clip;
    /// Drop triangles with a boundary vertex, whose circles are not controlled by the interior.
    bool drop_boundary_triangles = false;
};

/// Splits every kept triangle into three orthogonal kites, trims pinch points and stray pieces so the
/// result is a disk, and validates it as a lattice.
///
/// Throws Error(ClippedToEmpty) if nothing survives and Error(ValidationFailed) if the pieces do
/// not form a valid lattice or the incenter cross-check fails.
[[nodiscard]] QuadLattice pack_to_quads(const CirclePacking& p, const QuadOptions& options = {});

} // namespace dca
