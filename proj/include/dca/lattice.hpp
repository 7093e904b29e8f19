#pragma once

#include "dca/geometry.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dca {

using Index = std::size_t;

/// Four vertex indices in cyclic order; the diagonals are (v[0],v[2]) and (v[1],v[3]).
using Face = std::array<Index, 4>;

enum class Color : std::uint8_t { Black, White };

/// One face seen from one of its corners: `slot` is the position of the vertex inside the face.
struct Incidence {
    Index face;
    int slot;
};

/// An embedded, simply connected quadrilateral mesh with its bipartition and boundary cycle.
///
/// Instances are immutable once built; use build_lattice() to construct one.
class QuadLattice {
public:
    [[nodiscard]] std::size_t vertex_count() const noexcept { return positions_.size(); }
    [[nodiscard]] std::size_t face_count() const noexcept { return faces_.size(); }

    [[nodiscard]] const std::vector<Point2>& positions() const noexcept { return positions_; }
    [[nodiscard]] Point2 position(Index v) const { return positions_[v]; }
    [[nodiscard]] const std::vector<Face>& faces() const noexcept { return faces_; }
    [[nodiscard]] const Face& face(Index f) const { return faces_[f]; }
    [[nodiscard]] const std::vector<Color>& colors() const noexcept { return colors_; }
    [[nodiscard]] Color color(Index v) const { return colors_[v]; }

    /// Boundary vertices as one counterclockwise cycle.
    [[nodiscard]] const std::vector<Index>& boundary() const noexcept { return boundary_; }
    [[nodiscard]] bool on_boundary(Index v) const { return on_boundary_[v] != 0; }

    /// M(Q): the longest edge.
    [[nodiscard]] double max_edge() const noexcept { return max_edge_; }

    /// Faces around `v`, sorted counterclockwise by the direction of the outgoing edge.
    [[nodiscard]] std::span<const Incidence> incident(Index v) const {
        return {incidence_.data() + incidence_offset_[v], incidence_offset_[v + 1] - incidence_offset_[v]};
    }

    /// Slot (0 or 1) of the face whose diagonal (v[slot], v[slot+2]) is black.
    [[nodiscard]] int black_slot(Index f) const { return colors_[faces_[f][0]] == Color::Black ? 0 : 1; }

    [[nodiscard]] std::array<Point2, 4> corners(Index f) const {
        const Face& q = faces_[f];
        return {positions_[q[0]], positions_[q[1]], positions_[q[2]], positions_[q[3]]};
    }

    [[nodiscard]] Polyline boundary_polyline() const;

private:
    friend QuadLattice build_lattice(std::vector<Point2> positions, std::vector<Face> faces);

    std::vector<Point2> positions_;
    std::vector<Face> faces_;
    std::vector<Color> colors_;
    std::vector<Index> boundary_;
    std::vector<std::uint8_t> on_boundary_;
    std::vector<std::size_t> incidence_offset_;
    std::vector<Incidence> incidence_;
    double max_edge_ = 0.0;
};

/// Validates and assembles a lattice. Faces given clockwise are reversed to counterclockwise
/// keeping v[0] in place, so diagonals are preserved.
///
/// Throws Error with EmptyLattice, IndexOutOfRange, NonFiniteValue, DegenerateFace,
/// NonManifoldEdge, NonManifoldVertex, OverlappingFaces, MultipleBoundaryComponents,
/// NotBipartite or InvalidArgument (unused vertex).
[[nodiscard]] QuadLattice build_lattice(std::vector<Point2> positions, std::vector<Face> faces);

/// Proper 2-colouring of the edge graph by breadth-first search from vertex 0 (black).
[[nodiscard]] std::vector<Color> two_color(std::size_t vertex_count, std::span<const Face> faces);
[[nodiscard]] std::vector<Color> two_color(const QuadLattice& q);

struct FaceMetrics {
    double diameter = 0.0;
    double area = 0.0;
    double min_edge = 0.0;
    double max_edge = 0.0;
    double min_diagonal = 0.0;
    double max_diagonal = 0.0;
    double min_angle = 0.0;
    double max_edge_ratio = 0.0;
    double k_face = 0.0;
    double orthogonality_defect = 0.0;
    /// Angle between the diagonal lines, in (0, pi/2].
    double diagonal_angle = 0.0;
};

struct GeometryReport {
    double max_orthogonality_defect = 0.0;
    double k_round = 0.0;
    double skopenkov_C = 0.0;
    double max_diagonal_ratio = 0.0;
    double min_diagonal_angle = 0.0;
    std::size_t max_ball_count = 0;
    bool orthogonal = true;
    std::vector<FaceMetrics> per_face;
};

[[nodiscard]] FaceMetrics face_metrics(const QuadLattice& q, Index f);
[[nodiscard]] FaceMetrics face_metrics(const std::array<Point2, 4>& corners);

inline constexpr double default_ortho_tol = 1e-9;

/// Measures orthogonality, K-roundness and the Skopenkov constant. Never throws for a
/// non-orthogonal lattice; check `orthogonal` or call ensure_orthogonal().
[[nodiscard]] GeometryReport geometry_report(const QuadLattice& q, double ortho_tol = default_ortho_tol);

/// Throws Error(NotOrthogonal) when some face's defect exceeds `ortho_tol`.
void ensure_orthogonal(const QuadLattice& q, double ortho_tol = default_ortho_tol);

/// Faces sharing at least one vertex with `f` (including `f`), ascending.
[[nodiscard]] std::vector<Index> neighborhood(const QuadLattice& q, Index f);

struct CurveCover {
    std::vector<Index> faces;
    double diam_sum = 0.0;
};

/// All faces whose closed region meets the curve, with the sum of their diameters.
[[nodiscard]] CurveCover curve_cover(const QuadLattice& q, const Polyline& gamma);

} // namespace dca
