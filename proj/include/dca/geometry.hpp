#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dca {

/// A point of the plane, read as the complex number x + iy.
using Point2 = std::complex<double>;

/// Euclidean dot product of two complex numbers seen as vectors: (a+ib).(c+id) = ac + bd.
[[nodiscard]] inline double dot(Point2 a, Point2 b) noexcept {
    return a.real() * b.real() + a.imag() * b.imag();
}

/// z-component of the 2-d cross product a x b.
[[nodiscard]] inline double cross(Point2 a, Point2 b) noexcept {
    return a.real() * b.imag() - a.imag() * b.real();
}

/// Orientation of the triple (a, b, c): positive for a counterclockwise turn.
[[nodiscard]] inline double orient(Point2 a, Point2 b, Point2 c) noexcept {
    return cross(b - a, c - a);
}

[[nodiscard]] inline bool is_finite(Point2 p) noexcept {
    return std::isfinite(p.real()) && std::isfinite(p.imag());
}

/// Shoelace signed area of a closed polygon given in cyclic order.
[[nodiscard]] double signed_area(std::span<const Point2> polygon) noexcept;

/// True when the closed segments [p1,p2] and [q1,q2] share at least one point.
[[nodiscard]] bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) noexcept;

/// True when the segments cross at a single interior point of both.
[[nodiscard]] bool segments_cross_properly(Point2 p1, Point2 p2, Point2 q1, Point2 q2) noexcept;

[[nodiscard]] double point_segment_distance(Point2 p, Point2 a, Point2 b) noexcept;

/// Closed point-in-polygon test; points on the boundary count as inside.
[[nodiscard]] bool point_in_polygon(Point2 p, std::span<const Point2> polygon) noexcept;

/// True when the closed segment meets the closed disk.
[[nodiscard]] bool segment_meets_disk(Point2 a, Point2 b, Point2 center, double radius) noexcept;

/// True when the closed polygon region meets the closed disk.
[[nodiscard]] bool polygon_meets_disk(std::span<const Point2> polygon, Point2 center, double radius) noexcept;

/// Interior angle of a counterclockwise polygon at the vertex `at`, in (0, 2pi).
[[nodiscard]] double interior_angle(Point2 prev, Point2 at, Point2 next) noexcept;

struct Polyline {
    std::vector<Point2> points;
    bool closed = false;

    [[nodiscard]] std::size_t segment_count() const noexcept;
    [[nodiscard]] Point2 segment_start(std::size_t i) const { return points[i]; }
    [[nodiscard]] Point2 segment_end(std::size_t i) const { return points[(i + 1) % points.size()]; }
    [[nodiscard]] double length() const noexcept;
};

/// Resamples every segment so that consecutive samples are at most `step` apart.
/// Throws Error(EmptyPolyline) on an empty polyline.
[[nodiscard]] std::vector<Point2> densify(const Polyline& line, double step);

/// Symmetric Hausdorff distance between two polylines, accurate to within `sample_step`.
[[nodiscard]] double hausdorff_distance(const Polyline& a, const Polyline& b, double sample_step);

/// Directed distance sup_{p in samples} dist(p, line).
[[nodiscard]] double directed_distance(std::span<const Point2> samples, const Polyline& line);

} // namespace dca
