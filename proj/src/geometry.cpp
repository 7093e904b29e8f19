#include "dca/geometry.hpp"

#include "dca/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dca {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::NotBipartite: return "NotBipartite";
    case ErrorCode::NonManifoldEdge: return "NonManifoldEdge";
    case ErrorCode::NonManifoldVertex: return "NonManifoldVertex";
    case ErrorCode::OverlappingFaces: return "OverlappingFaces";
    case ErrorCode::MultipleBoundaryComponents: return "MultipleBoundaryComponents";
    case ErrorCode::EmptyLattice: return "EmptyLattice";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::DegenerateDiagonal: return "DegenerateDiagonal";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::DisconnectedDiagonalGraph: return "DisconnectedDiagonalGraph";
    case ErrorCode::InvalidPath: return "InvalidPath";
    case ErrorCode::EmptyPolyline: return "EmptyPolyline";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::DisconnectedInteriorComponent: return "DisconnectedInteriorComponent";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::CycleLengthMismatch: return "CycleLengthMismatch";
    case ErrorCode::NonSphericalResult: return "NonSphericalResult";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidBoundaryRadii: return "InvalidBoundaryRadii";
    case ErrorCode::ClippedToEmpty: return "ClippedToEmpty";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::SquareTooSmall: return "SquareTooSmall";
    case ErrorCode::SquareNotInterior: return "SquareNotInterior";
    case ErrorCode::BallOutOfRange: return "BallOutOfRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

double signed_area(std::span<const Point2> polygon) noexcept {
    double twice = 0.0;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        twice += cross(polygon[i], polygon[(i + 1) % n]);
    }
    return 0.5 * twice;
}

namespace {

int sign(double v) noexcept { return (v > 0.0) - (v < 0.0); }

bool on_segment(Point2 p, Point2 a, Point2 b) noexcept {
    return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

} // namespace

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) noexcept {
    const int d1 = sign(orient(q1, q2, p1));
    const int d2 = sign(orient(q1, q2, p2));
    const int d3 = sign(orient(p1, p2, q1));
    const int d4 = sign(orient(p1, p2, q2));
    if (d1 * d2 < 0 && d3 * d4 < 0) return true;
    if (d1 == 0 && on_segment(p1, q1, q2)) return true;
    if (d2 == 0 && on_segment(p2, q1, q2)) return true;
    if (d3 == 0 && on_segment(q1, p1, p2)) return true;
    if (d4 == 0 && on_segment(q2, p1, p2)) return true;
    return false;
}

bool segments_cross_properly(Point2 p1, Point2 p2, Point2 q1, Point2 q2) noexcept {
    const int d1 = sign(orient(q1, q2, p1));
    const int d2 = sign(orient(q1, q2, p2));
    const int d3 = sign(orient(p1, p2, q1));
    const int d4 = sign(orient(p1, p2, q2));
    return d1 * d2 < 0 && d3 * d4 < 0;
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) noexcept {
    const Point2 ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

bool point_in_polygon(Point2 p, std::span<const Point2> polygon) noexcept {
    const std::size_t n = polygon.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2 a = polygon[j];
        const Point2 b = polygon[i];
        if (orient(a, b, p) == 0.0 && on_segment(p, a, b)) return true;
        if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
            const double x = a.real() + (p.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
            if (p.real() < x) inside = !inside;
        }
    }
    return inside;
}

bool segment_meets_disk(Point2 a, Point2 b, Point2 center, double radius) noexcept {
    return point_segment_distance(center, a, b) <= radius;
}

bool polygon_meets_disk(std::span<const Point2> polygon, Point2 center, double radius) noexcept {
    if (point_in_polygon(center, polygon)) return true;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (segment_meets_disk(polygon[i], polygon[(i + 1) % n], center, radius)) return true;
    }
    return false;
}

double interior_angle(Point2 prev, Point2 at, Point2 next) noexcept {
    const Point2 to_next = next - at;
    const Point2 to_prev = prev - at;
    double a = std::atan2(cross(to_next, to_prev), dot(to_next, to_prev));
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    return a;
}

std::size_t Polyline::segment_count() const noexcept {
    if (points.size() < 2) return 0;
    return closed ? points.size() : points.size() - 1;
}

double Polyline::length() const noexcept {
    double total = 0.0;
    for (std::size_t i = 0; i < segment_count(); ++i) total += std::abs(segment_end(i) - segment_start(i));
    return total;
}

std::vector<Point2> densify(const Polyline& line, double step) {
    if (line.points.empty()) throw Error(ErrorCode::EmptyPolyline, "cannot densify an empty polyline");
    if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "sample step must be positive");
    std::vector<Point2> out;
    if (line.points.size() == 1) {
        out.push_back(line.points.front());
        return out;
    }
    for (std::size_t i = 0; i < line.segment_count(); ++i) {
        const Point2 a = line.segment_start(i);
        const Point2 b = line.segment_end(i);
        const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(std::abs(b - a) / step)));
        for (std::size_t k = 0; k < pieces; ++k) {
            out.push_back(a + (b - a) * (static_cast<double>(k) / static_cast<double>(pieces)));
        }
    }
    if (!line.closed) out.push_back(line.points.back());
    return out;
}

double directed_distance(std::span<const Point2> samples, const Polyline& line) {
    if (line.points.empty()) throw Error(ErrorCode::EmptyPolyline, "target polyline is empty");
    const std::size_t segments = line.segment_count();
    const auto count = static_cast<std::ptrdiff_t>(samples.size());
    double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
    for (std::ptrdiff_t s = 0; s < count; ++s) {
        const Point2 p = samples[static_cast<std::size_t>(s)];
        double best = segments == 0 ? std::abs(p - line.points.front()) : std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < segments; ++i) {
            best = std::min(best, point_segment_distance(p, line.segment_start(i), line.segment_end(i)));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

double hausdorff_distance(const Polyline& a, const Polyline& b, double sample_step) {
    if (a.points.empty() || b.points.empty()) {
        throw Error(ErrorCode::EmptyPolyline, "Hausdorff distance needs two non-empty polylines");
    }
    const auto sa = densify(a, sample_step);
    const auto sb = densify(b, sample_step);
    return std::max(directed_distance(sa, b), directed_distance(sb, a));
}

} // namespace dca
