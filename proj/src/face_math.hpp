#pragma once

// Per-face formulas shared by the parallel kernels and the serial reference.

#include "dca/error.hpp"
#include "dca/lattice.hpp"

#include <cmath>
#include <span>
#include <string>

namespace dca::detail {

/// Solves grad.(z3-z1) = u3-u1 and grad.(z4-z2) = u4-u2 by Cramer's rule.
inline Point2 face_gradient(const std::array<Point2, 4>& z, double u1, double u2, double u3, double u4, Index f) {
    const Point2 d1 = z[2] - z[0];
    const Point2 d2 = z[3] - z[1];
    const double det = cross(d1, d2);
    if (!(std::abs(det) > 1e-14 * std::abs(d1) * std::abs(d2))) {
        throw Error(ErrorCode::DegenerateDiagonal, "face " + std::to_string(f) + " has parallel or empty diagonals");
    }
    const double a = u3 - u1;
    const double b = u4 - u2;
    return {(a * d2.imag() - b * d1.imag()) / det, (d1.real() * b - d2.real() * a) / det};
}

inline Point2 face_gradient(const QuadLattice& q, std::span<const double> u, Index f) {
    const Face& v = q.face(f);
    return face_gradient(q.corners(f), u[v[0]], u[v[1]], u[v[2]], u[v[3]], f);
}

/// Weight of the diagonal through slot s: |other diagonal| / |this diagonal|.
inline double diagonal_weight(const QuadLattice& q, Index f, int s) {
    const Face& v = q.face(f);
    const double own = std::abs(q.position(v[(s + 2) % 4]) - q.position(v[s]));
    const double other = std::abs(q.position(v[(s + 3) % 4]) - q.position(v[(s + 1) % 4]));
    return other / own;
}

inline double face_orthogonal_energy(const QuadLattice& q, std::span<const double> u, Index f) {
    const Face& v = q.face(f);
    const double l1 = std::abs(q.position(v[2]) - q.position(v[0]));
    const double l2 = std::abs(q.position(v[3]) - q.position(v[1]));
    const double a = u[v[2]] - u[v[0]];
    const double b = u[v[3]] - u[v[1]];
    return 0.5 * ((l2 / l1) * a * a + (l1 / l2) * b * b);
}

inline double face_definition_energy(const QuadLattice& q, std::span<const double> u, Index f) {
    return std::norm(face_gradient(q, u, f)) * std::abs(signed_area(q.corners(f)));
}

inline double vertex_laplacian(const QuadLattice& q, std::span<const double> u, Index z) {
    double sum = 0.0;
    for (const Incidence& in : q.incident(z)) {
        const Face& v = q.face(in.face);
        sum += diagonal_weight(q, in.face, in.slot) * (u[v[(in.slot + 2) % 4]] - u[z]);
    }
    return sum;
}

} // namespace dca::detail
