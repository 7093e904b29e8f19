#pragma once

#include "dca/lattice.hpp"

#include <cstddef>

namespace dca {

/// Axis-aligned grid of squares of side h covering [x0,x1] x [y0,y1]. Vertex 0 is (x0,y0).
/// Throws Error(EmptyDomain) for an empty rectangle and Error(InvalidArgument) when h does not
/// divide both sides.
[[nodiscard]] QuadLattice gen_square(double x0, double y0, double x1, double y1, double h);

/// Nested square annuli centred at the origin, each generation of squares one third the size of the
/// previous, joined by a ring of orthogonal transition quads.
///
/// The outermost ring uses squares of side `base_size` and spans [-3pH, 3pH]^2 with p = `refinement`
/// and H = base_size; its hole has side (2p+2)*base_size, of which the outer layer holds the
/// transition quads. The innermost generation is a full (6p x 6p) block. levels = 1 is a plain grid.
[[nodiscard]] QuadLattice gen_adaptive_annuli(int levels, double base_size, int refinement = 1);

/// Strip of n alternating trapezoids with orthogonal diagonals of equal length and edges
/// eps, 2 - eps and two slanted ones. Requires 0 < eps < 1 and n >= 1.
[[nodiscard]] QuadLattice gen_degenerate_strip(double eps, int n);

} // namespace dca
