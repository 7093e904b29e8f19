#pragma once

#include "dca/lattice.hpp"

#include <complex>
#include <functional>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

namespace dca {

/// Real values indexed by lattice vertex.
using ScalarField = std::vector<double>;
/// Complex values indexed by lattice vertex.
using ComplexField = std::vector<std::complex<double>>;
/// One complex number per face.
using FaceGradientField = std::vector<std::complex<double>>;

using RealFunction = std::function<double(Point2)>;
using ComplexFunction = std::function<std::complex<double>(Point2)>;

/// Samples g at every vertex. Throws Error(NonFiniteValue) on NaN or infinity.
[[nodiscard]] ScalarField restrict_smooth(const RealFunction& g, const QuadLattice& q);
[[nodiscard]] ComplexField restrict_smooth(const ComplexFunction& g, const QuadLattice& q);

/// Picks the overload from the callable's return type, so plain lambdas work.
template <typename F>
    requires(!std::is_same_v<std::remove_cvref_t<F>, RealFunction> &&
             !std::is_same_v<std::remove_cvref_t<F>, ComplexFunction> && std::is_invocable_v<F, Point2>)
[[nodiscard]] auto restrict_smooth(F&& g, const QuadLattice& q) {
    if constexpr (std::is_convertible_v<std::invoke_result_t<F, Point2>, double>)
        return restrict_smooth(RealFunction(std::forward<F>(g)), q);
    else
        return restrict_smooth(ComplexFunction(std::forward<F>(g)), q);
}

/// The unique complex number grad with grad.(z3-z1) = u3-u1 and grad.(z4-z2) = u4-u2, where
/// a.b = Re(conj(a) b). On orthogonal faces this is
///   (u3-u1)(z3-z1)/|z3-z1|^2 + (u4-u2)(z4-z2)/|z4-z2|^2.
/// Throws Error(DegenerateDiagonal) if the diagonals are parallel.
[[nodiscard]] std::complex<double> discrete_gradient(const QuadLattice& q, std::span<const double> u, Index f);
[[nodiscard]] FaceGradientField gradient_field(const QuadLattice& q, std::span<const double> u);

struct EnergyForms {
    /// sum |grad u|^2 area(f)
    double definition_form = 0.0;
    /// 1/2 sum [ |d2|/|d1| (u3-u1)^2 + |d1|/|d2| (u4-u2)^2 ]
    double orthogonal_form = 0.0;
};

[[nodiscard]] EnergyForms dirichlet_energy(const QuadLattice& q, std::span<const double> u);

struct LaplacianForms {
    double ratio_form = 0.0;
    double gradient_form = 0.0;
};

/// Laplacian at vertex z, equal to -dE/du(z). `ratio_form` sums |d2|/|d1| (u(z3)-u(z)) over the faces
/// around z, with z relabelled as z1; `gradient_form` sums (i grad u) . (z4 - z2) with the faces
/// counterclockwise, which is the same quantity on orthogonal faces.
[[nodiscard]] LaplacianForms discrete_laplacian(const QuadLattice& q, std::span<const double> u, Index z);

/// Ratio-form Laplacian at every vertex (boundary vertices included, summing their partial stars).
[[nodiscard]] ScalarField laplacian_field(const QuadLattice& q, std::span<const double> u);

/// max over faces of |(g1-g3)/(z1-z3) - (g2-g4)/(z2-z4)|
[[nodiscard]] double holomorphicity_residual(const QuadLattice& q, std::span<const std::complex<double>> g);

struct HarmonicConjugate {
    ScalarField v;
    double max_cycle_residual = 0.0;
};

/// Integrates the Cauchy-Riemann relations of u along a spanning tree of each diagonal graph,
/// pinning v = 0 at the lowest-index black and the lowest-index white vertex. The residual is the
/// largest violation over the remaining diagonals; it vanishes exactly when u is discrete harmonic.
///
/// Throws Error(NotOrthogonal) or Error(DisconnectedDiagonalGraph).
[[nodiscard]] HarmonicConjugate harmonic_conjugate(const QuadLattice& q, std::span<const double> u);

/// Black vertices w0..wm; faces[i] has the black diagonal {w_i, w_{i+1}}.
struct BlackPath {
    std::vector<Index> vertices;
    std::vector<Index> faces;
};

/// Throws Error(InvalidPath) if the path is not a chain of black diagonals.
void validate_path(const QuadLattice& q, const BlackPath& p);

/// Euclidean length sum |w_i - w_{i-1}|.
[[nodiscard]] double path_length(const QuadLattice& q, const BlackPath& p);

/// sum |grad u(f_i)|^2 |w_i - w_{i-1}|. Throws Error(InvalidPath).
[[nodiscard]] double semi_energy(const QuadLattice& q, std::span<const double> u, const BlackPath& p);

/// (u(w_m) - u(w_0))^2 / length, the lower bound for semi_energy.
[[nodiscard]] double semi_energy_bound(const QuadLattice& q, std::span<const double> u, const BlackPath& p);

} // namespace dca
