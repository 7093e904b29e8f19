#pragma once

#include "dca/lattice.hpp"
#include "dca/operators.hpp"
#include "dca/solver.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dca {

/// A smooth real function with whatever derivative information is known in closed form.
/// Missing derivatives fall back to central finite differences.
struct SmoothFunction {
    std::string name;
    std::function<double(Point2)> value;
    /// (d/dx, d/dy) packed as a complex number.
    std::function<Point2(Point2)> gradient;
    std::function<double(Point2)> laplacian;
    /// Bounds on |D^2 g| and |D^3 g| over the region of interest, if known.
    std::optional<double> d2_bound;
    std::optional<double> d3_bound;

    [[nodiscard]] Point2 grad(Point2 z) const;
    [[nodiscard]] double lap(Point2 z) const;
    [[nodiscard]] RealFunction as_real() const { return value; }
};

[[nodiscard]] SmoothFunction constant_function(double c);
/// Re z^k, harmonic.
[[nodiscard]] SmoothFunction re_power(int k);
/// Im z^k, harmonic.
[[nodiscard]] SmoothFunction im_power(int k);
/// |z|^2, Laplacian 4.
[[nodiscard]] SmoothFunction abs_squared();

/// Integral of f over the rectangle [x0,x1] x [y0,y1] by tensor Gauss-Legendre on panels x panels cells.
[[nodiscard]] double integrate_rectangle(const std::function<double(Point2)>& f, double x0, double y0, double x1,
                                         double y1, int panels = 16);

/// Integral of f over the region covered by the lattice (degree-5 rule on the two triangles of each face).
[[nodiscard]] double integrate_lattice(const QuadLattice& q, const std::function<double(Point2)>& f);

/// Continuum Dirichlet energy of g over the lattice region.
[[nodiscard]] double continuum_energy(const QuadLattice& q, const SmoothFunction& g);

struct LatticeSequence {
    std::vector<QuadLattice> lattices;
    /// Boundary of the target domain.
    Polyline domain_boundary;
};

struct ApproximationRow {
    double max_edge = 0.0;
    double hausdorff = 0.0;
};

struct ApproximationReport {
    std::vector<ApproximationRow> rows;
    bool mesh_shrinks = false;
    bool boundary_converges = false;
    bool pass = false;
};

/// M(Q_n) and the boundary Hausdorff distance per lattice; passes when both end at most half of
/// where they started (a Hausdorff distance below `zero_tol` counts as zero).
[[nodiscard]] ApproximationReport approximation_check(const LatticeSequence& seq, double sample_step = 0.0,
                                                      double zero_tol = 1e-12);

struct Square {
    double x0 = 0.0;
    double y0 = 0.0;
    double side = 0.0;
};

struct LaplacianSquareResult {
    double discrete_sum = 0.0;
    double continuous_integral = 0.0;
    double error = 0.0;
    /// M(Q) r max|D^2 g| + r^3 max|D^3 g|
    double bound_shape = 0.0;
    double ratio = 0.0;
    std::size_t black_vertices = 0;
};

/// Sum of the discrete Laplacian of g over black vertices in the closed square, against the
/// integral of the continuum Laplacian over the square.
/// Throws Error(SquareTooSmall) when side <= M(Q) and Error(SquareNotInterior).
[[nodiscard]] LaplacianSquareResult laplacian_square_test(const QuadLattice& q, const SmoothFunction& g,
                                                          const Square& r);

struct EnergyRow {
    double max_edge = 0.0;
    double energy = 0.0;
    double relative_error = 0.0;
};

[[nodiscard]] std::vector<EnergyRow> energy_convergence_test(const LatticeSequence& seq, const SmoothFunction& g,
                                                             double exact_energy);

struct ConvergenceRow {
    std::size_t n = 0;
    double max_edge = 0.0;
    double hausdorff = 0.0;
    double sup_error = 0.0;
    double energy_error = 0.0;
    double solver_residual = 0.0;
    double k_round = 0.0;
    double skopenkov_C = 0.0;
    std::size_t vertices = 0;
    bool converged = true;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    std::map<std::string, std::string> metadata;
};

/// Solves the Dirichlet problem with boundary data g on every lattice and measures the error
/// against g itself, which must be harmonic so that it is the continuum solution.
[[nodiscard]] ConvergenceTable convergence_experiment(const LatticeSequence& seq, const SmoothFunction& g,
                                                      const SolverConfig& config = {});

struct EquiProbe {
    Index z = 0;
    Index w = 0;
    double R = 0.0;
    double lhs = 0.0;
    double ball_energy = 0.0;
    double energy_term = 0.0;
    double boundary_term = 0.0;
    std::optional<double> implied_CK;
    std::size_t ball_faces = 0;
};

/// Compares |u(z) - u(w)| with E_R(u)^{1/2} log^{-1/2}(R / max(|z-w|, M)) plus the oscillation of u
/// over boundary vertices in the ball, where E_R is the energy of the faces meeting the closed ball
/// of radius R about (z+w)/2. Requires black z, w and R > max(|z-w|, M(Q)) so the logarithm is
/// positive; throws Error(BallOutOfRange) otherwise.
[[nodiscard]] EquiProbe equicontinuity_probe(const QuadLattice& q, std::span<const double> u, Index z, Index w,
                                             double R);

/// Vertex closest to a point, optionally restricted to one colour.
[[nodiscard]] Index nearest_vertex(const QuadLattice& q, Point2 p, std::optional<Color> colour = std::nullopt);

} // namespace dca
