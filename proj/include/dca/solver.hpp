#pragma once

#include "dca/kernels.hpp"
#include "dca/lattice.hpp"
#include "dca/operators.hpp"

#include <cstddef>
#include <vector>

namespace dca {

/// Same-colour diagonals as two weighted graphs. The black edge of a face has weight
/// |white diagonal| / |black diagonal| and the white edge the reciprocal.
struct DiagonalGraph {
    struct Edge {
        Index a;
        Index b;
        double weight;
        Index face;
    };
    std::vector<Edge> black;
    std::vector<Edge> white;
    /// 1 for vertices not on the boundary.
    std::vector<std::uint8_t> interior;
};

/// Throws Error(NotOrthogonal) for non-orthogonal lattices.
[[nodiscard]] DiagonalGraph assemble(const QuadLattice& q);

enum class Preconditioner { None, Diagonal };

struct SolverConfig {
    /// Relative residual ||b - Ax|| / ||b|| at which conjugate gradients stops.
    double tolerance = 1e-10;
    /// 0 means 10 times the number of interior vertices.
    std::size_t max_iterations = 0;
    Preconditioner preconditioner = Preconditioner::Diagonal;
    /// Use the OpenMP kernels; false runs the serial reference loops.
    bool parallel = true;
    /// Optional starting field (one value per vertex). Empty: each colour starts at the mean of its boundary values.
    std::vector<double> initial_guess;
};

/// Boundary values listed in the order of q.boundary().
struct DirichletProblem {
    const QuadLattice& lattice;
    std::vector<double> boundary_values;
};

/// Samples g on the boundary cycle.
[[nodiscard]] std::vector<double> boundary_data(const QuadLattice& q, const RealFunction& g);

struct Solution {
    ScalarField field;
    std::size_t iterations_black = 0;
    std::size_t iterations_white = 0;
    /// Largest relative residual of the two colour systems.
    double final_residual = 0.0;
    double energy = 0.0;
    /// max |Laplacian u| over interior vertices.
    double laplacian_residual = 0.0;
    bool converged = true;
};

/// Minimises the Dirichlet energy with the given boundary values by preconditioned conjugate
/// gradients on each colour. Non-convergence is reported through `converged`, with the best
/// iterate returned. Throws Error(SizeMismatch) or Error(DisconnectedInteriorComponent).
[[nodiscard]] Solution solve(const DirichletProblem& problem, const SolverConfig& config = {});

/// Convenience overload taking boundary data from g.
[[nodiscard]] Solution solve(const QuadLattice& q, const RealFunction& g, const SolverConfig& config = {});

struct MaxPrincipleReport {
    bool pass = true;
    double max_all = 0.0;
    double max_boundary_all = 0.0;
    double max_black = 0.0;
    double max_boundary_black = 0.0;
    double min_all = 0.0;
    double min_boundary_all = 0.0;
    Index argmax_all = 0;
    Index argmax_black = 0;
    Index argmin_all = 0;
};

/// Checks max u <= max over boundary + slack on all vertices and on black vertices, and the
/// mirrored statement for the minimum.
[[nodiscard]] MaxPrincipleReport check_maximum_principle(const QuadLattice& q, std::span<const double> u,
                                                         double slack);

/// Interior system of one colour, exposed for benchmarks and tests.
struct ColourSystem {
    std::vector<Index> unknowns;
    CsrMatrix matrix;
    std::vector<double> rhs;
};

[[nodiscard]] ColourSystem colour_system(const QuadLattice& q, const DiagonalGraph& g, Color colour,
                                         std::span<const double> field);

struct CgResult {
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    bool converged = true;
};

/// Preconditioned conjugate gradients on a symmetric positive definite system; x holds the start
/// and receives the best iterate.
CgResult conjugate_gradient(const CsrMatrix& a, std::span<const double> b, std::span<double> x,
                            const SolverConfig& config);

} // namespace dca
