#pragma once

// Hot loops of the operators and the solver, in two interchangeable flavours:
//   dca::kernels    OpenMP-parallel, deterministic for any thread count
//   dca::reference  plain serial loops, kept as the test oracle for the parallel versions
//
// Reductions in dca::kernels use a fixed block partition (independent of the number of
// threads) followed by a serial sum over blocks, so results are bitwise reproducible.

#include "dca/lattice.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dca {

/// Compressed sparse row matrix.
struct CsrMatrix {
    std::size_t rows = 0;
    std::vector<std::size_t> row_ptr{0};
    std::vector<std::size_t> col;
    std::vector<double> val;
};

namespace kernels {

inline constexpr std::size_t reduction_block = 2048;

[[nodiscard]] std::vector<Point2> gradient_field(const QuadLattice& q, std::span<const double> u);
[[nodiscard]] double energy_definition(const QuadLattice& q, std::span<const double> u);
[[nodiscard]] double energy_orthogonal(const QuadLattice& q, std::span<const double> u);
[[nodiscard]] std::vector<double> laplacian_field(const QuadLattice& q, std::span<const double> u);

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);

} // namespace kernels

namespace reference {

[[nodiscard]] std::vector<Point2> gradient_field(const QuadLattice& q, std::span<const double> u);
[[nodiscard]] double energy_definition(const QuadLattice& q, std::span<const double> u);
[[nodiscard]] double energy_orthogonal(const QuadLattice& q, std::span<const double> u);
[[nodiscard]] std::vector<double> laplacian_field(const QuadLattice& q, std::span<const double> u);

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);

} // namespace reference

} // namespace dca
