#include "dca/kernels.hpp"

#include "face_math.hpp"

#include <algorithm>

namespace dca::kernels {

namespace {

template <class Term>
double blocked_sum(std::size_t n, Term term) {
    const std::size_t blocks = (n + reduction_block - 1) / reduction_block;
    std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * reduction_block;
        const std::size_t hi = std::min(n, lo + reduction_block);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[static_cast<std::size_t>(b)] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

} // namespace

std::vector<Point2> gradient_field(const QuadLattice& q, std::span<const double> u) {
    const auto nf = static_cast<std::ptrdiff_t>(q.face_count());
    std::vector<Point2> grad(q.face_count());
    // Exceptions must not escape an OpenMP region; collect the first failing face instead.
    std::ptrdiff_t bad = nf;
#pragma omp parallel for schedule(static) reduction(min : bad)
    for (std::ptrdiff_t f = 0; f < nf; ++f) {
        try {
            grad[static_cast<std::size_t>(f)] = detail::face_gradient(q, u, static_cast<Index>(f));
        } catch (const Error&) {
            bad = std::min(bad, f);
        }
    }
    if (bad != nf) (void)detail::face_gradient(q, u, static_cast<Index>(bad));
    return grad;
}

double energy_definition(const QuadLattice& q, std::span<const double> u) {
    const auto grad = gradient_field(q, u);
    return blocked_sum(q.face_count(),
                       [&](std::size_t f) { return std::norm(grad[f]) * std::abs(signed_area(q.corners(f))); });
}

double energy_orthogonal(const QuadLattice& q, std::span<const double> u) {
    return blocked_sum(q.face_count(), [&](std::size_t f) { return detail::face_orthogonal_energy(q, u, f); });
}

std::vector<double> laplacian_field(const QuadLattice& q, std::span<const double> u) {
    const auto nv = static_cast<std::ptrdiff_t>(q.vertex_count());
    std::vector<double> lap(q.vertex_count());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t z = 0; z < nv; ++z) {
        lap[static_cast<std::size_t>(z)] = detail::vertex_laplacian(q, u, static_cast<Index>(z));
    }
    return lap;
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
    const auto rows = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        double s = 0.0;
        for (std::size_t k = a.row_ptr[static_cast<std::size_t>(r)]; k < a.row_ptr[static_cast<std::size_t>(r) + 1]; ++k) {
            s += a.val[k] * x[a.col[k]];
        }
        y[static_cast<std::size_t>(r)] = s;
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    return blocked_sum(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

} // namespace dca::kernels
