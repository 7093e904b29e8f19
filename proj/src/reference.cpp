#include "dca/kernels.hpp"

#include "face_math.hpp"

namespace dca::reference {

std::vector<Point2> gradient_field(const QuadLattice& q, std::span<const double> u) {
    std::vector<Point2> grad(q.face_count());
    for (Index f = 0; f < q.face_count(); ++f) grad[f] = detail::face_gradient(q, u, f);
    return grad;
}

double energy_definition(const QuadLattice& q, std::span<const double> u) {
    double e = 0.0;
    for (Index f = 0; f < q.face_count(); ++f) e += detail::face_definition_energy(q, u, f);
    return e;
}

double energy_orthogonal(const QuadLattice& q, std::span<const double> u) {
    double e = 0.0;
    for (Index f = 0; f < q.face_count(); ++f) e += detail::face_orthogonal_energy(q, u, f);
    return e;
}

std::vector<double> laplacian_field(const QuadLattice& q, std::span<const double> u) {
    std::vector<double> lap(q.vertex_count());
    for (Index z = 0; z < q.vertex_count(); ++z) lap[z] = detail::vertex_laplacian(q, u, z);
    return lap;
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
    for (std::size_t r = 0; r < a.rows; ++r) {
        double s = 0.0;
        for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.val[k] * x[a.col[k]];
        y[r] = s;
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace dca::reference
