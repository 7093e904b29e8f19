#include "dca/operators.hpp"

#include "dca/error.hpp"
#include "dca/kernels.hpp"
#include "face_math.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>

namespace dca {

namespace {

template <class T>
void require_vertex_field(const QuadLattice& q, std::span<const T> u) {
    if (u.size() != q.vertex_count()) {
        throw Error(ErrorCode::SizeMismatch, "field has " + std::to_string(u.size()) + " values for " +
                                                 std::to_string(q.vertex_count()) + " vertices");
    }
}

} // namespace

ScalarField restrict_smooth(const RealFunction& g, const QuadLattice& q) {
    ScalarField out(q.vertex_count());
    for (Index v = 0; v < q.vertex_count(); ++v) {
        out[v] = g(q.position(v));
        if (!std::isfinite(out[v])) {
            throw Error(ErrorCode::NonFiniteValue, "function is not finite at vertex " + std::to_string(v));
        }
    }
    return out;
}

ComplexField restrict_smooth(const ComplexFunction& g, const QuadLattice& q) {
    ComplexField out(q.vertex_count());
    for (Index v = 0; v < q.vertex_count(); ++v) {
        out[v] = g(q.position(v));
        if (!is_finite(out[v])) {
            throw Error(ErrorCode::NonFiniteValue, "function is not finite at vertex " + std::to_string(v));
        }
    }
    return out;
}

std::complex<double> discrete_gradient(const QuadLattice& q, std::span<const double> u, Index f) {
    require_vertex_field(q, u);
    if (f >= q.face_count()) throw Error(ErrorCode::IndexOutOfRange, "no face " + std::to_string(f));
    return detail::face_gradient(q, u, f);
}

FaceGradientField gradient_field(const QuadLattice& q, std::span<const double> u) {
    require_vertex_field(q, u);
    return kernels::gradient_field(q, u);
}

EnergyForms dirichlet_energy(const QuadLattice& q, std::span<const double> u) {
    require_vertex_field(q, u);
    return {kernels::energy_definition(q, u), kernels::energy_orthogonal(q, u)};
}

LaplacianForms discrete_laplacian(const QuadLattice& q, std::span<const double> u, Index z) {
    require_vertex_field(q, u);
    if (z >= q.vertex_count()) throw Error(ErrorCode::IndexOutOfRange, "no vertex " + std::to_string(z));
    LaplacianForms out;
    out.ratio_form = detail::vertex_laplacian(q, u, z);
    for (const Incidence& in : q.incident(z)) {
        const Face& v = q.face(in.face);
        const Point2 grad = detail::face_gradient(q, u, in.face);
        const Point2 across = q.position(v[(in.slot + 3) % 4]) - q.position(v[(in.slot + 1) % 4]);
        out.gradient_form += dot(Point2{0.0, 1.0} * grad, across);
    }
    return out;
}

ScalarField laplacian_field(const QuadLattice& q, std::span<const double> u) {
    require_vertex_field(q, u);
    return kernels::laplacian_field(q, u);
}

double holomorphicity_residual(const QuadLattice& q, std::span<const std::complex<double>> g) {
    require_vertex_field(q, g);
    double worst = 0.0;
    for (Index f = 0; f < q.face_count(); ++f) {
        const Face& v = q.face(f);
        const auto z = q.corners(f);
        const auto a = (g[v[0]] - g[v[2]]) / (z[0] - z[2]);
        const auto b = (g[v[1]] - g[v[3]]) / (z[1] - z[3]);
        worst = std::max(worst, std::abs(a - b));
    }
    return worst;
}

HarmonicConjugate harmonic_conjugate(const QuadLattice& q, std::span<const double> u) {
    require_vertex_field(q, u);
    ensure_orthogonal(q);
    // Each face constrains v across both diagonals: v[a] - v[b] = value.
    struct Constraint {
        Index a, b;
        double value;
    };
    std::vector<Constraint> constraints;
    constraints.reserve(2 * q.face_count());
    std::vector<std::vector<std::size_t>> touching(q.vertex_count());
    for (Index f = 0; f < q.face_count(); ++f) {
        const Face& v = q.face(f);
        const auto z = q.corners(f);
        const double lambda = std::abs(z[3] - z[1]) / std::abs(z[2] - z[0]);
        constraints.push_back({v[0], v[2], -(u[v[1]] - u[v[3]]) / lambda});
        constraints.push_back({v[1], v[3], lambda * (u[v[0]] - u[v[2]])});
        for (std::size_t c = constraints.size() - 2; c < constraints.size(); ++c) {
            touching[constraints[c].a].push_back(c);
            touching[constraints[c].b].push_back(c);
        }
    }

    HarmonicConjugate out;
    out.v.assign(q.vertex_count(), 0.0);
    std::vector<std::uint8_t> seen(q.vertex_count(), 0);
    for (Color colour : {Color::Black, Color::White}) {
        Index root = q.vertex_count();
        for (Index v = 0; v < q.vertex_count(); ++v) {
            if (q.color(v) == colour) {
                root = v;
                break;
            }
        }
        if (root == q.vertex_count()) continue;
        std::queue<Index> queue;
        seen[root] = 1;
        queue.push(root);
        while (!queue.empty()) {
            const Index x = queue.front();
            queue.pop();
            for (std::size_t c : touching[x]) {
                const Constraint& k = constraints[c];
                const Index y = k.a == x ? k.b : k.a;
                if (seen[y]) continue;
                seen[y] = 1;
                out.v[y] = k.a == x ? out.v[x] - k.value : out.v[x] + k.value;
                queue.push(y);
            }
        }
    }
    for (Index v = 0; v < q.vertex_count(); ++v) {
        if (!seen[v]) {
            throw Error(ErrorCode::DisconnectedDiagonalGraph,
                        "vertex " + std::to_string(v) + " is not reachable along same-colour diagonals");
        }
    }
    for (const Constraint& k : constraints) {
        out.max_cycle_residual = std::max(out.max_cycle_residual, std::abs(out.v[k.a] - out.v[k.b] - k.value));
    }
    return out;
}

void validate_path(const QuadLattice& q, const BlackPath& p) {
    if (p.vertices.empty()) throw Error(ErrorCode::InvalidPath, "path has no vertices");
    if (p.faces.size() + 1 != p.vertices.size()) {
        throw Error(ErrorCode::InvalidPath, "a path with m steps needs m faces and m+1 vertices");
    }
    for (Index w : p.vertices) {
        if (w >= q.vertex_count() || q.color(w) != Color::Black) {
            throw Error(ErrorCode::InvalidPath, "vertex " + std::to_string(w) + " is not a black vertex");
        }
    }
    for (std::size_t i = 0; i < p.faces.size(); ++i) {
        const Index f = p.faces[i];
        if (f >= q.face_count()) throw Error(ErrorCode::InvalidPath, "no face " + std::to_string(f));
        const int s = q.black_slot(f);
        const Index a = q.face(f)[s];
        const Index b = q.face(f)[s + 2];
        const Index x = p.vertices[i];
        const Index y = p.vertices[i + 1];
        if (!((a == x && b == y) || (a == y && b == x))) {
            throw Error(ErrorCode::InvalidPath, "step " + std::to_string(i) + " is not the black diagonal of face " +
                                                    std::to_string(f));
        }
    }
}

double path_length(const QuadLattice& q, const BlackPath& p) {
    double len = 0.0;
    for (std::size_t i = 1; i < p.vertices.size(); ++i) {
        len += std::abs(q.position(p.vertices[i]) - q.position(p.vertices[i - 1]));
    }
    return len;
}

double semi_energy(const QuadLattice& q, std::span<const double> u, const BlackPath& p) {
    require_vertex_field(q, u);
    validate_path(q, p);
    double total = 0.0;
    for (std::size_t i = 0; i < p.faces.size(); ++i) {
        const double step = std::abs(q.position(p.vertices[i + 1]) - q.position(p.vertices[i]));
        total += std::norm(detail::face_gradient(q, u, p.faces[i])) * step;
    }
    return total;
}

double semi_energy_bound(const QuadLattice& q, std::span<const double> u, const BlackPath& p) {
    require_vertex_field(q, u);
    validate_path(q, p);
    const double len = path_length(q, p);
    if (len == 0.0) return 0.0;
    const double jump = u[p.vertices.back()] - u[p.vertices.front()];
    return jump * jump / len;
}

} // namespace dca
