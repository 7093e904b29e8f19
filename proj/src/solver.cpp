#include "dca/solver.hpp"

#include "dca/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

namespace dca {

DiagonalGraph assemble(const QuadLattice& q) {
    ensure_orthogonal(q);
    DiagonalGraph g;
    g.black.reserve(q.face_count());
    g.white.reserve(q.face_count());
    for (Index f = 0; f < q.face_count(); ++f) {
        const Face& v = q.face(f);
        const double l02 = std::abs(q.position(v[2]) - q.position(v[0]));
        const double l13 = std::abs(q.position(v[3]) - q.position(v[1]));
        if (!(l02 > 0.0) || !(l13 > 0.0)) {
            throw Error(ErrorCode::DegenerateDiagonal, "face " + std::to_string(f) + " has a zero-length diagonal");
        }
        const DiagonalGraph::Edge e02{v[0], v[2], l13 / l02, f};
        const DiagonalGraph::Edge e13{v[1], v[3], l02 / l13, f};
        if (q.black_slot(f) == 0) {
            g.black.push_back(e02);
            g.white.push_back(e13);
        } else {
            g.black.push_back(e13);
            g.white.push_back(e02);
        }
    }
    g.interior.assign(q.vertex_count(), 1);
    for (Index v : q.boundary()) g.interior[v] = 0;
    return g;
}

std::vector<double> boundary_data(const QuadLattice& q, const RealFunction& g) {
    std::vector<double> out;
    out.reserve(q.boundary().size());
    for (Index v : q.boundary()) {
        const double value = g(q.position(v));
        if (!std::isfinite(value)) {
            throw Error(ErrorCode::NonFiniteValue, "boundary value is not finite at vertex " + std::to_string(v));
        }
        out.push_back(value);
    }
    return out;
}

ColourSystem colour_system(const QuadLattice& q, const DiagonalGraph& g, Color colour,
                           std::span<const double> field) {
    const auto& edges = colour == Color::Black ? g.black : g.white;
    ColourSystem sys;
    std::vector<std::size_t> local(q.vertex_count(), std::numeric_limits<std::size_t>::max());
    for (Index v = 0; v < q.vertex_count(); ++v) {
        if (q.color(v) == colour && g.interior[v]) {
            local[v] = sys.unknowns.size();
            sys.unknowns.push_back(v);
        }
    }
    const std::size_t n = sys.unknowns.size();
    sys.rhs.assign(n, 0.0);
    std::vector<std::vector<std::pair<std::size_t, double>>> rows(n);
    for (const auto& e : edges) {
        const std::size_t la = local[e.a];
        const std::size_t lb = local[e.b];
        for (int side = 0; side < 2; ++side) {
            const std::size_t me = side == 0 ? la : lb;
            const std::size_t other = side == 0 ? lb : la;
            const Index other_vertex = side == 0 ? e.b : e.a;
            if (me == std::numeric_limits<std::size_t>::max()) continue;
            rows[me].emplace_back(me, e.weight);
            if (other == std::numeric_limits<std::size_t>::max()) {
                sys.rhs[me] += e.weight * field[other_vertex];
            } else {
                rows[me].emplace_back(other, -e.weight);
            }
        }
    }
    sys.matrix.rows = n;
    sys.matrix.row_ptr.assign(1, 0);
    for (auto& row : rows) {
        std::sort(row.begin(), row.end());
        for (std::size_t k = 0; k < row.size();) {
            double sum = 0.0;
            const std::size_t c = row[k].first;
            for (; k < row.size() && row[k].first == c; ++k) sum += row[k].second;
            sys.matrix.col.push_back(c);
            sys.matrix.val.push_back(sum);
        }
        sys.matrix.row_ptr.push_back(sys.matrix.col.size());
    }
    return sys;
}

CgResult conjugate_gradient(const CsrMatrix& a, std::span<const double> b, std::span<double> x,
                            const SolverConfig& config) {
    const std::size_t n = a.rows;
    CgResult res;
    if (n == 0) return res;
    auto spmv = [&](std::span<const double> in, std::span<double> out) {
        config.parallel ? kernels::spmv(a, in, out) : reference::spmv(a, in, out);
    };
    auto dot = [&](std::span<const double> p, std::span<const double> s) {
        return config.parallel ? kernels::dot(p, s) : reference::dot(p, s);
    };
    const auto sn = static_cast<std::ptrdiff_t>(n);

    std::vector<double> inv_diag(n, 1.0);
    if (config.preconditioner == Preconditioner::Diagonal) {
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
                if (a.col[k] == r) inv_diag[r] = 1.0 / a.val[k];
            }
        }
    }
    const double bnorm = std::sqrt(dot(b, b));
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        return res;
    }
    const std::size_t max_it = config.max_iterations > 0 ? config.max_iterations : 10 * n;

    std::vector<double> r(n), z(n), p(n), ap(n), best(x.begin(), x.end());
    spmv(x, r);
#pragma omp parallel for schedule(static) if (config.parallel)
    for (std::ptrdiff_t i = 0; i < sn; ++i) r[i] = b[i] - r[i];
    double rnorm = std::sqrt(dot(r, r));
    double best_norm = rnorm;
#pragma omp parallel for schedule(static) if (config.parallel)
    for (std::ptrdiff_t i = 0; i < sn; ++i) {
        z[i] = inv_diag[i] * r[i];
        p[i] = z[i];
    }
    double rz = dot(r, z);
    std::size_t it = 0;
    while (rnorm > config.tolerance * bnorm && it < max_it) {
        spmv(p, ap);
        const double alpha = rz / dot(p, ap);
#pragma omp parallel for schedule(static) if (config.parallel)
        for (std::ptrdiff_t i = 0; i < sn; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
            z[i] = inv_diag[i] * r[i];
        }
        ++it;
        rnorm = std::sqrt(dot(r, r));
        if (rnorm < best_norm) {
            best_norm = rnorm;
            std::copy(x.begin(), x.end(), best.begin());
        }
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
#pragma omp parallel for schedule(static) if (config.parallel)
        for (std::ptrdiff_t i = 0; i < sn; ++i) p[i] = z[i] + beta * p[i];
    }
    res.iterations = it;
    res.converged = rnorm <= config.tolerance * bnorm;
    if (!res.converged) {
        std::copy(best.begin(), best.end(), x.begin());
        rnorm = best_norm;
    }
    res.relative_residual = rnorm / bnorm;
    return res;
}

namespace {

void check_boundary_contact(const QuadLattice& q, const DiagonalGraph& g) {
    std::vector<std::vector<Index>> adj(q.vertex_count());
    for (const auto* edges : {&g.black, &g.white}) {
        for (const auto& e : *edges) {
            adj[e.a].push_back(e.b);
            adj[e.b].push_back(e.a);
        }
    }
    std::vector<std::uint8_t> reached(q.vertex_count(), 0);
    std::queue<Index> queue;
    for (Index v : q.boundary()) {
        reached[v] = 1;
        queue.push(v);
    }
    while (!queue.empty()) {
        const Index v = queue.front();
        queue.pop();
        for (Index w : adj[v]) {
            if (!reached[w]) {
                reached[w] = 1;
                queue.push(w);
            }
        }
    }
    for (Index v = 0; v < q.vertex_count(); ++v) {
        if (!reached[v]) {
            throw Error(ErrorCode::DisconnectedInteriorComponent,
                        "interior vertex " + std::to_string(v) + " has no diagonal path to the boundary");
        }
    }
}

} // namespace

Solution solve(const DirichletProblem& problem, const SolverConfig& config) {
    const QuadLattice& q = problem.lattice;
    if (problem.boundary_values.size() != q.boundary().size()) {
        throw Error(ErrorCode::SizeMismatch, "expected " + std::to_string(q.boundary().size()) +
                                                 " boundary values, got " +
                                                 std::to_string(problem.boundary_values.size()));
    }
    if (!(config.tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "solver tolerance must be positive");
    if (!config.initial_guess.empty() && config.initial_guess.size() != q.vertex_count()) {
        throw Error(ErrorCode::SizeMismatch, "initial guess must have one value per vertex");
    }
    const DiagonalGraph g = assemble(q);
    check_boundary_contact(q, g);

    Solution sol;
    sol.field.assign(q.vertex_count(), 0.0);
    double sum[2] = {0.0, 0.0};
    std::size_t count[2] = {0, 0};
    for (std::size_t k = 0; k < q.boundary().size(); ++k) {
        const Index v = q.boundary()[k];
        sol.field[v] = problem.boundary_values[k];
        const int c = q.color(v) == Color::Black ? 0 : 1;
        sum[c] += problem.boundary_values[k];
        ++count[c];
    }

    for (Color colour : {Color::Black, Color::White}) {
        const int c = colour == Color::Black ? 0 : 1;
        const ColourSystem sys = colour_system(q, g, colour, sol.field);
        std::vector<double> x(sys.unknowns.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = config.initial_guess.empty() ? (count[c] ? sum[c] / static_cast<double>(count[c]) : 0.0)
                                                : config.initial_guess[sys.unknowns[i]];
        }
        const CgResult r = conjugate_gradient(sys.matrix, sys.rhs, x, config);
        for (std::size_t i = 0; i < x.size(); ++i) sol.field[sys.unknowns[i]] = x[i];
        (colour == Color::Black ? sol.iterations_black : sol.iterations_white) = r.iterations;
        sol.final_residual = std::max(sol.final_residual, r.relative_residual);
        sol.converged = sol.converged && r.converged;
    }

    sol.energy = dirichlet_energy(q, sol.field).definition_form;
    const ScalarField lap = laplacian_field(q, sol.field);
    for (Index v = 0; v < q.vertex_count(); ++v) {
        if (!q.on_boundary(v)) sol.laplacian_residual = std::max(sol.laplacian_residual, std::abs(lap[v]));
    }
    return sol;
}

Solution solve(const QuadLattice& q, const RealFunction& g, const SolverConfig& config) {
    return solve(DirichletProblem{q, boundary_data(q, g)}, config);
}

MaxPrincipleReport check_maximum_principle(const QuadLattice& q, std::span<const double> u, double slack) {
    if (u.size() != q.vertex_count()) throw Error(ErrorCode::SizeMismatch, "field size does not match lattice");
    constexpr double inf = std::numeric_limits<double>::infinity();
    MaxPrincipleReport r;
    r.max_all = r.max_boundary_all = r.max_black = r.max_boundary_black = -inf;
    r.min_all = r.min_boundary_all = inf;
    for (Index v = 0; v < q.vertex_count(); ++v) {
        const bool black = q.color(v) == Color::Black;
        if (u[v] > r.max_all) {
            r.max_all = u[v];
            r.argmax_all = v;
        }
        if (u[v] < r.min_all) {
            r.min_all = u[v];
            r.argmin_all = v;
        }
        if (black && u[v] > r.max_black) {
            r.max_black = u[v];
            r.argmax_black = v;
        }
        if (q.on_boundary(v)) {
            r.max_boundary_all = std::max(r.max_boundary_all, u[v]);
            r.min_boundary_all = std::min(r.min_boundary_all, u[v]);
            if (black) r.max_boundary_black = std::max(r.max_boundary_black, u[v]);
        }
    }
    r.pass = r.max_all <= r.max_boundary_all + slack && r.max_black <= r.max_boundary_black + slack &&
             r.min_all >= r.min_boundary_all - slack;
    return r;
}

} // namespace dca
