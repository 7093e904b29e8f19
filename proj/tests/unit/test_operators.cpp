#include "support/oracles.hpp"

#include "dca/error.hpp"
#include "dca/generators.hpp"
#include "dca/operators.hpp"
#include "dca/solver.hpp"

#include <doctest.h>

#include <algorithm>

using namespace dca;

namespace {

QuadLattice kite() { return build_lattice({{0, 0}, {2, -1}, {4, 0}, {2, 1}}, {Face{0, 1, 2, 3}}); }

double sup(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

TEST_CASE("restrict_smooth evaluates at the vertices") {
    const auto u = restrict_smooth([](Point2 z) { return std::norm(z); }, kite());
    CHECK(u == std::vector<double>{0, 5, 16, 5});
    const auto g = restrict_smooth([](Point2 z) { return z * z; }, kite());
    CHECK(g[2] == Point2{16, 0});
}

TEST_CASE("gradient of affine functions is exact") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const QuadLattice q = oracle::random_lattice(seed);
        const double a = 0.3 + seed, b = -1.7, c = 2.5;
        const auto u = restrict_smooth([&](Point2 z) { return a * z.real() + b * z.imag() + c; }, q);
        for (Index f = 0; f < q.face_count(); ++f) {
            const auto g = discrete_gradient(q, u, f);
            CHECK(std::abs(g - Point2{a, b}) <= 1e-11 * std::abs(Point2{a, b}));
        }
    }
}

TEST_CASE("gradient satisfies both diagonal equations") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const QuadLattice q = oracle::random_lattice(seed);
        const auto u = oracle::random_field(q.vertex_count(), seed + 100);
        const auto grad = gradient_field(q, u);
        for (Index f = 0; f < q.face_count(); ++f) {
            const Face& v = q.face(f);
            const auto z = q.corners(f);
            const double scale = std::abs(grad[f]) * std::max(std::abs(z[2] - z[0]), std::abs(z[3] - z[1])) + 1.0;
            CHECK(std::abs(dot(grad[f], z[2] - z[0]) - (u[v[2]] - u[v[0]])) <= 1e-12 * scale);
            CHECK(std::abs(dot(grad[f], z[3] - z[1]) - (u[v[3]] - u[v[1]])) <= 1e-12 * scale);
            const Point2 o = oracle::gradient(z, {u[v[0]], u[v[1]], u[v[2]], u[v[3]]});
            CHECK(std::abs(o - grad[f]) <= 1e-9 * (std::abs(o) + 1.0));
        }
    }
}

TEST_CASE("the two energy forms agree on orthogonal lattices") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const QuadLattice q = oracle::random_lattice(seed);
        const auto u = oracle::random_field(q.vertex_count(), seed + 7);
        const EnergyForms e = dirichlet_energy(q, u);
        CHECK(std::abs(e.definition_form - e.orthogonal_form) <= 1e-12 * e.definition_form);
        CHECK(std::abs(e.definition_form - oracle::energy(q, u)) <= 1e-9 * e.definition_form);
    }
}

TEST_CASE("energy of Re z on the unit square grid is the area") {
    const QuadLattice q = gen_square(0, 0, 1, 1, 0.125);
    const auto u = restrict_smooth([](Point2 z) { return z.real(); }, q);
    CHECK(dirichlet_energy(q, u).definition_form == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Laplacian forms agree with each other and with the energy derivative") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const QuadLattice q = oracle::random_lattice(seed);
        const auto u = oracle::random_field(q.vertex_count(), seed + 3);
        const double step = 1e-6 * sup(u);
        for (Index z = 0; z < q.vertex_count(); ++z) {
            const LaplacianForms l = discrete_laplacian(q, u, z);
            const double scale = std::max(1.0, std::abs(l.ratio_form));
            CHECK(std::abs(l.ratio_form - l.gradient_form) <= 1e-10 * scale);
            const double fd = oracle::fd_laplacian(q, u, z, step);
            CHECK(std::abs(l.ratio_form - fd) <= 1e-5 * scale);
        }
    }
}

TEST_CASE("Re z and Re z^2 are discrete harmonic on square grids") {
    const QuadLattice q = gen_square(0, 0, 1, 1, 0.125);
    const auto x = restrict_smooth([](Point2 z) { return z.real(); }, q);
    const auto x2 = restrict_smooth([](Point2 z) { return (z * z).real(); }, q);
    for (Index v = 0; v < q.vertex_count(); ++v) {
        if (q.on_boundary(v)) continue;
        CHECK(std::abs(discrete_laplacian(q, x, v).ratio_form) <= 1e-12);
        CHECK(std::abs(discrete_laplacian(q, x2, v).gradient_form) <= 1e-12);
    }
    const auto r2 = restrict_smooth([](Point2 z) { return std::norm(z); }, q);
    // |z|^2 has Laplacian 4, so each interior vertex sees 4 times its share of area: 2 h^2
    const Index centre = 4 * 9 + 4;
    CHECK(discrete_laplacian(q, r2, centre).ratio_form == doctest::Approx(4.0 * 2.0 * 0.125 * 0.125));
}

TEST_CASE("Green's identity over all black vertices") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const QuadLattice q = oracle::random_lattice(seed);
        const auto u = oracle::random_field(q.vertex_count(), seed + 11);
        const auto v = oracle::random_field(q.vertex_count(), seed + 12);
        const auto lu = laplacian_field(q, u);
        const auto lv = laplacian_field(q, v);
        double s = 0.0, norm = 0.0;
        for (Index z = 0; z < q.vertex_count(); ++z) {
            if (q.color(z) != Color::Black) continue;
            s += u[z] * lv[z] - v[z] * lu[z];
            norm += std::abs(u[z] * lv[z]) + std::abs(v[z] * lu[z]);
        }
        CHECK(std::abs(s) <= 1e-12 * norm);
    }
}

TEST_CASE("holomorphicity residual") {
    const QuadLattice sq = build_lattice({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {Face{0, 1, 2, 3}});
    const auto conj_z = restrict_smooth([](Point2 z) { return std::conj(z); }, sq);
    CHECK(holomorphicity_residual(sq, conj_z) == doctest::Approx(2.0));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const QuadLattice q = oracle::random_lattice(seed);
        const auto z = restrict_smooth([](Point2 w) { return w; }, q);
        CHECK(holomorphicity_residual(q, z) <= 1e-12);
        // real part of a discrete holomorphic function is discrete harmonic
        std::vector<double> re(z.size());
        std::transform(z.begin(), z.end(), re.begin(), [](Point2 w) { return w.real(); });
        const auto lap = laplacian_field(q, re);
        for (Index v = 0; v < q.vertex_count(); ++v)
            if (!q.on_boundary(v)) CHECK(std::abs(lap[v]) <= 1e-11 * (1.0 + q.max_edge()));
    }
}

TEST_CASE("harmonic conjugate of Re z is Im z up to one constant per colour") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const QuadLattice q = oracle::random_lattice(seed);
        const auto u = restrict_smooth([](Point2 z) { return z.real(); }, q);
        const HarmonicConjugate h = harmonic_conjugate(q, u);
        CHECK(h.max_cycle_residual <= 1e-10);
        std::array<double, 2> offset{std::nan(""), std::nan("")};
        for (Index v = 0; v < q.vertex_count(); ++v) {
            const int c = static_cast<int>(q.color(v));
            const double d = h.v[v] - q.position(v).imag();
            if (std::isnan(offset[c])) offset[c] = d;
            CHECK(d == doctest::Approx(offset[c]).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("harmonic conjugate residual shrinks with the solver tolerance") {
    const QuadLattice q = gen_adaptive_annuli(2, 1.0, 1);
    const auto g = [](Point2 z) { return std::exp(z.real()) * std::cos(z.imag()) + z.real() * z.imag(); };
    double previous = 1e300;
    for (double tol : {1e-4, 1e-7, 1e-10}) {
        SolverConfig cfg;
        cfg.tolerance = tol;
        const Solution s = solve(q, g, cfg);
        const double r = harmonic_conjugate(q, s.field).max_cycle_residual;
        CHECK(r <= previous);
        previous = r;
    }
    CHECK(previous <= 1e-6);
    // a non-harmonic field has a visible residual
    const auto u = oracle::random_field(q.vertex_count(), 5);
    CHECK(harmonic_conjugate(q, u).max_cycle_residual > 1e-3);
}

TEST_CASE("semi-energy dominates the path bound") {
    const QuadLattice q = gen_square(0, 0, 1, 1, 0.125);
    // black vertices (i, j) with i + j even; walk the main diagonal
    BlackPath p;
    for (int k = 0; k <= 8; ++k) p.vertices.push_back(static_cast<Index>(k * 9 + k));
    for (int k = 0; k < 8; ++k) p.faces.push_back(static_cast<Index>(k * 8 + k));
    validate_path(q, p);
    CHECK(path_length(q, p) == doctest::Approx(std::sqrt(2.0)));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto u = oracle::random_field(q.vertex_count(), seed);
        CHECK(semi_energy(q, u, p) >= semi_energy_bound(q, u, p) * (1 - 1e-12));
    }
    const auto x = restrict_smooth([](Point2 z) { return z.real() + z.imag(); }, q);
    CHECK(semi_energy(q, x, p) == doctest::Approx(semi_energy_bound(q, x, p)));

    BlackPath bad = p;
    bad.vertices[3] += 1;
    CHECK_THROWS_AS(validate_path(q, bad), Error);
}

TEST_CASE("size mismatches are reported") {
    const QuadLattice q = kite();
    const std::vector<double> u{1, 2, 3};
    CHECK_THROWS_AS((void)dirichlet_energy(q, u), Error);
    CHECK_THROWS_AS((void)laplacian_field(q, u), Error);
}
