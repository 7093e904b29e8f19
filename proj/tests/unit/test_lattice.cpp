#include "support/oracles.hpp"

#include "dca/error.hpp"
#include "dca/generators.hpp"
#include "dca/lattice.hpp"

#include <doctest.h>

#include <algorithm>
#include <numbers>

using namespace dca;

namespace {

QuadLattice unit_square() { return build_lattice({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {Face{0, 1, 2, 3}}); }

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST_CASE("unit square") {
    const QuadLattice q = unit_square();
    CHECK(q.vertex_count() == 4);
    CHECK(q.max_edge() == doctest::Approx(1.0));
    CHECK(q.color(0) == Color::Black);
    CHECK(q.color(2) == Color::Black);
    CHECK(q.color(1) == Color::White);
    CHECK(q.boundary().size() == 4);

    const FaceMetrics m = face_metrics(q, 0);
    CHECK(m.orthogonality_defect == 0.0);
    CHECK(m.k_face == doctest::Approx(4.0));
    CHECK(m.max_edge_ratio == doctest::Approx(1.0));
    CHECK(m.area == doctest::Approx(1.0));
    CHECK(m.diameter == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("clockwise faces are normalised and keep their diagonals") {
    const QuadLattice q = build_lattice({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {Face{0, 3, 2, 1}});
    const Face& f = q.face(0);
    CHECK(f[0] == 0);
    CHECK(f[2] == 2);
    CHECK(signed_area(q.corners(0)) > 0.0);
    const auto b = q.boundary_polyline();
    CHECK(signed_area(b.points) > 0.0);
}

TEST_CASE("construction errors") {
    const std::vector<Point2> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(code_of([&] { (void)build_lattice(square, {Face{0, 1, 0, 2}}); }) == ErrorCode::DegenerateFace);
    CHECK(code_of([&] { (void)build_lattice(square, {Face{0, 1, 2, 7}}); }) == ErrorCode::IndexOutOfRange);
    CHECK(code_of([&] { (void)build_lattice({}, {}); }) == ErrorCode::EmptyLattice);
    CHECK(code_of([&] { (void)build_lattice({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {5, 5}}, {Face{0, 1, 2, 3}}); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([&] {
              (void)build_lattice({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {Face{0, 1, 2, 3}, Face{0, 1, 2, 3}});
          }) != ErrorCode::InvalidArgument);
    // a bow tie is not a simple polygon
    CHECK(code_of([&] { (void)build_lattice(square, {Face{0, 2, 1, 3}}); }) == ErrorCode::DegenerateFace);

    // three faces on the edge (0,1)
    std::vector<Point2> fan = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {1, -1}, {0, -1}, {1, -2}, {0, -2}};
    CHECK(code_of([&] {
              (void)build_lattice(fan, {Face{0, 1, 2, 3}, Face{1, 0, 5, 4}, Face{0, 1, 6, 7}});
          }) == ErrorCode::NonManifoldEdge);

    // a ring of eight squares around a hole has two boundary cycles
    const QuadLattice grid = gen_square(0, 0, 3, 3, 1);
    std::vector<Face> ring;
    for (Index f = 0; f < grid.face_count(); ++f)
        if (f != 4) ring.push_back(grid.face(f));
    CHECK(code_of([&] { (void)build_lattice(grid.positions(), ring); }) == ErrorCode::MultipleBoundaryComponents);

    // overlapping squares sharing an edge line but not vertices
    CHECK(code_of([&] {
              (void)build_lattice({{0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}, {3, 1}, {3, 3}, {1, 3}},
                                  {Face{0, 1, 2, 3}, Face{4, 5, 6, 7}});
          }) != ErrorCode::InvalidArgument);
}

TEST_CASE("two_color rejects odd cycles") {
    const std::vector<Face> faces = {Face{0, 1, 2, 3}, Face{0, 2, 4, 5}};
    CHECK(code_of([&] { (void)two_color(6, faces); }) == ErrorCode::NotBipartite);
}

TEST_CASE("colouring: diagonals are monochromatic and recolouring only swaps") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const QuadLattice q = oracle::random_lattice(seed);
        for (Index f = 0; f < q.face_count(); ++f) {
            const Face& v = q.face(f);
            CHECK(q.color(v[0]) == q.color(v[2]));
            CHECK(q.color(v[1]) == q.color(v[3]));
            CHECK(q.color(v[0]) != q.color(v[1]));
            CHECK(q.color(v[q.black_slot(f)]) == Color::Black);
        }
        // recolour from the last vertex: relabel the faces so it becomes vertex 0
        const Index n = q.vertex_count();
        std::vector<Face> shifted;
        for (const Face& f : q.faces()) shifted.push_back({(f[0] + 1) % n, (f[1] + 1) % n, (f[2] + 1) % n, (f[3] + 1) % n});
        const auto c = two_color(n, shifted);
        const bool swapped = c[(0 + 1) % n] != q.color(0);
        for (Index v = 0; v < n; ++v) CHECK((c[(v + 1) % n] != q.color(v)) == swapped);
    }
}

TEST_CASE("boundary is a counterclockwise simple cycle with Euler characteristic one") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const QuadLattice q = oracle::random_lattice(seed);
        const auto b = q.boundary_polyline();
        CHECK(signed_area(b.points) > 0.0);
        std::size_t edges = 0;
        for (Index v = 0; v < q.vertex_count(); ++v) edges += q.incident(v).size();
        // every face contributes 4 corners; edges = (4F + boundary) / 2
        const long e = static_cast<long>((4 * q.face_count() + q.boundary().size()) / 2);
        CHECK(static_cast<long>(q.vertex_count()) - e + static_cast<long>(q.face_count()) == 1);
        CHECK(edges == 4 * q.face_count());
    }
}

TEST_CASE("uniform non-degeneracy bounds hold face by face") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const QuadLattice q = oracle::random_lattice(seed);
        const GeometryReport r = geometry_report(q);
        CHECK(r.orthogonal);
        for (const FaceMetrics& m : r.per_face) {
            CHECK(m.min_edge >= m.diameter / (2.0 * m.k_face));
            CHECK(m.min_diagonal >= m.diameter / (4.0 * m.k_face * m.k_face));
            CHECK(m.k_face <= r.k_round);
        }
    }
}

TEST_CASE("geometry report on the generators") {
    const GeometryReport annuli = geometry_report(gen_adaptive_annuli(3, 1.0, 1));
    CHECK(annuli.max_orthogonality_defect <= 1e-9);
    CHECK(annuli.k_round <= 9.8);
    CHECK(annuli.k_round > 4.0);

    const GeometryReport strip = geometry_report(gen_degenerate_strip(1e-3, 8));
    CHECK(strip.max_orthogonality_defect <= 1e-9);
    CHECK(strip.k_round >= 1e3);

    const GeometryReport grid = geometry_report(gen_square(0, 0, 1, 1, 0.25));
    CHECK(grid.k_round == doctest::Approx(4.0));
    CHECK(grid.max_diagonal_ratio == doctest::Approx(1.0));
    CHECK(grid.min_diagonal_angle == doctest::Approx(std::numbers::pi / 2));
    CHECK(grid.max_ball_count == 5);
}

TEST_CASE("ensure_orthogonal rejects a rectangle") {
    const QuadLattice q = build_lattice({{0, 0}, {2, 0}, {2, 1}, {0, 1}}, {Face{0, 1, 2, 3}});
    CHECK_THROWS_AS(ensure_orthogonal(q), Error);
    CHECK_FALSE(geometry_report(q).orthogonal);
}

TEST_CASE("neighborhood of an interior face") {
    const QuadLattice q = gen_square(0, 0, 3, 3, 1);
    const auto n = neighborhood(q, 4);
    CHECK(n.size() == 9);
    CHECK(std::is_sorted(n.begin(), n.end()));
    CHECK(neighborhood(q, 0).size() == 4);
}

TEST_CASE("hausdorff distance of a circle and its inscribed square") {
    Polyline circle{{}, true};
    for (int k = 0; k < 64; ++k) circle.points.push_back(std::polar(1.0, 2 * std::numbers::pi * k / 64));
    const Polyline square{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, true};
    const double d = hausdorff_distance(circle, square, 1e-3);
    CHECK(d == doctest::Approx(1.0 - std::sqrt(2.0) / 2.0).epsilon(1e-2));
    CHECK(hausdorff_distance(square, square, 1e-2) <= 1e-15);
}

TEST_CASE("curve cover") {
    const QuadLattice q = gen_square(0, 0, 1, 1, 0.25);
    const Polyline dot{{{0.6, 0.6}, {0.6001, 0.6}}, false};
    const CurveCover c = curve_cover(q, dot);
    REQUIRE(c.faces.size() == 1);
    CHECK(c.diam_sum == doctest::Approx(0.25 * std::sqrt(2.0)));

    const Polyline gamma{{{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}}, true};
    for (int n : {4, 8, 16, 32}) {
        const CurveCover cover = curve_cover(gen_square(0, 0, 1, 1, 1.0 / n), gamma);
        CHECK(cover.diam_sum / gamma.length() <= 2.0 * std::sqrt(2.0) + 1e-12);
    }
}
