#include "support/oracles.hpp"

#include "dca/error.hpp"
#include "dca/surface.hpp"
#include "dca/trees.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

using namespace dca;

TEST_CASE("single edge tree") {
    const BinaryTree t = single_edge_tree();
    CHECK(t.node_count() == 2);
    CHECK(t.edge_count() == 1);
    CHECK(shape_key(t) == ".");
    CHECK(contour(t) == std::vector<int>{0, 1, 0});
}

TEST_CASE("Remy trees have the right size and valid structure") {
    for (int n = 0; n <= 12; ++n) {
        const BinaryTree t = remy_tree(n, 100 + n);
        CHECK(t.n_internal == n);
        CHECK(t.node_count() == static_cast<std::size_t>(2 * n + 2));
        CHECK(t.leaf_count() == static_cast<std::size_t>(n + 2));
        for (std::size_t v = 1; v < t.node_count(); ++v) {
            const int p = t.parent[v];
            REQUIRE(p >= 0);
            CHECK((t.children[p][0] == static_cast<int>(v) || t.children[p][1] == static_cast<int>(v)));
        }
        CHECK(contour(t) == oracle::contour(t));
        CHECK(contour_walk(t).size() == 2 * t.edge_count() + 1);
    }
    CHECK(shape_key(remy_tree(5, 1)) == shape_key(remy_tree(5, 1)));
}

TEST_CASE("graft grows a tree by one internal node") {
    BinaryTree t = single_edge_tree();
    graft(t, 1, 1);
    CHECK(t.n_internal == 1);
    CHECK(shape_key(t) == "(..)");
    graft(t, t.children[t.children[0][0]][0], 0);
    CHECK(shape_key(t) == "((..).)");
}

TEST_CASE("Remy shapes are uniform (chi-squared, 99%)") {
    constexpr int samples = 20000;
    for (int n = 1; n <= 4; ++n) {
        const auto all = oracle::shapes(n);
        REQUIRE(static_cast<long>(all.size()) == oracle::catalan(n));
        std::map<std::string, long> count;
        for (const auto& s : all) count[s] = 0;
        for (int k = 0; k < samples; ++k) {
            const std::string key = shape_key(remy_tree(n, 7919u * static_cast<unsigned>(k) + static_cast<unsigned>(n)));
            REQUIRE(count.count(key) == 1);
            ++count[key];
        }
        const double expected = static_cast<double>(samples) / static_cast<double>(all.size());
        double chi2 = 0.0;
        for (const auto& [key, c] : count) chi2 += (c - expected) * (c - expected) / expected;
        if (all.size() == 1) {
            CHECK(count.begin()->second == samples);
            continue;
        }
        const double df = static_cast<double>(all.size() - 1);
        const double critical = boost::math::quantile(boost::math::chi_squared(df), 0.99);
        CHECK(chi2 < critical);
    }
}

TEST_CASE("chi-squared critical values match the tables") {
    CHECK(boost::math::quantile(boost::math::chi_squared(1), 0.99) == doctest::Approx(6.635).epsilon(1e-3));
    CHECK(boost::math::quantile(boost::math::chi_squared(4), 0.99) == doctest::Approx(13.277).epsilon(1e-3));
    CHECK(boost::math::quantile(boost::math::chi_squared(13), 0.99) == doctest::Approx(27.688).epsilon(1e-3));
}

TEST_CASE("welded surfaces are simple spheres with degrees 3, 6, 9") {
    for (int n = 1; n <= 20; ++n) {
        const WeldedSurface s = weld_surface(remy_tree(n, 3 * n), remy_tree(n, 3 * n + 1));
        const std::size_t L = 4 * n + 2;
        CHECK(s.green.size() == L);
        CHECK(s.triangles.size() == 4 * L);
        CHECK(s.euler_characteristic() == 2);
        CHECK(s.is_simple());
        const auto deg = s.degrees();
        for (Index v = 0; v < s.vertex_count(); ++v) {
            if (s.tags[v] == Tag::Green) CHECK(deg[v] == 6);
            else CHECK((deg[v] == 3 || deg[v] == 9));
        }
        // red vertices are the tree nodes: one per node
        CHECK(std::count(s.tags.begin(), s.tags.end(), Tag::Red) == static_cast<long>(2 * n + 2));
    }
}

TEST_CASE("n = 0 welds to a non-simple sphere") {
    const WeldedSurface s = weld_surface(single_edge_tree(), single_edge_tree());
    CHECK(s.euler_characteristic() == 2);
    CHECK_FALSE(s.is_simple());
    const DrivingFunction d = driving_function(s);
    CHECK(d.X == std::vector<int>{0, 1, 0});
    CHECK(d.Y == std::vector<int>{0, 1, 0});
}

TEST_CASE("driving function equals the contour processes") {
    for (int n = 1; n <= 15; ++n) {
        const BinaryTree red = remy_tree(n, 11 * n), blue = remy_tree(n, 11 * n + 5);
        const DrivingFunction d = driving_function(weld_surface(red, blue));
        CHECK(d.X == oracle::contour(red));
        CHECK(d.Y == oracle::contour(blue));
    }
}

TEST_CASE("mismatched trees are rejected") {
    CHECK_THROWS_AS((void)weld_surface(remy_tree(2, 1), remy_tree(3, 1)), Error);
}
