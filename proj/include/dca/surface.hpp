#pragma once

#include "dca/lattice.hpp"
#include "dca/trees.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace dca {

enum class Tag : std::uint8_t { Red, Green, Blue };

using Triangle = std::array<Index, 3>;

/// Sphere triangulation obtained by welding a red tree and a blue tree onto the two sides of a
/// green cycle of length 4n+2.
struct WeldedSurface {
    std::vector<Tag> tags;
    /// Consistently oriented triangles, four per green edge t in the order
    /// (r_t, r_{t+1}, g_t), (r_{t+1}, g_{t+1}, g_t), (b_{t+1}, b_t, g_t), (g_t, g_{t+1}, b_{t+1}).
    std::vector<Triangle> triangles;
    /// Green cycle g_0 .. g_{L-1}; the root green edge is (g_0, g_1).
    std::vector<Index> green;
    Index red_root = 0;
    Index blue_root = 0;
    BinaryTree red_tree;
    BinaryTree blue_tree;

    [[nodiscard]] std::size_t vertex_count() const noexcept { return tags.size(); }
    [[nodiscard]] std::vector<std::array<Index, 2>> edges() const;
    [[nodiscard]] long euler_characteristic() const;
    [[nodiscard]] std::vector<std::size_t> degrees() const;
    /// No loops and no repeated edges.
    [[nodiscard]] bool is_simple() const;
};

/// Builds the red-green-blue cylinder and closes it by identifying red cycle edges in pairs
/// according to the red tree's exploration (each tree edge walked down and back up) and blue edges
/// according to the blue tree.
///
/// Green g_i is joined to r_i, r_{i+1}, b_i, b_{i+1}; the cylinder triangles are
/// (r_i, r_{i+1}, g_i), (r_{i+1}, g_{i+1}, g_i), (b_{i+1}, b_i, g_i), (g_i, g_{i+1}, b_{i+1}).
///
/// Throws Error(CycleLengthMismatch) if the trees differ in size and Error(NonSphericalResult) if
/// the Euler characteristic is not 2.
[[nodiscard]] WeldedSurface weld_surface(const BinaryTree& red, const BinaryTree& blue);

struct DrivingFunction {
    std::vector<int> X;
    std::vector<int> Y;
};

/// Tree distances to the red and blue roots of the vertices met along the green cycle. Entry t+1
/// belongs to green edge (g_t, g_{t+1}), whose adjacent red and blue vertices are read off the two
/// triangles on that edge; entry 0 is the root itself.
[[nodiscard]] DrivingFunction driving_function(const WeldedSurface& s);

} // namespace dca
