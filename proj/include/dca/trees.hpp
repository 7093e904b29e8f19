#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dca {

/// Leaf-rooted planar binary tree. Node 0 is the root leaf; its only child is `children[0][0]`.
/// Every other node is a leaf (children -1) or has exactly two ordered children.
struct BinaryTree {
    std::vector<std::array<int, 2>> children;
    std::vector<int> parent;
    int n_internal = 0;
    std::uint64_t seed = 0;

    [[nodiscard]] std::size_t node_count() const noexcept { return children.size(); }
    [[nodiscard]] std::size_t edge_count() const noexcept { return children.size() - 1; }
    [[nodiscard]] bool is_leaf(int v) const { return v == 0 || children[v][0] < 0; }
    [[nodiscard]] int degree(int v) const { return v == 0 ? 1 : (children[v][0] < 0 ? 1 : 3); }
    [[nodiscard]] std::size_t leaf_count() const;
};

/// The one-edge tree (n = 0).
[[nodiscard]] BinaryTree single_edge_tree();

/// Uniform random tree with n internal nodes by Remy's algorithm: repeatedly pick one of the
/// 2(2k+1) sides of the 2k+1 edges uniformly and graft a new leaf there.
[[nodiscard]] BinaryTree remy_tree(int n, std::uint64_t seed);

/// Inserts an internal node on the edge above `child`, with the new leaf on `side` (0 = first child).
void graft(BinaryTree& tree, int child, int side);

/// Nodes in the order a counterclockwise walk from the root leaf meets them, one entry per step:
/// 2 * edges + 1 entries, starting and ending at the root.
[[nodiscard]] std::vector<int> contour_walk(const BinaryTree& tree);

/// Depth of each walk position (the contour process).
[[nodiscard]] std::vector<int> contour(const BinaryTree& tree);

/// Canonical string for the planar shape: "." for a leaf, "(ab)" for an internal node with subtrees a, b.
[[nodiscard]] std::string shape_key(const BinaryTree& tree);

} // namespace dca
