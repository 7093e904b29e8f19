#include "dca/trees.hpp"

#include "dca/error.hpp"

#include <random>
#include <utility>

namespace dca {

std::size_t BinaryTree::leaf_count() const {
    std::size_t leaves = 0;
    for (std::size_t v = 0; v < children.size(); ++v) leaves += is_leaf(static_cast<int>(v)) ? 1 : 0;
    return leaves;
}

BinaryTree single_edge_tree() {
    BinaryTree t;
    t.children = {{1, -1}, {-1, -1}};
    t.parent = {-1, 0};
    return t;
}

void graft(BinaryTree& tree, int child, int side) {
    if (child <= 0 || static_cast<std::size_t>(child) >= tree.children.size() || (side != 0 && side != 1)) {
        throw Error(ErrorCode::InvalidArgument, "no edge above node " + std::to_string(child));
    }
    const int up = tree.parent[child];
    const int mid = static_cast<int>(tree.children.size());
    const int leaf = mid + 1;
    tree.children.push_back(side == 0 ? std::array<int, 2>{leaf, child} : std::array<int, 2>{child, leaf});
    tree.parent.push_back(up);
    tree.children.push_back({-1, -1});
    tree.parent.push_back(mid);
    auto& slots = tree.children[up];
    (slots[0] == child ? slots[0] : slots[1]) = mid;
    tree.parent[child] = mid;
    ++tree.n_internal;
}

BinaryTree remy_tree(int n, std::uint64_t seed) {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "tree size must be non-negative");
    BinaryTree t = single_edge_tree();
    t.seed = seed;
    std::mt19937_64 rng(seed);
    for (int k = 0; k < n; ++k) {
        const auto sides = static_cast<std::uint64_t>(2 * (2 * k + 1));
        const std::uint64_t pick = std::uniform_int_distribution<std::uint64_t>(0, sides - 1)(rng);
        graft(t, static_cast<int>(pick / 2) + 1, static_cast<int>(pick % 2));
    }
    return t;
}

std::vector<int> contour_walk(const BinaryTree& tree) {
    std::vector<int> walk{0};
    walk.reserve(2 * tree.edge_count() + 1);
    // Stack of (node, next child slot to explore).
    std::vector<std::pair<int, int>> stack{{0, 0}};
    while (!stack.empty()) {
        auto& [v, slot] = stack.back();
        const int limit = v == 0 ? 1 : (tree.is_leaf(v) ? 0 : 2);
        if (slot < limit) {
            const int c = tree.children[v][slot++];
            walk.push_back(c);
            stack.emplace_back(c, 0);
        } else {
            stack.pop_back();
            if (!stack.empty()) walk.push_back(stack.back().first);
        }
    }
    return walk;
}

std::vector<int> contour(const BinaryTree& tree) {
    std::vector<int> depth(tree.node_count(), 0);
    std::vector<int> out;
    const auto walk = contour_walk(tree);
    out.reserve(walk.size());
    for (std::size_t i = 0; i < walk.size(); ++i) {
        if (i > 0 && tree.parent[walk[i]] == walk[i - 1]) depth[walk[i]] = depth[walk[i - 1]] + 1;
        out.push_back(depth[walk[i]]);
    }
    return out;
}

std::string shape_key(const BinaryTree& tree) {
    std::string key;
    std::vector<std::pair<int, int>> stack{{tree.children[0][0], 0}};
    while (!stack.empty()) {
        auto& [v, state] = stack.back();
        if (tree.is_leaf(v)) {
            key += '.';
            stack.pop_back();
        } else if (state == 0) {
            key += '(';
            state = 1;
            stack.emplace_back(tree.children[v][0], 0);
        } else if (state == 1) {
            state = 2;
            stack.emplace_back(tree.children[v][1], 0);
        } else {
            key += ')';
            stack.pop_back();
        }
    }
    return key;
}

} // namespace dca
