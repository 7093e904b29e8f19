#include "dca/surface.hpp"

#include "dca/error.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

namespace dca {

namespace {

struct UnionFind {
    std::vector<std::size_t> up;
    explicit UnionFind(std::size_t n) : up(n) { std::iota(up.begin(), up.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (up[x] != x) x = up[x] = up[up[x]];
        return x;
    }
    void join(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) up[std::max(a, b)] = std::min(a, b);
    }
};

// Pairs each up-step of the exploration with the down-step it closes.
std::vector<std::size_t> step_partners(const BinaryTree& tree) {
    const auto walk = contour_walk(tree);
    const std::size_t steps = walk.size() - 1;
    std::vector<std::size_t> partner(steps);
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < steps; ++i) {
        const bool down = tree.parent[walk[i + 1]] == walk[i];
        if (down) {
            open.push_back(i);
        } else {
            partner[i] = open.back();
            partner[open.back()] = i;
            open.pop_back();
        }
    }
    return partner;
}

// Identifies cycle edge i with its partner, reversing direction: corner i ~ corner j+1, i+1 ~ j.
void glue_cycle(UnionFind& uf, std::size_t offset, std::size_t length, const std::vector<std::size_t>& partner) {
    for (std::size_t i = 0; i < length; ++i) {
        const std::size_t j = partner[i];
        uf.join(offset + i, offset + (j + 1) % length);
        uf.join(offset + (i + 1) % length, offset + j);
    }
}

} // namespace

std::vector<std::array<Index, 2>> WeldedSurface::edges() const {
    std::vector<std::array<Index, 2>> out;
    out.reserve(3 * triangles.size());
    for (const Triangle& t : triangles) {
        for (int k = 0; k < 3; ++k) {
            const Index a = t[k];
            const Index b = t[(k + 1) % 3];
            out.push_back({std::min(a, b), std::max(a, b)});
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

long WeldedSurface::euler_characteristic() const {
    // On a closed surface every edge has two sides, so E = 3F/2 also when edges are parallel.
    const auto f = static_cast<long>(triangles.size());
    return static_cast<long>(vertex_count()) - 3 * f / 2 + f;
}

std::vector<std::size_t> WeldedSurface::degrees() const {
    // On a closed surface a vertex meets as many edges as triangles (parallel edges counted).
    std::vector<std::size_t> deg(vertex_count(), 0);
    for (const Triangle& t : triangles) {
        for (Index v : t) ++deg[v];
    }
    return deg;
}

bool WeldedSurface::is_simple() const {
    // Every edge of a closed simple triangulation lies on exactly two triangles, and the link of
    // each edge is two distinct opposite vertices; repeated edges show up as an edge used more
    // than twice or as a triangle with a repeated vertex.
    std::vector<std::array<Index, 2>> all;
    all.reserve(3 * triangles.size());
    for (const Triangle& t : triangles) {
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) return false;
        for (int k = 0; k < 3; ++k) all.push_back({std::min(t[k], t[(k + 1) % 3]), std::max(t[k], t[(k + 1) % 3])});
    }
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j] == all[i]) ++j;
        if (j - i != 2) return false;
        i = j;
    }
    // Two triangles with the same vertex set would double every edge between them.
    std::vector<Triangle> sorted = triangles;
    for (auto& t : sorted) std::sort(t.begin(), t.end());
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

WeldedSurface weld_surface(const BinaryTree& red, const BinaryTree& blue) {
    if (red.n_internal != blue.n_internal) {
        throw Error(ErrorCode::CycleLengthMismatch, "trees have " + std::to_string(red.n_internal) + " and " +
                                                        std::to_string(blue.n_internal) + " internal nodes");
    }
    const std::size_t L = 4 * static_cast<std::size_t>(red.n_internal) + 2;
    const auto red_partner = step_partners(red);
    const auto blue_partner = step_partners(blue);
    if (red_partner.size() != L || blue_partner.size() != L) {
        throw Error(ErrorCode::CycleLengthMismatch, "exploration length differs from 4n+2");
    }
    // Corners: red r_i = i, green g_i = L + i, blue b_i = 2L + i.
    auto r = [L](std::size_t i) { return i % L; };
    auto g = [L](std::size_t i) { return L + i % L; };
    auto b = [L](std::size_t i) { return 2 * L + i % L; };
    UnionFind uf(3 * L);
    glue_cycle(uf, 0, L, red_partner);
    glue_cycle(uf, 2 * L, L, blue_partner);

    std::vector<Index> id(3 * L, static_cast<Index>(-1));
    WeldedSurface s;
    auto vertex = [&](std::size_t corner, Tag tag) {
        const std::size_t root = uf.find(corner);
        if (id[root] == static_cast<Index>(-1)) {
            id[root] = s.tags.size();
            s.tags.push_back(tag);
        }
        return id[root];
    };
    for (std::size_t i = 0; i < L; ++i) vertex(r(i), Tag::Red);
    for (std::size_t i = 0; i < L; ++i) s.green.push_back(vertex(g(i), Tag::Green));
    for (std::size_t i = 0; i < L; ++i) vertex(b(i), Tag::Blue);
    for (std::size_t i = 0; i < L; ++i) {
        const Index ri = vertex(r(i), Tag::Red), rj = vertex(r(i + 1), Tag::Red);
        const Index gi = vertex(g(i), Tag::Green), gj = vertex(g(i + 1), Tag::Green);
        const Index bi = vertex(b(i), Tag::Blue), bj = vertex(b(i + 1), Tag::Blue);
        s.triangles.push_back({ri, rj, gi});
        s.triangles.push_back({rj, gj, gi});
        s.triangles.push_back({bj, bi, gi});
        s.triangles.push_back({gi, gj, bj});
    }
    s.red_root = vertex(r(0), Tag::Red);
    s.blue_root = vertex(b(0), Tag::Blue);
    s.red_tree = red;
    s.blue_tree = blue;
    const long chi = s.euler_characteristic();
    if (chi != 2) {
        throw Error(ErrorCode::NonSphericalResult, "welded surface has Euler characteristic " + std::to_string(chi));
    }
    return s;
}

DrivingFunction driving_function(const WeldedSurface& s) {
    const std::size_t nv = s.vertex_count();
    std::vector<std::vector<Index>> red_adj(nv), blue_adj(nv);
    for (const auto& e : s.edges()) {
        const Tag ta = s.tags[e[0]];
        if (ta != s.tags[e[1]] || ta == Tag::Green) continue;
        auto& adj = ta == Tag::Red ? red_adj : blue_adj;
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
    }
    auto depths = [nv](const std::vector<std::vector<Index>>& adj, Index root) {
        std::vector<int> d(nv, -1);
        std::queue<Index> queue;
        d[root] = 0;
        queue.push(root);
        while (!queue.empty()) {
            const Index v = queue.front();
            queue.pop();
            for (Index w : adj[v]) {
                if (d[w] < 0) {
                    d[w] = d[v] + 1;
                    queue.push(w);
                }
            }
        }
        return d;
    };
    const auto red_depth = depths(red_adj, s.red_root);
    const auto blue_depth = depths(blue_adj, s.blue_root);

    // Triangles come in blocks of four per green edge t: the second holds the red vertex
    // across edge (g_t, g_{t+1}), the fourth the blue one.
    const std::size_t L = s.green.size();
    std::vector<Index> red_at(L), blue_at(L);
    for (std::size_t t = 0; t < L; ++t) {
        for (int k : {1, 3}) {
            for (Index v : s.triangles[4 * t + static_cast<std::size_t>(k)]) {
                if (s.tags[v] != Tag::Green) (k == 1 ? red_at : blue_at)[t] = v;
            }
        }
    }
    DrivingFunction out;
    out.X.push_back(red_depth[s.red_root]);
    out.Y.push_back(blue_depth[s.blue_root]);
    for (std::size_t t = 0; t < L; ++t) {
        out.X.push_back(red_depth[red_at[t]]);
        out.Y.push_back(blue_depth[blue_at[t]]);
    }
    return out;
}

} // namespace dca
