#include "dca/packing.hpp"

#include "dca/error.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <complex>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <string>

namespace dca {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::vector<std::uint8_t> boundary_mask(const Triangulation& t) {
    std::vector<std::uint8_t> mask(t.vertex_count, 0);
    for (Index v : t.boundary) mask[v] = 1;
    return mask;
}

// Angle sum at a vertex with radius exp(log_r) and its derivative in log_r.
// Radii and centres are computed in extended precision: the radius system is poorly conditioned
// on larger surfaces, so angle residuals at double rounding still leave visible tangency errors.
using Real = long double;
constexpr Real two_pi_ext = 2 * std::numbers::pi_v<long double>;

struct AngleSum {
    Real value;
    Real slope;
};

AngleSum angle_sum(Real log_r, std::span<const std::array<Index, 2>> fan, const std::vector<Real>& radii) {
    const Real r = std::exp(log_r);
    AngleSum out{0, 0};
    for (const auto& [a, b] : fan) {
        const Real ra = radii[a];
        const Real rb = radii[b];
        const Real s = ra * rb / ((r + ra) * (r + rb));
        out.value += 2 * std::asin(std::sqrt(s));
        out.slope -= r * std::sqrt(s / (1 - s)) * (1 / (r + ra) + 1 / (r + rb));
    }
    return out;
}

// Safeguarded Newton on the angle sum, which decreases monotonically in the radius.
Real solve_radius(Real log_r, std::span<const std::array<Index, 2>> fan, const std::vector<Real>& radii, Real tol) {
    Real lo = -std::numeric_limits<Real>::infinity();
    Real hi = std::numeric_limits<Real>::infinity();
    for (int it = 0; it < 200; ++it) {
        const AngleSum a = angle_sum(log_r, fan, radii);
        const Real f = a.value - two_pi_ext;
        if (std::abs(f) <= tol) break;
        (f > 0 ? lo : hi) = log_r;
        Real next = log_r - f / a.slope;
        if (!(next > lo && next < hi) || !std::isfinite(next)) {
            if (std::isfinite(lo) && std::isfinite(hi)) next = (lo + hi) / 2;
            else next = f > 0 ? log_r + 2 : log_r - 2;
        }
        // no further progress is representable
        if (std::abs(next - log_r) <= 4 * std::numeric_limits<Real>::epsilon() * std::max<Real>(1, std::abs(log_r))) {
            return next;
        }
        log_r = next;
    }
    return log_r;
}

Real tangency_angle_ext(Real rv, Real ra, Real rb) { return 2 * std::asin(std::sqrt(ra * rb / ((rv + ra) * (rv + rb)))); }

} // namespace

Triangulation flower(int petals) {
    if (petals < 3) throw Error(ErrorCode::InvalidArgument, "a flower needs at least three petals");
    Triangulation t;
    t.vertex_count = static_cast<std::size_t>(petals) + 1;
    for (int i = 1; i <= petals; ++i) {
        t.triangles.push_back({0, static_cast<Index>(i), static_cast<Index>(i % petals + 1)});
        t.boundary.push_back(static_cast<Index>(i));
    }
    return t;
}

Triangulation puncture(std::size_t vertex_count, std::span<const Triangle> triangles, Index removed) {
    if (removed >= vertex_count) throw Error(ErrorCode::IndexOutOfRange, "no vertex " + std::to_string(removed));
    auto renumber = [removed](Index v) { return v > removed ? v - 1 : v; };
    Triangulation t;
    t.vertex_count = vertex_count - 1;
    std::map<Index, Index> next;
    for (const Triangle& tri : triangles) {
        const auto at = std::find(tri.begin(), tri.end(), removed);
        if (at == tri.end()) {
            t.triangles.push_back({renumber(tri[0]), renumber(tri[1]), renumber(tri[2])});
            continue;
        }
        const auto k = static_cast<std::size_t>(at - tri.begin());
        next[tri[(k + 1) % 3]] = tri[(k + 2) % 3];
    }
    if (next.empty()) throw Error(ErrorCode::InvalidArgument, "vertex " + std::to_string(removed) + " has no star");
    const Index start = next.begin()->first;
    for (Index v = start;;) {
        t.boundary.push_back(renumber(v));
        const auto it = next.find(v);
        if (it == next.end() || t.boundary.size() > next.size()) {
            throw Error(ErrorCode::InvalidArgument, "link of vertex " + std::to_string(removed) + " is not a cycle");
        }
        v = it->second;
        if (v == start) break;
    }
    if (t.boundary.size() != next.size()) {
        throw Error(ErrorCode::InvalidArgument, "link of vertex " + std::to_string(removed) + " is not a cycle");
    }
    return t;
}

Triangulation open_surface(const WeldedSurface& s) {
    const std::size_t n = s.vertex_count();
    std::vector<std::vector<Index>> adjacent(n);
    for (const auto& [a, b] : s.edges()) {
        adjacent[a].push_back(b);
        adjacent[b].push_back(a);
    }
    // Radii shrink roughly geometrically with the graph distance to the boundary, so puncture at a
    // graph centre.
    std::vector<std::size_t> eccentricity(n, 0);
    std::vector<std::size_t> dist(n);
    for (Index v = 0; v < n; ++v) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<std::size_t>::max());
        std::queue<Index> queue;
        queue.push(v);
        dist[v] = 0;
        while (!queue.empty()) {
            const Index a = queue.front();
            queue.pop();
            eccentricity[v] = std::max(eccentricity[v], dist[a]);
            for (Index b : adjacent[a]) {
                if (dist[b] == std::numeric_limits<std::size_t>::max()) {
                    dist[b] = dist[a] + 1;
                    queue.push(b);
                }
            }
        }
    }
    const auto degree = s.degrees();
    Index pick = 0;
    for (Index v = 1; v < n; ++v) {
        if (eccentricity[v] < eccentricity[pick] || (eccentricity[v] == eccentricity[pick] && degree[v] > degree[pick])) {
            pick = v;
        }
    }
    return puncture(n, s.triangles, pick);
}

double tangency_angle(double rv, double ra, double rb) {
    return 2.0 * std::asin(std::sqrt(ra * rb / ((rv + ra) * (rv + rb))));
}

CirclePacking circle_pack(const Triangulation& t, std::span<const double> boundary_radii, double tol,
                          std::size_t max_sweeps) {
    if (!boundary_radii.empty() && boundary_radii.size() != t.boundary.size()) {
        throw Error(ErrorCode::InvalidBoundaryRadii, "need one radius per boundary vertex");
    }
    for (double r : boundary_radii) {
        if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidBoundaryRadii, "radii must be positive");
    }
    const auto on_boundary = boundary_mask(t);
    std::vector<std::vector<std::array<Index, 2>>> fans(t.vertex_count);
    for (const Triangle& tri : t.triangles) {
        for (int k = 0; k < 3; ++k) fans[tri[k]].push_back({tri[(k + 1) % 3], tri[(k + 2) % 3]});
    }
    std::vector<Index> interior;
    for (Index v = 0; v < t.vertex_count; ++v) {
        if (!on_boundary[v]) interior.push_back(v);
    }
    if (interior.empty()) throw Error(ErrorCode::InvalidArgument, "triangulation has no interior vertex");

    CirclePacking p;
    p.triangulation = t;
    std::vector<Real> radii(t.vertex_count, 1);
    for (std::size_t k = 0; k < t.boundary.size() && !boundary_radii.empty(); ++k) {
        radii[t.boundary[k]] = boundary_radii[k];
    }
    auto residual = [&] {
        Real worst = 0;
        for (Index v : interior) {
            worst = std::max(worst, std::abs(angle_sum(std::log(radii[v]), fans[v], radii).value - two_pi_ext));
        }
        return worst;
    };
    // Sweep down to rounding level whatever tol asks for; tol only decides whether running out of
    // sweeps is an error.
    std::size_t widest = 0;
    for (Index v : interior) widest = std::max(widest, fans[v].size());
    const Real floor = 4 * std::numeric_limits<Real>::epsilon() * two_pi_ext * static_cast<Real>(widest);
    Real res = residual();
    while (res > floor) {
        if (p.sweeps == max_sweeps) {
            if (res <= tol) break;
            throw Error(ErrorCode::NoConvergence, "angle sums off by " + std::to_string(static_cast<double>(res)) +
                                                      " after " + std::to_string(max_sweeps) + " sweeps");
        }
        const Real previous = res;
        for (Index v : interior) radii[v] = std::exp(solve_radius(std::log(radii[v]), fans[v], radii, floor / 10));
        ++p.sweeps;
        res = residual();
        // stalled at rounding level
        if (res <= tol && res >= previous) break;
    }
    p.angle_residual = static_cast<double>(res);
    p.radii.assign(radii.begin(), radii.end());

    // Breadth-first layout across shared edges, starting from the first triangle.
    using Complex = std::complex<Real>;
    std::vector<Complex> centers(t.vertex_count, Complex{std::numeric_limits<Real>::quiet_NaN(), 0});
    std::vector<std::uint8_t> placed(t.vertex_count, 0);
    std::map<std::array<Index, 2>, std::vector<std::size_t>> by_edge;
    for (std::size_t i = 0; i < t.triangles.size(); ++i) {
        const Triangle& tri = t.triangles[i];
        for (int k = 0; k < 3; ++k) {
            by_edge[{std::min(tri[k], tri[(k + 1) % 3]), std::max(tri[k], tri[(k + 1) % 3])}].push_back(i);
        }
    }
    const Triangle& first = t.triangles.front();
    centers[first[0]] = {0, 0};
    centers[first[1]] = {radii[first[0]] + radii[first[1]], 0};
    placed[first[0]] = placed[first[1]] = 1;
    std::vector<std::uint8_t> done(t.triangles.size(), 0);
    std::queue<std::size_t> queue;
    queue.push(0);
    done[0] = 1;
    while (!queue.empty()) {
        const Triangle& tri = t.triangles[queue.front()];
        queue.pop();
        for (int k = 0; k < 3; ++k) {
            const Index u = tri[k], v = tri[(k + 1) % 3], w = tri[(k + 2) % 3];
            if (placed[u] && placed[v] && !placed[w]) {
                const Real alpha = tangency_angle_ext(radii[u], radii[v], radii[w]);
                centers[w] = centers[u] + (radii[u] + radii[w]) * std::polar<Real>(1, std::arg(centers[v] - centers[u]) + alpha);
                placed[w] = 1;
            }
        }
        for (int k = 0; k < 3; ++k) {
            for (std::size_t other : by_edge[{std::min(tri[k], tri[(k + 1) % 3]), std::max(tri[k], tri[(k + 1) % 3])}]) {
                if (!done[other]) {
                    done[other] = 1;
                    queue.push(other);
                }
            }
        }
    }
    for (Index v = 0; v < t.vertex_count; ++v) {
        if (!placed[v]) throw Error(ErrorCode::InvalidArgument, "vertex " + std::to_string(v) + " lies in no triangle");
    }

    // The breadth-first layout carries rotation errors of large circles over to small ones far
    // away. Instead take the centres that agree with the mean of the positions their triangles
    // predict from the other two corners,
    //   c_w = mean over triangles (u, v, w) of c_u + (c_v - c_u) lambda,
    // with the first two centres fixed. This is one sparse linear solve; each row is scaled by
    // 1 / r_w so pivoting sees the local scale. The breadth-first layout only supplies a fallback.
    using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
    std::vector<Eigen::Index> unknown(t.vertex_count, -1);
    Eigen::Index count = 0;
    for (Index v = 0; v < t.vertex_count; ++v) {
        if (v != first[0] && v != first[1]) unknown[v] = count++;
    }
    std::vector<Eigen::Triplet<Complex>> entries;
    Vector rhs = Vector::Zero(count);
    std::vector<Real> row_weight(t.vertex_count, 0);
    for (const Triangle& tri : t.triangles) {
        for (int k = 0; k < 3; ++k) row_weight[tri[(k + 2) % 3]] += 1;
    }
    auto add = [&](Eigen::Index row, Index col, Complex value) {
        if (unknown[col] >= 0) entries.emplace_back(row, unknown[col], value);
        else rhs[row] -= value * centers[col];
    };
    for (const Triangle& tri : t.triangles) {
        for (int k = 0; k < 3; ++k) {
            const Index u = tri[k], v = tri[(k + 1) % 3], w = tri[(k + 2) % 3];
            if (unknown[w] < 0) continue;
            const Complex lambda = (radii[u] + radii[w]) / (radii[u] + radii[v]) *
                                   std::polar<Real>(1, tangency_angle_ext(radii[u], radii[v], radii[w]));
            const Real scale = 1 / (row_weight[w] * radii[w]);
            add(unknown[w], w, scale);
            add(unknown[w], u, -(Real(1) - lambda) * scale);
            add(unknown[w], v, -lambda * scale);
        }
    }
    Eigen::SparseMatrix<Complex> a(count, count);
    a.setFromTriplets(entries.begin(), entries.end());
    Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
    lu.compute(a);
    if (lu.info() == Eigen::Success) {
        Vector x = lu.solve(rhs);
        for (int refine = 0; refine < 2 && x.allFinite(); ++refine) x += lu.solve(Vector(rhs - a * x));
        if (lu.info() == Eigen::Success && x.allFinite()) {
            for (Index v = 0; v < t.vertex_count; ++v) {
                if (unknown[v] >= 0) centers[v] = x[unknown[v]];
            }
        }
    }
    p.centers.resize(t.vertex_count);
    for (Index v = 0; v < t.vertex_count; ++v) {
        p.centers[v] = {static_cast<double>(centers[v].real()), static_cast<double>(centers[v].imag())};
    }
    for (const auto& [edge, tris] : by_edge) {
        const double want = p.radii[edge[0]] + p.radii[edge[1]];
        p.tangency_error = std::max(p.tangency_error, std::abs(std::abs(p.centers[edge[0]] - p.centers[edge[1]]) - want) / want);
    }
    return p;
}

double ring_ratio(const CirclePacking& p) {
    const auto on_boundary = boundary_mask(p.triangulation);
    double worst = std::numeric_limits<double>::infinity();
    for (const Triangle& tri : p.triangulation.triangles) {
        for (int k = 0; k < 3; ++k) {
            const Index v = tri[k];
            if (on_boundary[v]) continue;
            worst = std::min({worst, p.radii[tri[(k + 1) % 3]] / p.radii[v], p.radii[tri[(k + 2) % 3]] / p.radii[v]});
        }
    }
    return worst;
}

Point2 incenter(Point2 z1, Point2 z2, Point2 z3) {
    const double a = std::abs(z2 - z3);
    const double b = std::abs(z3 - z1);
    const double c = std::abs(z1 - z2);
    return (a * z1 + b * z2 + c * z3) / (a + b + c);
}

namespace {

Point2 tangency_point(const CirclePacking& p, Index i, Index j) {
    return p.centers[i] + (p.radii[i] / (p.radii[i] + p.radii[j])) * (p.centers[j] - p.centers[i]);
}

// The incircle must touch each side at the tangency point of the two circles on that side.
void check_incircle(const CirclePacking& p, Index t) {
    const Triangle& tri = p.triangulation.triangles[t];
    const Point2 z[3] = {p.centers[tri[0]], p.centers[tri[1]], p.centers[tri[2]]};
    const Point2 in = incenter(z[0], z[1], z[2]);
    const double perimeter = std::abs(z[1] - z[0]) + std::abs(z[2] - z[1]) + std::abs(z[0] - z[2]);
    const double inradius = std::abs(orient(z[0], z[1], z[2])) / perimeter;
    for (int k = 0; k < 3; ++k) {
        const Point2 c = tangency_point(p, tri[k], tri[(k + 1) % 3]);
        const Point2 side = z[(k + 1) % 3] - z[k];
        const double off_radius = std::abs(std::abs(in - c) - inradius);
        const double off_normal = std::abs(dot(in - c, side)) / std::abs(side);
        if (off_radius > 1e-9 * perimeter || off_normal > 1e-9 * perimeter) {
            throw Error(ErrorCode::ValidationFailed,
                        "incircle of triangle " + std::to_string(t) + " misses a tangency point");
        }
    }
}

} // namespace

std::array<std::array<Point2, 4>, 3> triangle_quads(const CirclePacking& p, Index t) {
    const Triangle& tri = p.triangulation.triangles[t];
    const Point2 in = incenter(p.centers[tri[0]], p.centers[tri[1]], p.centers[tri[2]]);
    std::array<std::array<Point2, 4>, 3> out;
    for (int k = 0; k < 3; ++k) {
        const Index v = tri[k], next = tri[(k + 1) % 3], prev = tri[(k + 2) % 3];
        out[k] = {p.centers[v], tangency_point(p, v, next), in, tangency_point(p, v, prev)};
    }
    return out;
}

QuadLattice pack_to_quads(const CirclePacking& p, const QuadOptions& options) {
    const Triangulation& t = p.triangulation;
    const auto on_boundary = boundary_mask(t);
    const bool drop = options.drop_boundary_triangles || options.clip.has_value();

    // Vertex keys: centres (0, v, 0), tangency points (1, min, max), incenters (2, t, 0).
    std::map<std::array<Index, 3>, Index> ids;
    std::vector<Point2> positions;
    auto id = [&](std::array<Index, 3> key, Point2 z) {
        const auto [it, fresh] = ids.emplace(key, positions.size());
        if (fresh) positions.push_back(z);
        return it->second;
    };
    std::vector<Face> quads;
    for (Index ti = 0; ti < t.triangles.size(); ++ti) {
        const Triangle& tri = t.triangles[ti];
        if (drop && (on_boundary[tri[0]] || on_boundary[tri[1]] || on_boundary[tri[2]])) continue;
        check_incircle(p, ti);
        const auto corners = triangle_quads(p, ti);
        for (int k = 0; k < 3; ++k) {
            const auto& z = corners[k];
            if (options.clip) {
                const bool inside = std::all_of(z.begin(), z.end(), [&](Point2 c) {
                    return std::abs(c - options.clip->center) <= options.clip->radius;
                });
                if (!inside) continue;
            }
            const Index v = tri[k], next = tri[(k + 1) % 3], prev = tri[(k + 2) % 3];
            quads.push_back({id({0, v, 0}, z[0]), id({1, std::min(v, next), std::max(v, next)}, z[1]),
                             id({2, ti, 0}, z[2]), id({1, std::min(v, prev), std::max(v, prev)}, z[3])});
        }
    }

    // Trim to a single disk: keep the largest edge-connected piece, split pinch vertices, repeat.
    std::vector<std::uint8_t> keep(quads.size(), 1);
    auto edge_key = [](Index a, Index b) { return std::array<Index, 2>{std::min(a, b), std::max(a, b)}; };
    for (bool changed = true; changed;) {
        changed = false;
        std::map<std::array<Index, 2>, std::vector<std::size_t>> by_edge;
        for (std::size_t f = 0; f < quads.size(); ++f) {
            if (!keep[f]) continue;
            for (int k = 0; k < 4; ++k) by_edge[edge_key(quads[f][k], quads[f][(k + 1) % 4])].push_back(f);
        }
        std::vector<std::size_t> comp(quads.size(), quads.size());
        std::vector<std::size_t> sizes;
        for (std::size_t f = 0; f < quads.size(); ++f) {
            if (!keep[f] || comp[f] != quads.size()) continue;
            const std::size_t c = sizes.size();
            sizes.push_back(0);
            std::queue<std::size_t> queue;
            comp[f] = c;
            queue.push(f);
            while (!queue.empty()) {
                const std::size_t g = queue.front();
                queue.pop();
                ++sizes[c];
                for (int k = 0; k < 4; ++k) {
                    for (std::size_t h : by_edge[edge_key(quads[g][k], quads[g][(k + 1) % 4])]) {
                        if (comp[h] == quads.size()) {
                            comp[h] = c;
                            queue.push(h);
                        }
                    }
                }
            }
        }
        if (sizes.empty()) break;
        const auto best = static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
        for (std::size_t f = 0; f < quads.size(); ++f) {
            if (keep[f] && comp[f] != best) {
                keep[f] = 0;
                changed = true;
            }
        }
        if (changed) continue;

        // Fans around each vertex: quads at v joined when they share an edge through v.
        std::map<Index, std::vector<std::size_t>> at_vertex;
        for (std::size_t f = 0; f < quads.size(); ++f) {
            if (keep[f]) {
                for (Index v : quads[f]) at_vertex[v].push_back(f);
            }
        }
        for (const auto& [v, around] : at_vertex) {
            std::map<std::size_t, std::size_t> fan;
            for (std::size_t f : around) fan[f] = f;
            auto root = [&](std::size_t f) {
                while (fan[f] != f) f = fan[f];
                return f;
            };
            for (std::size_t f : around) {
                for (int k = 0; k < 4; ++k) {
                    if (quads[f][k] != v) continue;
                    for (Index w : {quads[f][(k + 1) % 4], quads[f][(k + 3) % 4]}) {
                        for (std::size_t g : by_edge[edge_key(v, w)]) {
                            const std::size_t a = root(f), b = root(g);
                            if (a != b) fan[std::max(a, b)] = std::min(a, b);
                        }
                    }
                }
            }
            std::map<std::size_t, std::size_t> fan_size;
            for (std::size_t f : around) ++fan_size[root(f)];
            if (fan_size.size() < 2) continue;
            std::size_t largest = fan_size.begin()->first;
            for (const auto& [r, n] : fan_size) {
                if (n > fan_size[largest]) largest = r;
            }
            for (std::size_t f : around) {
                if (root(f) != largest) {
                    keep[f] = 0;
                    changed = true;
                }
            }
            if (changed) break;
        }
    }

    std::vector<Face> kept;
    for (std::size_t f = 0; f < quads.size(); ++f) {
        if (keep[f]) kept.push_back(quads[f]);
    }
    if (kept.empty()) throw Error(ErrorCode::ClippedToEmpty, "no quadrilateral survives the clipping");
    std::vector<Index> remap(positions.size(), static_cast<Index>(-1));
    std::vector<Point2> used;
    for (Face& f : kept) {
        for (Index& v : f) {
            if (remap[v] == static_cast<Index>(-1)) {
                remap[v] = used.size();
                used.push_back(positions[v]);
            }
            v = remap[v];
        }
    }
    try {
        return build_lattice(std::move(used), std::move(kept));
    } catch (const Error& e) {
        throw Error(ErrorCode::ValidationFailed, e.what());
    }
}

} // namespace dca
