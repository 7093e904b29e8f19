#include "dca/lattice.hpp"

#include "dca/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <unordered_map>

namespace dca {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::string face_label(Index f) { return "face " + std::to_string(f); }

struct EdgeUse {
    Index face[2] = {0, 0};
    Index from[2] = {0, 0};
    int count = 0;
};

struct Box {
    double x0, y0, x1, y1;
};

Box segment_box(Point2 a, Point2 b) {
    return {std::min(a.real(), b.real()), std::min(a.imag(), b.imag()), std::max(a.real(), b.real()),
            std::max(a.imag(), b.imag())};
}

bool boxes_overlap(const Box& a, const Box& b) {
    return a.x0 <= b.x1 && b.x0 <= a.x1 && a.y0 <= b.y1 && b.y0 <= a.y1;
}

void check_face_shape(const std::vector<Point2>& pos, Face& q, Index f) {
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            if (q[i] == q[j]) throw Error(ErrorCode::DegenerateFace, face_label(f) + " repeats a vertex");
            if (pos[q[i]] == pos[q[j]]) {
                throw Error(ErrorCode::DegenerateFace, face_label(f) + " has coincident corners");
            }
        }
    }
    const std::array<Point2, 4> z{pos[q[0]], pos[q[1]], pos[q[2]], pos[q[3]]};
    if (segments_intersect(z[0], z[1], z[2], z[3]) || segments_intersect(z[1], z[2], z[3], z[0])) {
        throw Error(ErrorCode::DegenerateFace, face_label(f) + " is not a simple quadrilateral");
    }
    const double area = signed_area(z);
    if (!(std::abs(area) > 0.0)) throw Error(ErrorCode::DegenerateFace, face_label(f) + " has zero area");
    if (area < 0.0) std::swap(q[1], q[3]);
}

} // namespace

std::vector<Color> two_color(std::size_t vertex_count, std::span<const Face> faces) {
    std::vector<std::vector<Index>> adj(vertex_count);
    for (const Face& q : faces) {
        for (int i = 0; i < 4; ++i) {
            adj[q[i]].push_back(q[(i + 1) % 4]);
            adj[q[(i + 1) % 4]].push_back(q[i]);
        }
    }
    std::vector<int> side(vertex_count, -1);
    std::queue<Index> queue;
    for (Index seed = 0; seed < vertex_count; ++seed) {
        if (side[seed] != -1) continue;
        side[seed] = 0;
        queue.push(seed);
        while (!queue.empty()) {
            const Index v = queue.front();
            queue.pop();
            for (Index w : adj[v]) {
                if (side[w] == -1) {
                    side[w] = 1 - side[v];
                    queue.push(w);
                } else if (side[w] == side[v]) {
                    throw Error(ErrorCode::NotBipartite,
                                "odd cycle through vertices " + std::to_string(v) + " and " + std::to_string(w));
                }
            }
        }
    }
    std::vector<Color> colors(vertex_count);
    for (Index v = 0; v < vertex_count; ++v) colors[v] = side[v] == 0 ? Color::Black : Color::White;
    return colors;
}

std::vector<Color> two_color(const QuadLattice& q) { return two_color(q.vertex_count(), q.faces()); }

QuadLattice build_lattice(std::vector<Point2> positions, std::vector<Face> faces) {
    if (faces.empty()) throw Error(ErrorCode::EmptyLattice, "a lattice needs at least one face");
    const std::size_t nv = positions.size();
    for (Index v = 0; v < nv; ++v) {
        if (!is_finite(positions[v])) {
            throw Error(ErrorCode::NonFiniteValue, "vertex " + std::to_string(v) + " has a non-finite coordinate");
        }
    }
    std::vector<std::uint8_t> used(nv, 0);
    for (Index f = 0; f < faces.size(); ++f) {
        for (Index v : faces[f]) {
            if (v >= nv) {
                throw Error(ErrorCode::IndexOutOfRange,
                            face_label(f) + " references vertex " + std::to_string(v) + " of " + std::to_string(nv));
            }
            used[v] = 1;
        }
    }
    for (Index f = 0; f < faces.size(); ++f) check_face_shape(positions, faces[f], f);
    for (Index v = 0; v < nv; ++v) {
        if (!used[v]) throw Error(ErrorCode::InvalidArgument, "vertex " + std::to_string(v) + " belongs to no face");
    }

    // Undirected edge table.
    std::unordered_map<std::uint64_t, EdgeUse> edges;
    edges.reserve(faces.size() * 3);
    for (Index f = 0; f < faces.size(); ++f) {
        for (int i = 0; i < 4; ++i) {
            const Index a = faces[f][i];
            const Index b = faces[f][(i + 1) % 4];
            const std::uint64_t key = static_cast<std::uint64_t>(std::min(a, b)) * nv + std::max(a, b);
            EdgeUse& e = edges[key];
            if (e.count == 2) {
                throw Error(ErrorCode::NonManifoldEdge, "edge " + std::to_string(a) + "-" + std::to_string(b) +
                                                            " lies on more than two faces");
            }
            if (e.count == 1 && e.from[0] == a) {
                throw Error(ErrorCode::OverlappingFaces, "faces " + std::to_string(e.face[0]) + " and " +
                                                             std::to_string(f) + " lie on the same side of edge " +
                                                             std::to_string(a) + "-" + std::to_string(b));
            }
            e.face[e.count] = f;
            e.from[e.count] = a;
            ++e.count;
        }
    }

    // Boundary edges, directed as in their face so that the interior lies on the left.
    std::vector<Index> next(nv, nv);
    std::size_t boundary_edges = 0;
    double max_edge = 0.0;
    for (const auto& [key, e] : edges) {
        const Index a = static_cast<Index>(key / nv);
        const Index b = static_cast<Index>(key % nv);
        max_edge = std::max(max_edge, std::abs(positions[a] - positions[b]));
        if (e.count != 1) continue;
        const Index from = e.from[0];
        const Index to = from == a ? b : a;
        if (next[from] != nv) {
            throw Error(ErrorCode::NonManifoldVertex, "boundary passes twice through vertex " + std::to_string(from));
        }
        next[from] = to;
        ++boundary_edges;
    }
    if (boundary_edges == 0) throw Error(ErrorCode::MultipleBoundaryComponents, "the faces close up without a boundary");

    QuadLattice q;
    Index start = nv;
    for (Index v = 0; v < nv; ++v) {
        if (next[v] != nv) {
            start = v;
            break;
        }
    }
    q.on_boundary_.assign(nv, 0);
    for (Index v = start;;) {
        q.boundary_.push_back(v);
        q.on_boundary_[v] = 1;
        v = next[v];
        if (v == start) break;
        if (q.boundary_.size() > boundary_edges) {
            throw Error(ErrorCode::NonManifoldVertex, "boundary edges do not close into cycles");
        }
    }
    if (q.boundary_.size() != boundary_edges) {
        throw Error(ErrorCode::MultipleBoundaryComponents,
                    "boundary splits into several cycles (" + std::to_string(q.boundary_.size()) + " of " +
                        std::to_string(boundary_edges) + " edges in the first)");
    }
    const auto euler = static_cast<long long>(nv) - static_cast<long long>(edges.size()) +
                       static_cast<long long>(faces.size());
    if (euler != 1) {
        throw Error(ErrorCode::MultipleBoundaryComponents,
                    "faces do not form a disk (Euler characteristic " + std::to_string(euler) + ")");
    }

    // Incidence lists in counterclockwise order.
    q.incidence_offset_.assign(nv + 1, 0);
    for (const Face& f : faces) {
        for (Index v : f) ++q.incidence_offset_[v + 1];
    }
    for (Index v = 0; v < nv; ++v) q.incidence_offset_[v + 1] += q.incidence_offset_[v];
    q.incidence_.resize(q.incidence_offset_[nv]);
    {
        std::vector<std::size_t> fill(q.incidence_offset_.begin(), q.incidence_offset_.end() - 1);
        for (Index f = 0; f < faces.size(); ++f) {
            for (int s = 0; s < 4; ++s) q.incidence_[fill[faces[f][s]]++] = {f, s};
        }
    }
    for (Index v = 0; v < nv; ++v) {
        auto first = q.incidence_.begin() + static_cast<std::ptrdiff_t>(q.incidence_offset_[v]);
        auto last = q.incidence_.begin() + static_cast<std::ptrdiff_t>(q.incidence_offset_[v + 1]);
        const Point2 z = positions[v];
        auto direction = [&](const Incidence& in) { return std::arg(positions[faces[in.face][(in.slot + 1) % 4]] - z); };
        std::sort(first, last, [&](const Incidence& a, const Incidence& b) {
            const double da = direction(a);
            const double db = direction(b);
            return da != db ? da < db : a.face < b.face;
        });
        // Around an interior vertex the corner angles of an embedding add up to a full turn.
        double total = 0.0;
        for (auto it = first; it != last; ++it) {
            const Face& f = faces[it->face];
            total += interior_angle(positions[f[(it->slot + 3) % 4]], z, positions[f[(it->slot + 1) % 4]]);
        }
        const bool interior = q.on_boundary_[v] == 0;
        if ((interior && std::abs(total - two_pi) > 1e-6) || (!interior && total >= two_pi)) {
            throw Error(ErrorCode::OverlappingFaces,
                        "faces around vertex " + std::to_string(v) + " wrap by " + std::to_string(total) + " rad");
        }
    }

    // The boundary polygon must be simple.
    {
        const std::size_t nb = q.boundary_.size();
        std::vector<std::pair<Box, std::size_t>> segs(nb);
        for (std::size_t i = 0; i < nb; ++i) {
            segs[i] = {segment_box(positions[q.boundary_[i]], positions[q.boundary_[(i + 1) % nb]]), i};
        }
        std::sort(segs.begin(), segs.end(), [](const auto& a, const auto& b) { return a.first.x0 < b.first.x0; });
        for (std::size_t s = 0; s < nb; ++s) {
            for (std::size_t t = s + 1; t < nb && segs[t].first.x0 <= segs[s].first.x1; ++t) {
                const std::size_t i = segs[s].second;
                const std::size_t j = segs[t].second;
                if ((i + 1) % nb == j || (j + 1) % nb == i) continue;
                if (!boxes_overlap(segs[s].first, segs[t].first)) continue;
                if (segments_intersect(positions[q.boundary_[i]], positions[q.boundary_[(i + 1) % nb]],
                                       positions[q.boundary_[j]], positions[q.boundary_[(j + 1) % nb]])) {
                    throw Error(ErrorCode::OverlappingFaces, "boundary crosses itself near vertex " +
                                                                 std::to_string(q.boundary_[i]));
                }
            }
        }
    }

    q.colors_ = two_color(nv, faces);
    q.positions_ = std::move(positions);
    q.faces_ = std::move(faces);
    q.max_edge_ = max_edge;
    return q;
}

Polyline QuadLattice::boundary_polyline() const {
    Polyline line;
    line.closed = true;
    line.points.reserve(boundary_.size());
    for (Index v : boundary_) line.points.push_back(positions_[v]);
    return line;
}

FaceMetrics face_metrics(const std::array<Point2, 4>& z) {
    FaceMetrics m;
    m.min_edge = std::numeric_limits<double>::infinity();
    m.min_angle = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
        const double e = std::abs(z[(i + 1) % 4] - z[i]);
        m.min_edge = std::min(m.min_edge, e);
        m.max_edge = std::max(m.max_edge, e);
        m.min_angle = std::min(m.min_angle, interior_angle(z[(i + 3) % 4], z[i], z[(i + 1) % 4]));
        for (int j = i + 1; j < 4; ++j) m.diameter = std::max(m.diameter, std::abs(z[j] - z[i]));
    }
    const Point2 d1 = z[2] - z[0];
    const Point2 d2 = z[3] - z[1];
    const double l1 = std::abs(d1);
    const double l2 = std::abs(d2);
    m.min_diagonal = std::min(l1, l2);
    m.max_diagonal = std::max(l1, l2);
    m.area = std::abs(signed_area(z));
    m.max_edge_ratio = m.max_edge / m.min_edge;
    m.k_face = std::max(2.0 * std::numbers::pi / m.min_angle, m.max_edge_ratio);
    m.orthogonality_defect = std::abs(dot(d1, d2)) / (l1 * l2);
    m.diagonal_angle = std::atan2(std::abs(cross(d1, d2)), std::abs(dot(d1, d2)));
    return m;
}

FaceMetrics face_metrics(const QuadLattice& q, Index f) { return face_metrics(q.corners(f)); }

GeometryReport geometry_report(const QuadLattice& q, double ortho_tol) {
    GeometryReport r;
    const std::size_t nf = q.face_count();
    r.per_face.resize(nf);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t f = 0; f < static_cast<std::ptrdiff_t>(nf); ++f) {
        r.per_face[static_cast<std::size_t>(f)] = face_metrics(q, static_cast<Index>(f));
    }
    r.min_diagonal_angle = std::numeric_limits<double>::infinity();
    for (const FaceMetrics& m : r.per_face) {
        r.max_orthogonality_defect = std::max(r.max_orthogonality_defect, m.orthogonality_defect);
        r.k_round = std::max(r.k_round, m.k_face);
        r.max_diagonal_ratio = std::max(r.max_diagonal_ratio, m.max_diagonal / m.min_diagonal);
        r.min_diagonal_angle = std::min(r.min_diagonal_angle, m.diagonal_angle);
    }
    r.orthogonal = r.max_orthogonality_defect <= ortho_tol;

    // Vertex density: closed balls of radius M(Q) centred at vertices, bucketed on an M-grid.
    const double m = q.max_edge();
    const double reach = m * (1.0 + 1e-12);
    std::unordered_map<std::uint64_t, std::vector<Index>> cells;
    auto cell_of = [m](Point2 p) {
        return std::pair{static_cast<std::int64_t>(std::floor(p.real() / m)),
                         static_cast<std::int64_t>(std::floor(p.imag() / m))};
    };
    auto key = [](std::int64_t cx, std::int64_t cy) {
        return (static_cast<std::uint64_t>(cx) << 32) ^ (static_cast<std::uint64_t>(cy) & 0xffffffffULL);
    };
    for (Index v = 0; v < q.vertex_count(); ++v) {
        const auto [cx, cy] = cell_of(q.position(v));
        cells[key(cx, cy)].push_back(v);
    }
    for (Index v = 0; v < q.vertex_count(); ++v) {
        const Point2 p = q.position(v);
        const auto [cx, cy] = cell_of(p);
        std::size_t count = 0;
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                const auto it = cells.find(key(cx + dx, cy + dy));
                if (it == cells.end()) continue;
                for (Index w : it->second) count += std::abs(q.position(w) - p) <= reach ? 1 : 0;
            }
        }
        r.max_ball_count = std::max(r.max_ball_count, count);
    }
    r.skopenkov_C = std::max({r.max_diagonal_ratio, 1.0 / r.min_diagonal_angle, static_cast<double>(r.max_ball_count)});
    return r;
}

void ensure_orthogonal(const QuadLattice& q, double ortho_tol) {
    for (Index f = 0; f < q.face_count(); ++f) {
        const double defect = face_metrics(q, f).orthogonality_defect;
        if (defect > ortho_tol) {
            throw Error(ErrorCode::NotOrthogonal,
                        face_label(f) + " has orthogonality defect " + std::to_string(defect));
        }
    }
}

std::vector<Index> neighborhood(const QuadLattice& q, Index f) {
    std::vector<Index> out;
    for (Index v : q.face(f)) {
        for (const Incidence& in : q.incident(v)) out.push_back(in.face);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

CurveCover curve_cover(const QuadLattice& q, const Polyline& gamma) {
    CurveCover cover;
    const std::size_t ns = gamma.segment_count();
    if (ns == 0) return cover;
    std::vector<Box> seg_boxes(ns);
    for (std::size_t s = 0; s < ns; ++s) seg_boxes[s] = segment_box(gamma.segment_start(s), gamma.segment_end(s));
    for (Index f = 0; f < q.face_count(); ++f) {
        const auto z = q.corners(f);
        Box fb{z[0].real(), z[0].imag(), z[0].real(), z[0].imag()};
        for (const Point2& p : z) {
            fb.x0 = std::min(fb.x0, p.real());
            fb.y0 = std::min(fb.y0, p.imag());
            fb.x1 = std::max(fb.x1, p.real());
            fb.y1 = std::max(fb.y1, p.imag());
        }
        bool hit = false;
        for (std::size_t s = 0; s < ns && !hit; ++s) {
            if (!boxes_overlap(fb, seg_boxes[s])) continue;
            const Point2 a = gamma.segment_start(s);
            const Point2 b = gamma.segment_end(s);
            if (point_in_polygon(a, z) || point_in_polygon(b, z)) {
                hit = true;
                break;
            }
            for (int i = 0; i < 4 && !hit; ++i) hit = segments_intersect(a, b, z[i], z[(i + 1) % 4]);
        }
        if (hit) {
            cover.faces.push_back(f);
            cover.diam_sum += face_metrics(z).diameter;
        }
    }
    return cover;
}

} // namespace dca
