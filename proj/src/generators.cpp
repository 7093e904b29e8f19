#include "dca/generators.hpp"

#include "dca/error.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

namespace dca {

namespace {

// Merges points closer than `tol`, keeping the coordinates of the first one seen.
class Welder {
public:
    explicit Welder(double tol) : tol_(tol), cell_(4.0 * tol) {}

    Index add(Point2 p) {
        const auto cx = static_cast<std::int64_t>(std::floor(p.real() / cell_));
        const auto cy = static_cast<std::int64_t>(std::floor(p.imag() / cell_));
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                const auto it = cells_.find(key(cx + dx, cy + dy));
                if (it == cells_.end()) continue;
                for (Index v : it->second) {
                    if (std::abs(points_[v] - p) <= tol_) return v;
                }
            }
        }
        const Index v = points_.size();
        points_.push_back(p);
        cells_[key(cx, cy)].push_back(v);
        return v;
    }

    Face add_face(const std::array<Point2, 4>& corners) {
        return {add(corners[0]), add(corners[1]), add(corners[2]), add(corners[3])};
    }

    [[nodiscard]] std::vector<Point2> take() { return std::move(points_); }

private:
    static std::uint64_t key(std::int64_t x, std::int64_t y) {
        return (static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ULL) ^ static_cast<std::uint64_t>(y);
    }

    double tol_;
    double cell_;
    std::vector<Point2> points_;
    std::unordered_map<std::uint64_t, std::vector<Index>> cells_;
};

using Quad = std::array<Point2, 4>;

// Transition templates in units of the fine square, on the box [0,3] x [-3,0]. The coarse side
// is y = 0 (two vertices), the fine side is y = -3 (four vertices).
const double kSideDrop = 13.0 / 6.0;
const double kCornerPivot = 54.0 / 31.0;
const Point2 kM1{470.0 / 703.0, -1545.0 / 703.0};
const Point2 kM2{103.0 / 56.0, -45.0 / 28.0};

std::vector<Quad> edge_template() {
    const Point2 a{0, 0}, b{3, 0}, q0{0, -kSideDrop}, q3{3, -kSideDrop};
    const Point2 p0{0, -3}, p1{1, -3}, p2{2, -3}, p3{3, -3};
    return {Quad{a, q0, kM1, kM2}, Quad{a, kM2, q3, b}, Quad{q0, p0, p1, kM1}, Quad{kM1, p1, p2, kM2},
            Quad{kM2, p2, p3, q3}};
}

// Outer corner at (0,0); the inner corner (3,-3) touches the fine block.
std::vector<Quad> corner_template() {
    const Point2 c{0, 0}, n{kCornerPivot, -kCornerPivot};
    const Point2 right{3, -kSideDrop}, below{kSideDrop, -3};
    return {Quad{n, right, Point2{3, 0}, c}, Quad{n, below, Point2{3, -3}, right},
            Quad{n, c, Point2{0, -3}, below}};
}

Point2 rotate_quarter(Point2 p, int times) {
    for (int i = 0; i < times; ++i) p = {p.imag(), -p.real()};
    return p;
}

void add_square_block(Welder& w, std::vector<Face>& faces, double s, int half, int hole_half) {
    for (int j = -half; j < half; ++j) {
        for (int i = -half; i < half; ++i) {
            if (hole_half > 0 && i >= -hole_half && i + 1 <= hole_half && j >= -hole_half && j + 1 <= hole_half) {
                continue;
            }
            const double x0 = i * s, x1 = (i + 1) * s, y0 = j * s, y1 = (j + 1) * s;
            faces.push_back(w.add_face({Point2{x0, y0}, Point2{x1, y0}, Point2{x1, y1}, Point2{x0, y1}}));
        }
    }
}

} // namespace

QuadLattice gen_square(double x0, double y0, double x1, double y1, double h) {
    if (!(x1 > x0) || !(y1 > y0)) throw Error(ErrorCode::EmptyDomain, "rectangle has no interior");
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid spacing must be positive");
    const double fx = (x1 - x0) / h;
    const double fy = (y1 - y0) / h;
    const auto nx = static_cast<long>(std::llround(fx));
    const auto ny = static_cast<long>(std::llround(fy));
    if (nx < 1 || ny < 1 || std::abs(fx - static_cast<double>(nx)) > 1e-9 * std::max(1.0, fx) ||
        std::abs(fy - static_cast<double>(ny)) > 1e-9 * std::max(1.0, fy)) {
        throw Error(ErrorCode::InvalidArgument, "spacing " + std::to_string(h) + " does not divide the rectangle");
    }
    std::vector<Point2> pos;
    pos.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
    for (long j = 0; j <= ny; ++j) {
        const double y = j == ny ? y1 : y0 + (y1 - y0) * static_cast<double>(j) / static_cast<double>(ny);
        for (long i = 0; i <= nx; ++i) {
            const double x = i == nx ? x1 : x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(nx);
            pos.emplace_back(x, y);
        }
    }
    auto id = [nx](long i, long j) { return static_cast<Index>(j * (nx + 1) + i); };
    std::vector<Face> faces;
    faces.reserve(static_cast<std::size_t>(nx * ny));
    for (long j = 0; j < ny; ++j) {
        for (long i = 0; i < nx; ++i) faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }
    return build_lattice(std::move(pos), std::move(faces));
}

QuadLattice gen_adaptive_annuli(int levels, double base_size, int refinement) {
    if (levels < 1) throw Error(ErrorCode::InvalidArgument, "levels must be at least 1");
    if (refinement < 1) throw Error(ErrorCode::InvalidArgument, "refinement must be at least 1");
    if (!(base_size > 0.0)) throw Error(ErrorCode::EmptyDomain, "base size must be positive");
    const int p = refinement;
    const int m = 2 * p + 2;
    const double finest = base_size * std::pow(3.0, -(levels - 1));
    Welder w(1e-7 * finest);
    std::vector<Face> faces;
    const auto edge = edge_template();
    const auto corner = corner_template();

    double s = base_size;
    for (int level = 0; level + 1 < levels; ++level, s /= 3.0) {
        add_square_block(w, faces, s, 3 * p, p + 1);
        const double t = s / 3.0;
        const double hole = (p + 1) * s;
        for (int r = 0; r < 4; ++r) {
            auto place = [&](const std::vector<Quad>& cells, int k) {
                for (const Quad& qd : cells) {
                    Quad g;
                    for (int c = 0; c < 4; ++c) {
                        const Point2 local = qd[c];
                        g[c] = rotate_quarter({-hole + k * s + local.real() * t, hole + local.imag() * t}, r);
                    }
                    faces.push_back(w.add_face(g));
                }
            };
            place(corner, 0);
            for (int k = 1; k + 1 < m; ++k) place(edge, k);
        }
    }
    add_square_block(w, faces, s, 3 * p, 0);
    return build_lattice(w.take(), std::move(faces));
}

QuadLattice gen_degenerate_strip(double eps, int n) {
    if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::InvalidArgument, "eps must lie in (0, 1)");
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "strip needs at least one quad");
    Welder w(1e-3 * eps);
    std::vector<Face> faces;
    for (int j = 0; j < n; ++j) {
        if (j % 2 == 0) {
            const double x = j;
            faces.push_back(w.add_face({Point2{x, 0}, Point2{x + eps, 0}, Point2{x + 1, 1}, Point2{x + eps - 1, 1}}));
        } else {
            const double x = j - 1;
            faces.push_back(
                w.add_face({Point2{x + eps, 0}, Point2{x + 2, 0}, Point2{x + 1 + eps, 1}, Point2{x + 1, 1}}));
        }
    }
    return build_lattice(w.take(), std::move(faces));
}

} // namespace dca
