#include "dca/harness.hpp"

#include "dca/error.hpp"
#include "dca/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace dca {

namespace {

constexpr std::array<double, 8> kGaussNodes{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                            0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                              0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

// Degree-5 seven-point rule on a triangle: barycentric points and weights summing to one.
double integrate_triangle(const std::function<double(Point2)>& f, Point2 a, Point2 b, Point2 c) {
    static const double s15 = std::sqrt(15.0);
    static const double a1 = (6.0 - s15) / 21.0, w1 = (155.0 - s15) / 1200.0;
    static const double a2 = (6.0 + s15) / 21.0, w2 = (155.0 + s15) / 1200.0;
    auto at = [&](double l1, double l2) { return f(l1 * a + l2 * b + (1.0 - l1 - l2) * c); };
    double s = 0.225 * at(1.0 / 3.0, 1.0 / 3.0);
    s += w1 * (at(a1, a1) + at(a1, 1.0 - 2.0 * a1) + at(1.0 - 2.0 * a1, a1));
    s += w2 * (at(a2, a2) + at(a2, 1.0 - 2.0 * a2) + at(1.0 - 2.0 * a2, a2));
    return s * 0.5 * std::abs(orient(a, b, c));
}

// Largest second and third derivatives (Frobenius-type norms) sampled on a grid over the square.
std::pair<double, double> sampled_derivative_bounds(const SmoothFunction& g, const Square& r) {
    const double h = 1e-3 * std::max(r.side, 1e-6);
    double d2 = 0.0, d3 = 0.0;
    constexpr int n = 9;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Point2 z{r.x0 + r.side * i / (n - 1), r.y0 + r.side * j / (n - 1)};
            auto f = [&](double dx, double dy) { return g.value(z + Point2{dx * h, dy * h}); };
            const double fxx = (f(1, 0) - 2 * f(0, 0) + f(-1, 0)) / (h * h);
            const double fyy = (f(0, 1) - 2 * f(0, 0) + f(0, -1)) / (h * h);
            const double fxy = (f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1)) / (4 * h * h);
            d2 = std::max(d2, std::sqrt(fxx * fxx + 2 * fxy * fxy + fyy * fyy));
            const double fxxx = (f(2, 0) - 2 * f(1, 0) + 2 * f(-1, 0) - f(-2, 0)) / (2 * h * h * h);
            const double fyyy = (f(0, 2) - 2 * f(0, 1) + 2 * f(0, -1) - f(0, -2)) / (2 * h * h * h);
            const double fxxy = ((f(1, 1) - 2 * f(0, 1) + f(-1, 1)) - (f(1, -1) - 2 * f(0, -1) + f(-1, -1))) /
                                (2 * h * h * h);
            const double fxyy = ((f(1, 1) - 2 * f(1, 0) + f(1, -1)) - (f(-1, 1) - 2 * f(-1, 0) + f(-1, -1))) /
                                (2 * h * h * h);
            d3 = std::max(d3, std::sqrt(fxxx * fxxx + 3 * fxxy * fxxy + 3 * fxyy * fxyy + fyyy * fyyy));
        }
    }
    return {d2, d3};
}

Point2 ipow(Point2 z, int k) {
    Point2 out{1.0, 0.0};
    for (int i = 0; i < k; ++i) out *= z;
    return out;
}

} // namespace

Point2 SmoothFunction::grad(Point2 z) const {
    if (gradient) return gradient(z);
    const double h = 1e-6 * std::max(1.0, std::abs(z));
    return {(value(z + Point2{h, 0}) - value(z - Point2{h, 0})) / (2 * h),
            (value(z + Point2{0, h}) - value(z - Point2{0, h})) / (2 * h)};
}

double SmoothFunction::lap(Point2 z) const {
    if (laplacian) return laplacian(z);
    const double h = 1e-4 * std::max(1.0, std::abs(z));
    return (value(z + Point2{h, 0}) + value(z - Point2{h, 0}) + value(z + Point2{0, h}) + value(z - Point2{0, h}) -
            4 * value(z)) /
           (h * h);
}

SmoothFunction constant_function(double c) {
    SmoothFunction g;
    std::ostringstream name;
    name << c;
    g.name = name.str();
    g.value = [c](Point2) { return c; };
    g.gradient = [](Point2) { return Point2{0, 0}; };
    g.laplacian = [](Point2) { return 0.0; };
    g.d2_bound = 0.0;
    g.d3_bound = 0.0;
    return g;
}

SmoothFunction re_power(int k) {
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "power must be non-negative");
    SmoothFunction g;
    g.name = "re(z^" + std::to_string(k) + ")";
    g.value = [k](Point2 z) { return ipow(z, k).real(); };
    g.gradient = [k](Point2 z) { return k == 0 ? Point2{0, 0} : std::conj(static_cast<double>(k) * ipow(z, k - 1)); };
    g.laplacian = [](Point2) { return 0.0; };
    return g;
}

SmoothFunction im_power(int k) {
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "power must be non-negative");
    SmoothFunction g;
    g.name = "im(z^" + std::to_string(k) + ")";
    g.value = [k](Point2 z) { return ipow(z, k).imag(); };
    g.gradient = [k](Point2 z) {
        if (k == 0) return Point2{0, 0};
        const Point2 w = static_cast<double>(k) * ipow(z, k - 1);
        return Point2{w.imag(), w.real()};
    };
    g.laplacian = [](Point2) { return 0.0; };
    return g;
}

SmoothFunction abs_squared() {
    SmoothFunction g;
    g.name = "abs(z)^2";
    g.value = [](Point2 z) { return std::norm(z); };
    g.gradient = [](Point2 z) { return 2.0 * z; };
    g.laplacian = [](Point2) { return 4.0; };
    g.d2_bound = 2.0 * std::sqrt(2.0);
    g.d3_bound = 0.0;
    return g;
}

double integrate_rectangle(const std::function<double(Point2)>& f, double x0, double y0, double x1, double y1,
                           int panels) {
    const double hx = (x1 - x0) / panels;
    const double hy = (y1 - y0) / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        for (int j = 0; j < panels; ++j) {
            const double cx = x0 + (i + 0.5) * hx;
            const double cy = y0 + (j + 0.5) * hy;
            double s = 0.0;
            for (std::size_t a = 0; a < kGaussNodes.size(); ++a) {
                for (std::size_t b = 0; b < kGaussNodes.size(); ++b) {
                    s += kGaussWeights[a] * kGaussWeights[b] *
                         f({cx + 0.5 * hx * kGaussNodes[a], cy + 0.5 * hy * kGaussNodes[b]});
                }
            }
            total += s * 0.25 * hx * hy;
        }
    }
    return total;
}

double integrate_lattice(const QuadLattice& q, const std::function<double(Point2)>& f) {
    double total = 0.0;
    for (Index fi = 0; fi < q.face_count(); ++fi) {
        const auto z = q.corners(fi);
        // Split along a diagonal that stays inside (faces are counterclockwise).
        const bool split02 = orient(z[0], z[1], z[2]) > 0.0 && orient(z[0], z[2], z[3]) > 0.0;
        if (split02) {
            total += integrate_triangle(f, z[0], z[1], z[2]) + integrate_triangle(f, z[0], z[2], z[3]);
        } else {
            total += integrate_triangle(f, z[1], z[2], z[3]) + integrate_triangle(f, z[1], z[3], z[0]);
        }
    }
    return total;
}

double continuum_energy(const QuadLattice& q, const SmoothFunction& g) {
    return integrate_lattice(q, [&](Point2 z) { return std::norm(g.grad(z)); });
}

ApproximationReport approximation_check(const LatticeSequence& seq, double sample_step, double zero_tol) {
    ApproximationReport rep;
    if (seq.lattices.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two lattices");
    if (sample_step <= 0.0) {
        double diam = 0.0;
        for (const Point2& a : seq.domain_boundary.points) {
            for (const Point2& b : seq.domain_boundary.points) diam = std::max(diam, std::abs(a - b));
        }
        sample_step = 1e-3 * std::max(diam, 1e-12);
    }
    for (const QuadLattice& q : seq.lattices) {
        ApproximationRow row;
        row.max_edge = q.max_edge();
        row.hausdorff = hausdorff_distance(q.boundary_polyline(), seq.domain_boundary, sample_step);
        rep.rows.push_back(row);
    }
    const auto& first = rep.rows.front();
    const auto& last = rep.rows.back();
    rep.mesh_shrinks = last.max_edge <= 0.5 * first.max_edge;
    rep.boundary_converges = last.hausdorff <= zero_tol || last.hausdorff <= 0.5 * first.hausdorff;
    rep.pass = rep.mesh_shrinks && rep.boundary_converges;
    return rep;
}

LaplacianSquareResult laplacian_square_test(const QuadLattice& q, const SmoothFunction& g, const Square& r) {
    if (!(r.side > q.max_edge())) {
        throw Error(ErrorCode::SquareTooSmall,
                    "side " + std::to_string(r.side) + " does not exceed M(Q) = " + std::to_string(q.max_edge()));
    }
    const std::array<Point2, 4> corners{Point2{r.x0, r.y0}, Point2{r.x0 + r.side, r.y0},
                                        Point2{r.x0 + r.side, r.y0 + r.side}, Point2{r.x0, r.y0 + r.side}};
    const Polyline outline = q.boundary_polyline();
    for (const Point2& c : corners) {
        if (!point_in_polygon(c, outline.points)) throw Error(ErrorCode::SquareNotInterior, "square leaves the lattice");
    }
    for (std::size_t i = 0; i < outline.segment_count(); ++i) {
        for (int k = 0; k < 4; ++k) {
            if (segments_intersect(outline.segment_start(i), outline.segment_end(i), corners[k], corners[(k + 1) % 4])) {
                throw Error(ErrorCode::SquareNotInterior, "square touches the lattice boundary");
            }
        }
    }
    const ScalarField u = restrict_smooth(g.value, q);
    const ScalarField lap = kernels::laplacian_field(q, u);
    LaplacianSquareResult res;
    for (Index v = 0; v < q.vertex_count(); ++v) {
        const Point2 z = q.position(v);
        if (q.color(v) != Color::Black) continue;
        if (z.real() < r.x0 || z.real() > r.x0 + r.side || z.imag() < r.y0 || z.imag() > r.y0 + r.side) continue;
        res.discrete_sum += lap[v];
        ++res.black_vertices;
    }
    res.continuous_integral =
        integrate_rectangle([&](Point2 z) { return g.lap(z); }, r.x0, r.y0, r.x0 + r.side, r.y0 + r.side);
    res.error = std::abs(res.discrete_sum - res.continuous_integral);
    double d2 = 0.0, d3 = 0.0;
    if (g.d2_bound && g.d3_bound) {
        d2 = *g.d2_bound;
        d3 = *g.d3_bound;
    } else {
        std::tie(d2, d3) = sampled_derivative_bounds(g, r);
    }
    res.bound_shape = q.max_edge() * r.side * d2 + r.side * r.side * r.side * d3;
    res.ratio = res.bound_shape > 0.0 ? res.error / res.bound_shape : 0.0;
    return res;
}

std::vector<EnergyRow> energy_convergence_test(const LatticeSequence& seq, const SmoothFunction& g,
                                               double exact_energy) {
    std::vector<EnergyRow> rows;
    for (const QuadLattice& q : seq.lattices) {
        EnergyRow row;
        row.max_edge = q.max_edge();
        row.energy = dirichlet_energy(q, restrict_smooth(g.value, q)).definition_form;
        row.relative_error = exact_energy != 0.0 ? std::abs(row.energy - exact_energy) / std::abs(exact_energy)
                                                 : std::abs(row.energy);
        rows.push_back(row);
    }
    return rows;
}

ConvergenceTable convergence_experiment(const LatticeSequence& seq, const SmoothFunction& g,
                                        const SolverConfig& config) {
    ConvergenceTable table;
    table.metadata["g"] = g.name;
    std::ostringstream tol;
    tol << config.tolerance;
    table.metadata["solver_tolerance"] = tol.str();
    table.metadata["preconditioner"] = config.preconditioner == Preconditioner::Diagonal ? "diagonal" : "none";
    const double step = [&] {
        double diam = 0.0;
        for (const Point2& a : seq.domain_boundary.points) {
            for (const Point2& b : seq.domain_boundary.points) diam = std::max(diam, std::abs(a - b));
        }
        return 1e-3 * std::max(diam, 1e-12);
    }();
    for (std::size_t n = 0; n < seq.lattices.size(); ++n) {
        const QuadLattice& q = seq.lattices[n];
        const Solution sol = solve(q, g.value, config);
        ConvergenceRow row;
        row.n = n;
        row.vertices = q.vertex_count();
        row.max_edge = q.max_edge();
        row.hausdorff = seq.domain_boundary.points.empty()
                            ? 0.0
                            : hausdorff_distance(q.boundary_polyline(), seq.domain_boundary, step);
        for (Index v = 0; v < q.vertex_count(); ++v) {
            row.sup_error = std::max(row.sup_error, std::abs(sol.field[v] - g.value(q.position(v))));
        }
        const double exact = continuum_energy(q, g);
        row.energy_error = exact != 0.0 ? std::abs(sol.energy - exact) / exact : std::abs(sol.energy);
        row.solver_residual = sol.final_residual;
        row.converged = sol.converged;
        const GeometryReport geo = geometry_report(q);
        row.k_round = geo.k_round;
        row.skopenkov_C = geo.skopenkov_C;
        table.rows.push_back(row);
    }
    return table;
}

EquiProbe equicontinuity_probe(const QuadLattice& q, std::span<const double> u, Index z, Index w, double R) {
    if (u.size() != q.vertex_count()) throw Error(ErrorCode::SizeMismatch, "field size does not match lattice");
    if (z >= q.vertex_count() || w >= q.vertex_count() || q.color(z) != Color::Black ||
        q.color(w) != Color::Black) {
        throw Error(ErrorCode::InvalidArgument, "probe points must be black vertices");
    }
    const Point2 pz = q.position(z), pw = q.position(w);
    const double scale = std::max(std::abs(pz - pw), q.max_edge());
    if (!(R > scale)) {
        throw Error(ErrorCode::BallOutOfRange,
                    "radius " + std::to_string(R) + " must exceed max(|z-w|, M) = " + std::to_string(scale));
    }
    EquiProbe probe;
    probe.z = z;
    probe.w = w;
    probe.R = R;
    probe.lhs = std::abs(u[z] - u[w]);
    const Point2 centre = 0.5 * (pz + pw);

    const auto grad = kernels::gradient_field(q, u);
    for (Index f = 0; f < q.face_count(); ++f) {
        const auto c = q.corners(f);
        double x0 = c[0].real(), x1 = x0, y0 = c[0].imag(), y1 = y0;
        for (const Point2& p : c) {
            x0 = std::min(x0, p.real());
            x1 = std::max(x1, p.real());
            y0 = std::min(y0, p.imag());
            y1 = std::max(y1, p.imag());
        }
        if (x0 > centre.real() + R || x1 < centre.real() - R || y0 > centre.imag() + R || y1 < centre.imag() - R) {
            continue;
        }
        if (!polygon_meets_disk(c, centre, R)) continue;
        probe.ball_energy += std::norm(grad[f]) * std::abs(signed_area(c));
        ++probe.ball_faces;
    }
    probe.energy_term = std::sqrt(probe.ball_energy) / std::sqrt(std::log(R / scale));

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Index v : q.boundary()) {
        if (std::abs(q.position(v) - centre) <= R) {
            lo = std::min(lo, u[v]);
            hi = std::max(hi, u[v]);
        }
    }
    probe.boundary_term = hi >= lo ? hi - lo : 0.0;
    const double excess = probe.lhs - probe.boundary_term;
    if (excess > 0.0 && probe.energy_term > 0.0) probe.implied_CK = excess / probe.energy_term;
    return probe;
}

Index nearest_vertex(const QuadLattice& q, Point2 p, std::optional<Color> colour) {
    Index best = q.vertex_count();
    double dist = std::numeric_limits<double>::infinity();
    for (Index v = 0; v < q.vertex_count(); ++v) {
        if (colour && q.color(v) != *colour) continue;
        const double d = std::abs(q.position(v) - p);
        if (d < dist) {
            dist = d;
            best = v;
        }
    }
    if (best == q.vertex_count()) throw Error(ErrorCode::InvalidArgument, "no vertex of the requested colour");
    return best;
}

} // namespace dca
