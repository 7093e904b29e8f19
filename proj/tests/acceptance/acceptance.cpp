// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include "support/oracles.hpp"

#include "dca/error.hpp"
#include "dca/generators.hpp"
#include "dca/harness.hpp"
#include "dca/lattice.hpp"
#include "dca/operators.hpp"
#include "dca/packing.hpp"
#include "dca/solver.hpp"
#include "dca/surface.hpp"
#include "dca/trees.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace dca;

namespace tol {
// criterion 1
constexpr double energy_forms = 1e-12;
constexpr double laplacian_forms = 1e-5;
constexpr double green = 1e-10;
constexpr double fd_step = 1e-6;
// criterion 2
constexpr double linear_sup = 1e-8;
constexpr double linear_solver = 1e-13;
// criterion 3
constexpr double lap_order = 0.8;
constexpr double c_spread = 2.0;
// criterion 4
constexpr double energy_final = 0.02;
// criterion 5
constexpr double conv_ratio = 0.25;
constexpr double conv_final = 1e-2;
constexpr double k_cap = 9.8;
constexpr double conv_solver = 1e-12;
// criterion 6
constexpr double maxp_solver = 1e-12;
constexpr double maxp_slack = 10.0 * maxp_solver;
// criterion 7
constexpr int chi2_samples = 100000;
constexpr double chi2_confidence = 0.99;
// criterion 8
constexpr double angle_residual = 1e-8;
constexpr double kite_defect = 1e-9;
constexpr double tiling = 1e-9;
constexpr double k_spread = 3.0;
// criterion 9
constexpr double strip_k = 100.0;
constexpr double strip_c_spread = 2.0;
// exactness floor: sums and errors below this are rounding
constexpr double rounding = 1e-11;
} // namespace tol

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int number, double runtime_limit, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const Error& e) {
        o.pass = false;
        o.detail << " [exception: " << e.what() << "]";
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > runtime_limit) {
        o.pass = false;
        o.detail << " [runtime " << seconds << " s exceeds " << runtime_limit << " s]";
    }
    if (!o.pass) ++failures;
    std::printf("criterion %d: %s (%.2f s)%s\n", number, o.pass ? "PASS" : "FAIL", seconds, o.detail.str().c_str());
    std::fflush(stdout);
}

double sup_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double norm2(const std::vector<double>& v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); }

/// -dE/du(z) by central differences of the oracle energy over the faces at z.
double local_fd_laplacian(const QuadLattice& q, std::vector<double> u, Index z, double step) {
    auto local = [&] {
        double e = 0.0;
        for (const Incidence& in : q.incident(z)) {
            const Face& v = q.face(in.face);
            const auto c = q.corners(in.face);
            e += std::norm(oracle::gradient(c, {u[v[0]], u[v[1]], u[v[2]], u[v[3]]})) * oracle::area(c);
        }
        return e;
    };
    const double u0 = u[z];
    u[z] = u0 + step;
    const double ep = local();
    u[z] = u0 - step;
    const double em = local();
    return -(ep - em) / (2.0 * step);
}

LatticeSequence grids(std::initializer_list<int> divisions) {
    LatticeSequence s;
    for (int n : divisions) s.lattices.push_back(gen_square(0, 0, 1, 1, 1.0 / n));
    s.domain_boundary = {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true};
    return s;
}

std::uint64_t blue_seed(std::uint64_t seed) { return seed ^ 0x9e3779b97f4a7c15ULL; }

CirclePacking welded_packing(int n, std::uint64_t seed) {
    const WeldedSurface s = weld_surface(remy_tree(n, seed), remy_tree(n, blue_seed(seed)));
    return circle_pack(open_surface(s));
}

// ---------------------------------------------------------------------------------------------

void exact_identities(Outcome& o) {
    double worst_energy = 0.0, worst_forms = 0.0, worst_fd = 0.0, worst_green = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const QuadLattice q = oracle::random_lattice(seed);
        const auto u = oracle::random_field(q.vertex_count(), 1000 + seed);
        const auto v = oracle::random_field(q.vertex_count(), 2000 + seed);

        const EnergyForms e = dirichlet_energy(q, u);
        worst_energy = std::max(worst_energy, std::abs(e.definition_form - e.orthogonal_form) / e.definition_form);

        for (Index z = 0; z < q.vertex_count(); ++z) {
            const LaplacianForms l = discrete_laplacian(q, u, z);
            const double fd = local_fd_laplacian(q, u, z, tol::fd_step);
            const double scale = std::max({std::abs(l.ratio_form), std::abs(fd), 1.0});
            worst_forms = std::max(worst_forms, std::abs(l.ratio_form - l.gradient_form) / scale);
            worst_fd = std::max(worst_fd, std::abs(l.ratio_form - fd) / scale);
        }

        const auto lu = laplacian_field(q, u);
        const auto lv = laplacian_field(q, v);
        double s = 0.0;
        for (Index z = 0; z < q.vertex_count(); ++z) s += u[z] * lv[z] - v[z] * lu[z];
        worst_green = std::max(worst_green, std::abs(s) / (norm2(u) * norm2(v)));
    }
    o.detail << " energy forms " << worst_energy << ", ratio vs gradient form " << worst_forms << ", vs finite differences "
             << worst_fd << ", Green " << worst_green;
    o.require(worst_energy <= tol::energy_forms, "energy forms");
    o.require(worst_forms <= tol::laplacian_forms, "Laplacian forms");
    o.require(worst_fd <= tol::laplacian_forms, "finite differences");
    o.require(worst_green <= tol::green, "Green's identity");
}

void linear_exactness(Outcome& o) {
    std::vector<std::pair<std::string, QuadLattice>> lattices;
    lattices.emplace_back("square 1/32", gen_square(0, 0, 1, 1, 1.0 / 32));
    lattices.emplace_back("square offset", gen_square(-2, 1, 1, 2.5, 0.25));
    for (int levels = 1; levels <= 4; ++levels)
        for (int p : {1, 2}) lattices.emplace_back("annuli " + std::to_string(levels) + "/" + std::to_string(p),
                                                   gen_adaptive_annuli(levels, 1.0 / (3 * p), p));
    for (double eps : {0.5, 1e-1, 1e-2, 1e-3, 1e-4})
        lattices.emplace_back("strip " + std::to_string(eps), gen_degenerate_strip(eps, 12));
    lattices.emplace_back("flower 7", pack_to_quads(circle_pack(flower(7))));
    for (int n : {3, 6, 10, 15}) {
        QuadOptions opts;
        opts.drop_boundary_triangles = true;
        lattices.emplace_back("pack n=" + std::to_string(n), pack_to_quads(welded_packing(n, 100 + n), opts));
    }

    const std::vector<std::pair<std::string, RealFunction>> functions = {
        {"Re z", [](Point2 z) { return z.real(); }},
        {"Im z", [](Point2 z) { return z.imag(); }},
        {"constant", [](Point2) { return 0.7; }},
        {"affine", [](Point2 z) { return 2.0 * z.real() - 3.0 * z.imag() + 1.0; }},
    };
    SolverConfig cfg;
    cfg.tolerance = tol::linear_solver;
    double worst = 0.0;
    std::string where;
    for (const auto& [name, q] : lattices) {
        for (const auto& [fname, g] : functions) {
            const Solution s = solve(q, g, cfg);
            double err = 0.0;
            for (Index v = 0; v < q.vertex_count(); ++v) err = std::max(err, std::abs(s.field[v] - g(q.position(v))));
            o.require(s.converged, name + " " + fname + " converged");
            if (err > worst) {
                worst = err;
                where = name + ", " + fname;
            }
        }
    }
    o.detail << " " << lattices.size() << " lattices x " << functions.size() << " functions, worst sup error " << worst
             << " (" << where << ")";
    o.require(worst <= tol::linear_sup, "sup error");
}

void laplacian_approximation(Outcome& o) {
    const LatticeSequence seq = grids({8, 16, 32, 64});
    const Square r{0.25, 0.25, 0.5};
    std::vector<double> h, err_abs, sum_re;
    for (const QuadLattice& q : seq.lattices) {
        h.push_back(q.max_edge());
        err_abs.push_back(laplacian_square_test(q, abs_squared(), r).error);
        sum_re.push_back(std::abs(laplacian_square_test(q, re_power(2), r).discrete_sum));
    }
    o.detail << " |z|^2 errors";
    double min_order = 1e300;
    for (std::size_t k = 0; k < h.size(); ++k) o.detail << " " << err_abs[k];
    for (std::size_t k = 1; k < h.size(); ++k)
        min_order = std::min(min_order, std::log(err_abs[k - 1] / err_abs[k]) / std::log(h[k - 1] / h[k]));
    o.detail << ", min observed order " << min_order;
    o.require(min_order >= tol::lap_order, "order for |z|^2");

    // For Re z^2 the implied constant C_h = |sum| / h must be stable; sums at rounding level mean the
    // function is discrete harmonic there and the bound holds for every C.
    const double largest = sup_abs(sum_re);
    if (largest <= tol::rounding) {
        o.detail << "; Re z^2 sums at rounding level (max " << largest << "), bound holds for every C";
    } else {
        std::vector<double> c;
        for (std::size_t k = 0; k < h.size(); ++k) c.push_back(sum_re[k] / h[k]);
        const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
        o.detail << "; Re z^2 constants " << *lo << " .. " << *hi;
        o.require(*hi <= tol::c_spread * *lo, "C stable for Re z^2");
    }
}

void energy_convergence(Outcome& o) {
    const auto rows = energy_convergence_test(grids({8, 16, 32, 64}), re_power(2), 8.0 / 3.0);
    o.detail << " relative errors";
    for (const EnergyRow& r : rows) o.detail << " " << r.relative_error;
    for (std::size_t k = 1; k < rows.size(); ++k)
        o.require(rows[k].relative_error < rows[k - 1].relative_error, "monotone decrease");
    o.require(rows.back().relative_error < tol::energy_final, "final error below 2%");
}

void report_table(Outcome& o, const ConvergenceTable& t) {
    for (const ConvergenceRow& r : t.rows)
        o.detail << "\n    M=" << r.max_edge << " sup_error=" << r.sup_error << " K=" << r.k_round
                 << " C=" << r.skopenkov_C << " vertices=" << r.vertices;
}

void main_convergence(Outcome& o) {
    SolverConfig cfg;
    cfg.tolerance = tol::conv_solver;

    // (a) square grids
    const ConvergenceTable a = convergence_experiment(grids({8, 16, 32, 64}), re_power(3), cfg);
    o.detail << " (a) square grids:";
    report_table(o, a);
    double largest = 0.0;
    for (const ConvergenceRow& r : a.rows) largest = std::max(largest, r.sup_error);
    if (largest <= tol::rounding) {
        o.detail << "\n    Re z^3 is reproduced to rounding at every step (discrete harmonic on square grids)";
    } else {
        o.require(a.rows.back().sup_error <= tol::conv_ratio * a.rows.front().sup_error, "(a) final/initial");
        o.require(a.rows.back().sup_error <= tol::conv_final, "(a) final error");
        for (std::size_t k = 1; k < a.rows.size(); ++k)
            o.require(a.rows[k].sup_error < a.rows[k - 1].sup_error, "(a) decreasing");
    }

    // (b) adaptive annuli over [-1,1]^2
    LatticeSequence seq;
    for (auto [levels, p] : {std::pair{2, 1}, {3, 2}, {4, 4}, {5, 8}})
        seq.lattices.push_back(gen_adaptive_annuli(levels, 1.0 / (3 * p), p));
    seq.domain_boundary = {{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}, true};
    const ConvergenceTable b = convergence_experiment(seq, re_power(3), cfg);
    o.detail << "\n    (b) adaptive annuli:";
    report_table(o, b);
    o.require(b.rows.back().sup_error <= tol::conv_ratio * b.rows.front().sup_error, "(b) final/initial");
    o.require(b.rows.back().sup_error <= tol::conv_final, "(b) final error");
    for (std::size_t k = 1; k < b.rows.size(); ++k) {
        o.require(b.rows[k].sup_error < b.rows[k - 1].sup_error, "(b) decreasing");
        o.require(b.rows[k].skopenkov_C > b.rows[k - 1].skopenkov_C, "(b) skopenkov_C increasing");
    }
    for (const ConvergenceRow& r : b.rows) o.require(r.k_round <= tol::k_cap, "(b) k_round bounded");
}

void maximum_principle(Outcome& o) {
    SolverConfig cfg;
    cfg.tolerance = tol::maxp_solver;
    int bad = 0;
    double worst_excess = -1e300;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const QuadLattice q = oracle::random_lattice(seed);
        const auto values = oracle::random_field(q.boundary().size(), 5000 + seed);
        const Solution s = solve(DirichletProblem{q, values}, cfg);
        const MaxPrincipleReport r = check_maximum_principle(q, s.field, tol::maxp_slack);
        worst_excess = std::max({worst_excess, r.max_all - r.max_boundary_all, r.min_boundary_all - r.min_all});
        if (!r.pass || !s.converged) ++bad;
    }
    o.detail << " 100 solves, " << bad << " failures, worst excess over boundary extremes " << worst_excess;
    o.require(bad == 0, "no failures");
}

void random_surfaces(Outcome& o) {
    for (int n = 1; n <= 4; ++n) {
        std::map<std::string, long> counts;
        for (const auto& s : oracle::shapes(n)) counts[s] = 0;
        for (int k = 0; k < tol::chi2_samples; ++k) {
            const auto it = counts.find(shape_key(remy_tree(n, 7919u * n + 1000003u * k)));
            if (it == counts.end()) {
                o.require(false, "unknown shape");
                return;
            }
            ++it->second;
        }
        const double expected = static_cast<double>(tol::chi2_samples) / oracle::catalan(n);
        double chi2 = 0.0;
        for (const auto& [shape, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
        const long df = oracle::catalan(n) - 1;
        const double critical =
            df > 0 ? boost::math::quantile(boost::math::chi_squared(static_cast<double>(df)), tol::chi2_confidence) : 0.0;
        o.detail << " n=" << n << " chi2 " << chi2 << "/" << critical << ";";
        o.require(counts.size() == static_cast<std::size_t>(oracle::catalan(n)), "all shapes present");
        o.require(chi2 <= critical + 1e-12, "chi2 n=" + std::to_string(n));
    }

    std::mt19937_64 rng(2024);
    for (int sample = 0; sample < 50; ++sample) {
        const int n = 1 + static_cast<int>(rng() % 30);
        const std::uint64_t seed = rng();
        const BinaryTree red = remy_tree(n, seed), blue = remy_tree(n, blue_seed(seed));
        const WeldedSurface s = weld_surface(red, blue);
        const std::string tag = " (n=" + std::to_string(n) + ")";
        o.require(s.euler_characteristic() == 2, "Euler characteristic" + tag);
        o.require(s.is_simple(), "simple" + tag);
        const auto deg = s.degrees();
        for (Index v = 0; v < s.vertex_count(); ++v) {
            const bool ok = s.tags[v] == Tag::Green ? deg[v] == 6 : (deg[v] == 3 || deg[v] == 9);
            if (!ok) {
                o.require(false, "degree spectrum" + tag);
                break;
            }
        }
        const DrivingFunction d = driving_function(s);
        o.require(d.X == oracle::contour(red), "X is the red contour" + tag);
        o.require(d.Y == oracle::contour(blue), "Y is the blue contour" + tag);
    }
    o.detail << " 50 welded surfaces checked";
}

void packing_suite(Outcome& o) {
    std::vector<double> k;
    double worst_angle = 0.0, worst_defect = 0.0, worst_tiling = 0.0;
    for (int n = 2; n <= 20; n += 2) {
        const std::string tag = " (n=" + std::to_string(n) + ")";
        CirclePacking p;
        try {
            p = welded_packing(n, static_cast<std::uint64_t>(n));
        } catch (const Error& e) {
            o.require(false, std::string("packing") + tag + ": " + e.what());
            continue;
        }
        worst_angle = std::max(worst_angle, p.angle_residual);
        for (Index t = 0; t < p.triangulation.triangles.size(); ++t) {
            const auto& tri = p.triangulation.triangles[t];
            const Point2 a = p.centers[tri[0]], b = p.centers[tri[1]], c = p.centers[tri[2]];
            const double area = std::abs(((b - a) * std::conj(c - a)).imag()) / 2.0;
            double pieces = 0.0;
            for (const auto& kite : triangle_quads(p, t)) {
                pieces += oracle::area(kite);
                worst_defect = std::max(worst_defect, face_metrics(kite).orthogonality_defect);
            }
            worst_tiling = std::max(worst_tiling, std::abs(pieces - area) / area);
        }
        try {
            QuadOptions opts;
            opts.drop_boundary_triangles = true;
            const GeometryReport r = geometry_report(pack_to_quads(p, opts));
            worst_defect = std::max(worst_defect, r.max_orthogonality_defect);
            k.push_back(r.k_round);
        } catch (const Error& e) {
            o.require(false, std::string("lattice") + tag + ": " + e.what());
        }
    }
    o.detail << " angle residual " << worst_angle << ", kite defect " << worst_defect << ", tiling " << worst_tiling;
    o.require(worst_angle <= tol::angle_residual, "angle residual");
    o.require(worst_defect <= tol::kite_defect, "orthogonality defect");
    o.require(worst_tiling <= tol::tiling, "area tiling");
    if (!k.empty()) {
        const auto [lo, hi] = std::minmax_element(k.begin(), k.end());
        o.detail << ", k_round " << *lo << " .. " << *hi << " over " << k.size() << " samples";
        o.require(*hi <= tol::k_spread * *lo, "k_round spread");
    }
    o.require(k.size() == 10, "ten samples");
}

void counterexamples(Outcome& o) {
    const GeometryReport coarse = geometry_report(gen_degenerate_strip(1e-2, 16));
    const GeometryReport fine = geometry_report(gen_degenerate_strip(1e-3, 16));
    o.detail << " strip eps=1e-2: K " << coarse.k_round << " C " << coarse.skopenkov_C << "; eps=1e-3: K " << fine.k_round
             << " C " << fine.skopenkov_C;
    o.require(fine.k_round >= tol::strip_k, "strip k_round");
    o.require(fine.skopenkov_C <= tol::strip_c_spread * coarse.skopenkov_C &&
                  coarse.skopenkov_C <= tol::strip_c_spread * fine.skopenkov_C,
              "strip skopenkov_C within 2x");

    o.detail << "; annuli K/C:";
    double previous_c = 0.0;
    for (int levels = 2; levels <= 5; ++levels) {
        const GeometryReport r = geometry_report(gen_adaptive_annuli(levels, 1.0 / 3.0, 1));
        o.detail << " " << r.k_round << "/" << r.skopenkov_C;
        o.require(r.k_round <= tol::k_cap, "annuli k_round bounded");
        o.require(r.skopenkov_C > previous_c, "annuli skopenkov_C growing");
        previous_c = r.skopenkov_C;
    }
}

} // namespace

int main() {
    criterion(1, 1.0, exact_identities);
    criterion(2, 10.0, linear_exactness);
    criterion(3, 30.0, laplacian_approximation);
    criterion(4, 30.0, energy_convergence);
    criterion(5, 120.0, main_convergence);
    criterion(6, 600.0, maximum_principle);
    criterion(7, 60.0, random_surfaces);
    criterion(8, 120.0, packing_suite);
    criterion(9, 600.0, counterexamples);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
