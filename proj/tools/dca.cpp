// dca: command line front end for the lattice library.
//
// Exit codes: 0 success, 1 validation failure, 2 parse or I/O error, 3 solver did not converge.

#include "dca/error.hpp"
#include "dca/expr.hpp"
#include "dca/generators.hpp"
#include "dca/harness.hpp"
#include "dca/io.hpp"
#include "dca/lattice.hpp"
#include "dca/packing.hpp"
#include "dca/solver.hpp"
#include "dca/surface.hpp"
#include "dca/trees.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace dca;
using nlohmann::json;

enum Exit { Ok = 0, Invalid = 1, BadInput = 2, NotConverged = 3 };

int exit_code(ErrorCode c) {
    switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::IoError: return BadInput;
    case ErrorCode::NoConvergence: return NotConverged;
    default: return Invalid;
    }
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") std::cout << text;
    else write_text(path, text);
}

std::string describe(const GeometryReport& r) {
    std::ostringstream s;
    s << "max_orthogonality_defect " << r.max_orthogonality_defect << "\n"
      << "k_round " << r.k_round << "\n"
      << "skopenkov_C " << r.skopenkov_C << "\n"
      << "max_diagonal_ratio " << r.max_diagonal_ratio << "\n"
      << "min_diagonal_angle " << r.min_diagonal_angle << "\n"
      << "max_ball_count " << r.max_ball_count << "\n";
    return s.str();
}

MeshDocument generated(const QuadLattice& q, const std::string& generator,
                       std::map<std::string, std::string> params) {
    MeshDocument doc = mesh_document(q);
    doc.metadata = std::move(params);
    doc.metadata["generator"] = generator;
    const GeometryReport r = geometry_report(q);
    doc.metadata["K"] = format_double(r.k_round);
    doc.metadata["skopenkov_C"] = format_double(r.skopenkov_C);
    doc.metadata["M"] = format_double(q.max_edge());
    return doc;
}

/// Boundary values, in q.boundary() order, from an expression, a JSON file or the mesh itself.
std::vector<double> boundary_values(const LoadedMesh& mesh, const std::string& spec) {
    const QuadLattice& q = mesh.lattice;
    std::map<Index, double> given;
    if (spec.empty()) {
        given = mesh.document.boundary_values;
    } else if (std::filesystem::is_regular_file(spec)) {
        const json j = [&] {
            try {
                return json::parse(read_text(spec));
            } catch (const json::parse_error& e) {
                throw Error(ErrorCode::ParseError, spec + ": " + e.what());
            }
        }();
        const json& values = j.contains("boundary_values") ? j["boundary_values"] : j;
        if (!values.is_object()) throw Error(ErrorCode::ParseError, spec + ": expected an object of vertex values");
        for (const auto& [key, value] : values.items()) {
            if (!value.is_number()) throw Error(ErrorCode::ParseError, spec + ": value for " + key + " is not a number");
            try {
                given[static_cast<Index>(std::stoull(key))] = value.get<double>();
            } catch (const std::logic_error&) {
                throw Error(ErrorCode::ParseError, spec + ": key '" + key + "' is not a vertex index");
            }
        }
    } else {
        const Expression e = Expression::parse(spec);
        return boundary_data(q, [&](Point2 z) { return e.real(z); });
    }
    std::vector<double> out;
    out.reserve(q.boundary().size());
    for (Index v : q.boundary()) {
        const auto it = given.find(v);
        if (it == given.end())
            throw Error(ErrorCode::ParseError, "no boundary value for vertex " + std::to_string(v));
        out.push_back(it->second);
    }
    return out;
}

std::uint64_t blue_seed(std::uint64_t seed) { return seed ^ 0x9e3779b97f4a7c15ULL; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete complex analysis on orthogonal quadrilateral lattices"};
    app.require_subcommand(1);

    std::string mesh_path, out_path, boundary_spec, recipe_path;
    double ortho_tol = default_ortho_tol;

    auto* validate = app.add_subcommand("validate", "Check a mesh and print its geometry report");
    validate->add_option("mesh", mesh_path, "Mesh JSON")->required();
    validate->add_option("--tol", ortho_tol, "Orthogonality tolerance");

    SolverConfig solver;
    bool no_precond = false, serial = false;
    auto* solve_cmd = app.add_subcommand("solve", "Solve the Dirichlet problem on a mesh");
    solve_cmd->add_option("mesh", mesh_path, "Mesh JSON")->required();
    solve_cmd->add_option("--boundary,-b", boundary_spec,
                          "Expression in x, y, z (e.g. \"re(z^3)\") or a JSON file of vertex values; "
                          "defaults to the mesh's boundary_values");
    solve_cmd->add_option("--tol", solver.tolerance, "Relative residual tolerance");
    solve_cmd->add_option("--max-iter", solver.max_iterations, "Iteration cap (0: 10 x unknowns)");
    solve_cmd->add_flag("--no-precond", no_precond, "Plain conjugate gradients");
    solve_cmd->add_flag("--serial", serial, "Use the serial reference kernels");
    solve_cmd->add_option("-o,--output", out_path, "Mesh JSON with the solution in fields.u");

    double x0 = 0, y0 = 0, x1 = 1, y1 = 1, h = 0.125;
    auto* gsq = app.add_subcommand("gen-square", "Uniform square grid");
    gsq->add_option("--x0", x0);
    gsq->add_option("--y0", y0);
    gsq->add_option("--x1", x1);
    gsq->add_option("--y1", y1);
    gsq->add_option("--step", h, "Square side");
    gsq->add_option("-o,--output", out_path);

    int levels = 3, refinement = 1;
    double base = 1.0 / 3.0;
    auto* gann = app.add_subcommand("gen-annuli", "Nested square annuli with orthogonal transitions");
    gann->add_option("--levels", levels);
    gann->add_option("--base", base, "Side of the outer squares");
    gann->add_option("--refinement,-p", refinement);
    gann->add_option("-o,--output", out_path);

    double eps = 1e-3;
    int strip_n = 8;
    auto* gstrip = app.add_subcommand("gen-strip", "Strip of thin orthogonal trapezoids");
    gstrip->add_option("--eps", eps);
    gstrip->add_option("--n", strip_n);
    gstrip->add_option("-o,--output", out_path);

    int tree_n = 5;
    std::uint64_t seed = default_seed();
    auto* gtree = app.add_subcommand("gen-tree", "Uniform binary tree (Remy)");
    gtree->add_option("--n", tree_n, "Internal nodes");
    gtree->add_option("--seed", seed, "Defaults to $DCA_SEED or 1");
    gtree->add_option("-o,--output", out_path);

    auto* gsurf = app.add_subcommand("gen-surface", "Welded random sphere triangulation");
    gsurf->add_option("--n", tree_n, "Internal nodes per tree");
    gsurf->add_option("--seed", seed, "Defaults to $DCA_SEED or 1");
    gsurf->add_option("-o,--output", out_path);

    int petals = 0;
    std::optional<Index> removed;
    double clip_radius = 0.0;
    bool keep_boundary = false;
    auto* gpack = app.add_subcommand("gen-pack", "Circle packing split into orthogonal kites");
    gpack->add_option("--n", tree_n, "Internal nodes per tree of the welded surface");
    gpack->add_option("--seed", seed, "Defaults to $DCA_SEED or 1");
    gpack->add_option("--remove", removed, "Surface vertex removed to open the sphere into a disk "
                                         "(default: a graph centre)");
    gpack->add_option("--petals", petals, "Pack a flower with this many petals instead");
    gpack->add_option("--clip", clip_radius, "Keep only kites inside this radius about the origin");
    gpack->add_flag("--keep-boundary", keep_boundary, "Keep triangles touching the boundary (flowers always do)");
    gpack->add_option("-o,--output", out_path);

    auto* conv = app.add_subcommand("converge", "Run a convergence recipe and write a CSV table");
    conv->add_option("recipe", recipe_path, "Recipe JSON")->required();
    conv->add_option("-o,--output", out_path, "CSV path (overrides the recipe)");

    std::string g_expr = "x*x + y*y";
    std::vector<double> square;
    auto* lap = app.add_subcommand("laptest", "Sum the discrete Laplacian over a square");
    lap->add_option("mesh", mesh_path, "Mesh JSON")->required();
    lap->add_option("--g", g_expr, "Smooth function");
    lap->add_option("--square", square, "x0 y0 side")->expected(3)->required();

    std::string color_by = "none", field_name = "u", metric = "k";
    bool diagonals = false;
    double width = 800.0;
    auto* render = app.add_subcommand("render", "Draw a mesh as SVG");
    render->add_option("mesh", mesh_path, "Mesh JSON")->required();
    render->add_option("--color-by", color_by)->check(CLI::IsMember({"none", "field", "metric"}));
    render->add_option("--field", field_name, "Field used by --color-by field");
    render->add_option("--metric", metric)->check(CLI::IsMember({"k", "defect", "area", "ratio"}));
    render->add_flag("--diagonals", diagonals);
    render->add_option("--width", width);
    render->add_option("-o,--output", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : BadInput;
    }

    try {
        if (*validate) {
            const LoadedMesh m = load_mesh(mesh_path);
            const GeometryReport r = geometry_report(m.lattice, ortho_tol);
            std::cout << "vertices " << m.lattice.vertex_count() << "\nfaces " << m.lattice.face_count()
                      << "\nboundary " << m.lattice.boundary().size() << "\nM " << m.lattice.max_edge() << "\n"
                      << describe(r);
            if (!r.orthogonal) {
                std::cerr << "error: NotOrthogonal: defect " << r.max_orthogonality_defect << " exceeds " << ortho_tol
                          << "\n";
                return Invalid;
            }
            return Ok;
        }
        if (*solve_cmd) {
            LoadedMesh m = load_mesh(mesh_path);
            solver.preconditioner = no_precond ? Preconditioner::None : Preconditioner::Diagonal;
            solver.parallel = !serial;
            ensure_orthogonal(m.lattice);
            const Solution s = solve(DirichletProblem{m.lattice, boundary_values(m, boundary_spec)}, solver);
            MeshDocument& doc = m.document;
            doc.fields["u"] = s.field;
            doc.metadata["solver_tolerance"] = format_double(solver.tolerance);
            doc.metadata["iterations_black"] = std::to_string(s.iterations_black);
            doc.metadata["iterations_white"] = std::to_string(s.iterations_white);
            doc.metadata["final_residual"] = format_double(s.final_residual);
            doc.metadata["energy"] = format_double(s.energy);
            if (!boundary_spec.empty()) doc.metadata["boundary"] = boundary_spec;
            if (!out_path.empty()) save_mesh(doc, out_path);
            std::cerr << "iterations " << s.iterations_black << "+" << s.iterations_white << " residual "
                      << s.final_residual << " energy " << s.energy << "\n";
            if (!s.converged) {
                std::cerr << "error: NoConvergence: residual " << s.final_residual << "\n";
                return NotConverged;
            }
            return Ok;
        }
        if (*gsq) {
            const QuadLattice q = gen_square(x0, y0, x1, y1, h);
            emit(mesh_to_json(generated(q, "square",
                                        {{"x0", format_double(x0)},
                                         {"y0", format_double(y0)},
                                         {"x1", format_double(x1)},
                                         {"y1", format_double(y1)},
                                         {"h", format_double(h)}})),
                 out_path);
            return Ok;
        }
        if (*gann) {
            const QuadLattice q = gen_adaptive_annuli(levels, base, refinement);
            emit(mesh_to_json(generated(q, "annuli",
                                        {{"levels", std::to_string(levels)},
                                         {"base", format_double(base)},
                                         {"refinement", std::to_string(refinement)}})),
                 out_path);
            return Ok;
        }
        if (*gstrip) {
            const QuadLattice q = gen_degenerate_strip(eps, strip_n);
            emit(mesh_to_json(generated(q, "strip", {{"eps", format_double(eps)}, {"n", std::to_string(strip_n)}})),
                 out_path);
            return Ok;
        }
        if (*gtree) {
            const BinaryTree t = remy_tree(tree_n, seed);
            json j;
            j["n"] = tree_n;
            j["seed"] = seed;
            j["shape"] = shape_key(t);
            j["children"] = t.children;
            j["contour"] = contour(t);
            emit(j.dump() + "\n", out_path);
            return Ok;
        }
        if (*gsurf) {
            const WeldedSurface s = weld_surface(remy_tree(tree_n, seed), remy_tree(tree_n, blue_seed(seed)));
            const DrivingFunction d = driving_function(s);
            json j;
            j["n"] = tree_n;
            j["red_seed"] = seed;
            j["blue_seed"] = blue_seed(seed);
            j["vertices"] = s.vertex_count();
            std::vector<int> tags;
            for (Tag t : s.tags) tags.push_back(static_cast<int>(t));
            j["tags"] = tags;
            j["triangles"] = s.triangles;
            j["euler_characteristic"] = s.euler_characteristic();
            j["simple"] = s.is_simple();
            j["X"] = d.X;
            j["Y"] = d.Y;
            emit(j.dump() + "\n", out_path);
            return Ok;
        }
        if (*gpack) {
            Triangulation t;
            std::map<std::string, std::string> params;
            if (petals > 0) {
                t = flower(petals);
                params["petals"] = std::to_string(petals);
            } else {
                const WeldedSurface s = weld_surface(remy_tree(tree_n, seed), remy_tree(tree_n, blue_seed(seed)));
                t = removed ? puncture(s.vertex_count(), s.triangles, *removed) : open_surface(s);
                params["n"] = std::to_string(tree_n);
                params["red_seed"] = std::to_string(seed);
                params["blue_seed"] = std::to_string(blue_seed(seed));
                if (removed) params["removed"] = std::to_string(*removed);
            }
            const CirclePacking p = circle_pack(t);
            QuadOptions opts;
            opts.drop_boundary_triangles = !keep_boundary && petals == 0;
            if (clip_radius > 0.0) {
                opts.clip = Disk{Point2{0.0, 0.0}, clip_radius};
                params["clip"] = format_double(clip_radius);
            }
            const QuadLattice q = pack_to_quads(p, opts);
            params["angle_residual"] = format_double(p.angle_residual);
            params["ring_ratio"] = format_double(ring_ratio(p));
            emit(mesh_to_json(generated(q, "pack", std::move(params))), out_path);
            return Ok;
        }
        if (*conv) {
            RunConfig c = load_run_config(recipe_path);
            if (!out_path.empty()) c.output = out_path;
            const ConvergenceTable table = run_recipe(c);
            emit(to_csv(to_csv_table(table)), c.output);
            for (const ConvergenceRow& r : table.rows)
                if (!r.converged) return NotConverged;
            return Ok;
        }
        if (*lap) {
            const LoadedMesh m = load_mesh(mesh_path);
            const SmoothFunction g = smooth_function(Expression::parse(g_expr));
            const LaplacianSquareResult r = laplacian_square_test(m.lattice, g, Square{square[0], square[1], square[2]});
            std::cout << "discrete_sum " << r.discrete_sum << "\ncontinuous_integral " << r.continuous_integral
                      << "\nerror " << r.error << "\nbound_shape " << r.bound_shape << "\nratio " << r.ratio
                      << "\nblack_vertices " << r.black_vertices << "\n";
            return Ok;
        }
        if (*render) {
            const LoadedMesh m = load_mesh(mesh_path);
            SvgOptions opts;
            opts.show_diagonals = diagonals;
            opts.width = width;
            if (color_by == "field") {
                const auto it = m.document.fields.find(field_name);
                if (it == m.document.fields.end())
                    throw Error(ErrorCode::ParseError, "mesh has no field '" + field_name + "'");
                opts.color_by = ColorBy::Field;
                opts.field = it->second;
            } else if (color_by == "metric") {
                opts.color_by = ColorBy::FaceMetric;
                opts.metric = metric == "defect"  ? FaceMetric::OrthogonalityDefect
                              : metric == "area"  ? FaceMetric::Area
                              : metric == "ratio" ? FaceMetric::MaxEdgeRatio
                                                  : FaceMetric::KFace;
            }
            emit(render_svg(m.lattice, opts), out_path);
            return Ok;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.code());
    }
    return Ok;
}
