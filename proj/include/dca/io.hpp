#pragma once

#include "dca/expr.hpp"
#include "dca/harness.hpp"
#include "dca/lattice.hpp"
#include "dca/solver.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dca {

inline constexpr std::string_view mesh_format_version = "1";

/// The on-disk mesh: one JSON object.
///
///   { "format_version": "1",
///     "vertices": [[x, y], ...],
///     "faces": [[a, b, c, d], ...],
///     "boundary_values": {"12": 0.5, ...},        optional
///     "fields": {"u": [...], ...},                optional, one value per vertex
///     "metadata": {"generator": "square", ...} }  optional
struct MeshDocument {
    std::string format_version{mesh_format_version};
    std::vector<Point2> vertices;
    std::vector<Face> faces;
    std::map<Index, double> boundary_values;
    std::map<std::string, std::vector<double>> fields;
    /// Scalars only; numbers and booleans are kept in their JSON spelling.
    std::map<std::string, std::string> metadata;
};

[[nodiscard]] MeshDocument mesh_document(const QuadLattice& q);

/// Throws Error(ParseError) naming the line or the offending field.
[[nodiscard]] MeshDocument parse_mesh(std::string_view text);
[[nodiscard]] std::string mesh_to_json(const MeshDocument& doc);

/// Throws Error(IoError).
void save_mesh(const MeshDocument& doc, const std::filesystem::path& path);

struct LoadedMesh {
    QuadLattice lattice;
    MeshDocument document;
};

/// Reads and validates. Lattice validation failures propagate with their own error code
/// (DegenerateFace, NotBipartite, ...); malformed files raise ParseError, unreadable ones IoError.
[[nodiscard]] LoadedMesh load_mesh(const std::filesystem::path& path);
[[nodiscard]] LoadedMesh load_mesh_text(std::string_view text);

/// 64-bit FNV-1a.
[[nodiscard]] std::uint64_t fnv1a(std::string_view bytes);
[[nodiscard]] std::string hex64(std::uint64_t v);

/// Shortest decimal spelling that reads back to the same double.
[[nodiscard]] std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::map<std::string, std::string> metadata;
};

[[nodiscard]] std::string to_csv(const CsvTable& table);
/// Columns n,M,hausdorff,sup_error,energy_error,residual,k_round,skopenkov_C,vertices,converged.
[[nodiscard]] CsvTable to_csv_table(const ConvergenceTable& table);

/// Throws Error(IoError).
void write_text(const std::filesystem::path& path, std::string_view text);
[[nodiscard]] std::string read_text(const std::filesystem::path& path);
void write_table(const ConvergenceTable& table, const std::filesystem::path& path);
void write_table(const CsvTable& table, const std::filesystem::path& path);

enum class ColorBy { None, Field, FaceMetric };
enum class FaceMetric { KFace, OrthogonalityDefect, Area, MaxEdgeRatio };

struct SvgOptions {
    ColorBy color_by = ColorBy::None;
    /// Per-vertex values, needed for ColorBy::Field.
    std::vector<double> field;
    FaceMetric metric = FaceMetric::KFace;
    bool show_diagonals = false;
    double width = 800.0;
};

/// Index 0..255 of the fixed colour ramp, as "#rrggbb".
[[nodiscard]] std::string ramp_color(int step);
[[nodiscard]] std::string render_svg(const QuadLattice& q, const SvgOptions& options = {});
void render_svg(const QuadLattice& q, const SvgOptions& options, const std::filesystem::path& path);

/// Seed from the DCA_SEED environment variable, or 1.
[[nodiscard]] std::uint64_t default_seed();

/// A smooth function whose derivatives are taken by finite differences.
[[nodiscard]] SmoothFunction smooth_function(const Expression& e);

/// A convergence recipe.
///
///   { "generator": "square" | "annuli" | "strip",
///     "boundary": "re(z^3)",
///     "square": {"domain": [0, 0, 1, 1], "steps": [0.125, 0.0625]},
///     "annuli": {"base_size": 0.333, "sweep": [[2, 1], [3, 2]]},     [levels, refinement] pairs
///     "strip":  {"n": 8, "eps": [0.1, 0.01]},
///     "solver": {"tolerance": 1e-10, "max_iterations": 0, "preconditioner": "diagonal", "parallel": true},
///     "seed": 7,
///     "output": "table.csv" }
///
/// For annuli the base size may be omitted; each step then uses 1/(3p) so the region is [-1,1]^2.
struct RunConfig {
    std::string generator = "square";
    std::string boundary = "re(z^3)";
    std::array<double, 4> domain{0.0, 0.0, 1.0, 1.0};
    std::vector<double> steps;
    std::optional<double> base_size;
    std::vector<std::pair<int, int>> annuli_sweep;
    int strip_n = 8;
    std::vector<double> strip_eps;
    SolverConfig solver;
    std::uint64_t seed = 0;
    std::string output;
    /// Canonical JSON of the parsed recipe, hashed into table metadata.
    std::string canonical;
};

/// Throws Error(ParseError).
[[nodiscard]] RunConfig parse_run_config(std::string_view json_text);
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path& path);

[[nodiscard]] LatticeSequence build_sequence(const RunConfig& config);
/// Builds the sequence, runs the experiment and fills seed, config hash and tolerances into the metadata.
[[nodiscard]] ConvergenceTable run_recipe(const RunConfig& config);

} // namespace dca
