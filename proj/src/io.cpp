#include "dca/io.hpp"

#include "dca/error.hpp"
#include "dca/generators.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace dca {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

double as_number(const json& j, const std::string& where) {
    if (!j.is_number()) parse_fail(where + ": expected a number");
    return j.get<double>();
}

Index as_index(const json& j, const std::string& where) {
    if (!j.is_number_integer()) parse_fail(where + ": expected a non-negative integer");
    if (j.is_number_unsigned()) return j.get<Index>();
    const auto v = j.get<std::int64_t>();
    if (v < 0) parse_fail(where + ": negative index");
    return static_cast<Index>(v);
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        parse_fail(e.what());
    }
}

std::string metadata_value(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

} // namespace

MeshDocument mesh_document(const QuadLattice& q) {
    MeshDocument doc;
    doc.vertices = q.positions();
    doc.faces = q.faces();
    return doc;
}

MeshDocument parse_mesh(std::string_view text) {
    const json j = parse_json(text);
    if (!j.is_object()) parse_fail("mesh: top level must be an object");
    MeshDocument doc;

    if (!j.contains("format_version")) parse_fail("mesh: missing format_version");
    doc.format_version = metadata_value(j["format_version"]);
    if (doc.format_version != mesh_format_version)
        parse_fail("format_version: unsupported version '" + doc.format_version + "'");

    if (!j.contains("vertices") || !j["vertices"].is_array()) parse_fail("mesh: missing vertices array");
    const json& vs = j["vertices"];
    doc.vertices.reserve(vs.size());
    for (std::size_t k = 0; k < vs.size(); ++k) {
        const std::string where = "vertices[" + std::to_string(k) + "]";
        if (!vs[k].is_array() || vs[k].size() != 2) parse_fail(where + ": expected [x, y]");
        doc.vertices.emplace_back(as_number(vs[k][0], where), as_number(vs[k][1], where));
    }

    if (!j.contains("faces") || !j["faces"].is_array()) parse_fail("mesh: missing faces array");
    const json& fs = j["faces"];
    doc.faces.reserve(fs.size());
    for (std::size_t k = 0; k < fs.size(); ++k) {
        const std::string where = "faces[" + std::to_string(k) + "]";
        if (!fs[k].is_array() || fs[k].size() != 4) parse_fail(where + ": expected four vertex indices");
        Face f{};
        for (std::size_t s = 0; s < 4; ++s) f[s] = as_index(fs[k][s], where);
        doc.faces.push_back(f);
    }

    if (j.contains("boundary_values")) {
        const json& bv = j["boundary_values"];
        if (!bv.is_object()) parse_fail("boundary_values: expected an object");
        for (const auto& [key, value] : bv.items()) {
            const std::string where = "boundary_values[" + key + "]";
            Index v = 0;
            const auto [end, ec] = std::from_chars(key.data(), key.data() + key.size(), v);
            if (ec != std::errc() || end != key.data() + key.size()) parse_fail(where + ": key is not a vertex index");
            doc.boundary_values[v] = as_number(value, where);
        }
    }

    if (j.contains("fields")) {
        const json& fl = j["fields"];
        if (!fl.is_object()) parse_fail("fields: expected an object");
        for (const auto& [name, values] : fl.items()) {
            const std::string where = "fields[" + name + "]";
            if (!values.is_array()) parse_fail(where + ": expected an array");
            if (values.size() != doc.vertices.size()) parse_fail(where + ": needs one value per vertex");
            std::vector<double> out;
            out.reserve(values.size());
            for (std::size_t k = 0; k < values.size(); ++k)
                out.push_back(as_number(values[k], where + "[" + std::to_string(k) + "]"));
            doc.fields[name] = std::move(out);
        }
    }

    if (j.contains("metadata")) {
        const json& md = j["metadata"];
        if (!md.is_object()) parse_fail("metadata: expected an object");
        for (const auto& [key, value] : md.items()) doc.metadata[key] = metadata_value(value);
    }
    return doc;
}

std::string mesh_to_json(const MeshDocument& doc) {
    json j = json::object();
    j["format_version"] = doc.format_version;
    json vs = json::array();
    for (const Point2& p : doc.vertices) vs.push_back({p.real(), p.imag()});
    j["vertices"] = std::move(vs);
    json fs = json::array();
    for (const Face& f : doc.faces) fs.push_back({f[0], f[1], f[2], f[3]});
    j["faces"] = std::move(fs);
    if (!doc.boundary_values.empty()) {
        json bv = json::object();
        for (const auto& [v, value] : doc.boundary_values) bv[std::to_string(v)] = value;
        j["boundary_values"] = std::move(bv);
    }
    if (!doc.fields.empty()) j["fields"] = doc.fields;
    if (!doc.metadata.empty()) j["metadata"] = doc.metadata;
    return j.dump(1) + "\n";
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void save_mesh(const MeshDocument& doc, const std::filesystem::path& path) { write_text(path, mesh_to_json(doc)); }

LoadedMesh load_mesh_text(std::string_view text) {
    MeshDocument doc = parse_mesh(text);
    QuadLattice q = build_lattice(doc.vertices, doc.faces);
    return {std::move(q), std::move(doc)};
}

LoadedMesh load_mesh(const std::filesystem::path& path) { return load_mesh_text(read_text(path)); }

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string format_double(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

std::string to_csv(const CsvTable& table) {
    std::string out;
    for (const auto& [key, value] : table.metadata) out += "# " + key + "=" + value + "\n";
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k) out += ',';
            out += cells[k];
        }
        out += '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) line(row);
    return out;
}

CsvTable to_csv_table(const ConvergenceTable& table) {
    CsvTable csv;
    csv.header = {"n", "M", "hausdorff", "sup_error", "energy_error", "residual", "k_round", "skopenkov_C",
                  "vertices", "converged"};
    csv.metadata = table.metadata;
    for (const ConvergenceRow& r : table.rows) {
        csv.rows.push_back({std::to_string(r.n), format_double(r.max_edge), format_double(r.hausdorff),
                            format_double(r.sup_error), format_double(r.energy_error),
                            format_double(r.solver_residual), format_double(r.k_round),
                            format_double(r.skopenkov_C), std::to_string(r.vertices), r.converged ? "1" : "0"});
    }
    return csv;
}

void write_table(const CsvTable& table, const std::filesystem::path& path) { write_text(path, to_csv(table)); }

void write_table(const ConvergenceTable& table, const std::filesystem::path& path) {
    write_table(to_csv_table(table), path);
}

// ---------------------------------------------------------------------------------------------
// SVG

std::string ramp_color(int step) {
    // viridis anchors
    static constexpr double anchors[5][3] = {
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    step = std::clamp(step, 0, 255);
    const double t = step / 255.0 * 4.0;
    const int k = std::min(3, static_cast<int>(t));
    const double s = t - k;
    char buf[8];
    int rgb[3];
    for (int c = 0; c < 3; ++c)
        rgb[c] = static_cast<int>(std::lround(anchors[k][c] + s * (anchors[k + 1][c] - anchors[k][c])));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

namespace {

std::string fmt3(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    std::string s = buf;
    if (s == "-0.000") s = "0.000";
    return s;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    [[nodiscard]] int step(double v) const {
        if (!std::isfinite(v) || !(hi > lo)) return 128;
        return static_cast<int>(std::lround((v - lo) / (hi - lo) * 255.0));
    }
};

double metric_value(const FaceMetrics& m, FaceMetric which) {
    switch (which) {
    case FaceMetric::KFace: return m.k_face;
    case FaceMetric::OrthogonalityDefect: return m.orthogonality_defect;
    case FaceMetric::Area: return m.area;
    case FaceMetric::MaxEdgeRatio: return m.max_edge_ratio;
    }
    return 0.0;
}

} // namespace

std::string render_svg(const QuadLattice& q, const SvgOptions& options) {
    if (options.color_by == ColorBy::Field && options.field.size() != q.vertex_count())
        throw Error(ErrorCode::SizeMismatch, "field needs one value per vertex");

    double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
    for (const Point2& p : q.positions()) {
        x0 = std::min(x0, p.real());
        x1 = std::max(x1, p.real());
        y0 = std::min(y0, p.imag());
        y1 = std::max(y1, p.imag());
    }
    const double span = std::max({x1 - x0, y1 - y0, 1e-300});
    const double margin = 10.0;
    const double scale = (options.width - 2 * margin) / span;
    const double height = (y1 - y0) * scale + 2 * margin;
    auto px = [&](Point2 p) { return fmt3(margin + (p.real() - x0) * scale); };
    auto py = [&](Point2 p) { return fmt3(height - margin - (p.imag() - y0) * scale); };

    std::vector<std::string> face_fill(q.face_count(), "none");
    std::vector<std::string> vertex_ink(q.vertex_count(), "#000000");
    if (options.color_by == ColorBy::Field) {
        Range r;
        for (double v : options.field) r.add(v);
        for (Index v = 0; v < q.vertex_count(); ++v) vertex_ink[v] = ramp_color(r.step(options.field[v]));
        for (Index f = 0; f < q.face_count(); ++f) {
            double mean = 0.0;
            for (Index v : q.face(f)) mean += options.field[v];
            face_fill[f] = ramp_color(r.step(mean / 4.0));
        }
    } else if (options.color_by == ColorBy::FaceMetric) {
        std::vector<double> values(q.face_count());
        Range r;
        for (Index f = 0; f < q.face_count(); ++f) {
            values[f] = metric_value(face_metrics(q, f), options.metric);
            r.add(values[f]);
        }
        for (Index f = 0; f < q.face_count(); ++f) face_fill[f] = ramp_color(r.step(values[f]));
    }

    // dot radius from the shortest incident edge, in pixels
    std::vector<double> radius(q.vertex_count(), 4.0);
    for (const Face& f : q.faces()) {
        for (int s = 0; s < 4; ++s) {
            const double len = std::abs(q.position(f[s]) - q.position(f[(s + 1) % 4])) * scale;
            for (Index v : {f[s], f[(s + 1) % 4]}) radius[v] = std::min(radius[v], 0.2 * len);
        }
    }

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt3(options.width) + "\" height=\"" +
           fmt3(height) + "\" viewBox=\"0 0 " + fmt3(options.width) + " " + fmt3(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    out += "<g stroke=\"#333333\" stroke-width=\"0.5\">\n";
    for (Index f = 0; f < q.face_count(); ++f) {
        out += "<polygon points=\"";
        const Face& face = q.face(f);
        for (int s = 0; s < 4; ++s) {
            if (s) out += ' ';
            out += px(q.position(face[s])) + "," + py(q.position(face[s]));
        }
        out += "\" fill=\"" + face_fill[f] + "\"/>\n";
    }
    out += "</g>\n";
    if (options.show_diagonals) {
        out += "<g stroke-width=\"0.4\">\n";
        for (Index f = 0; f < q.face_count(); ++f) {
            const Face& face = q.face(f);
            const int b = q.black_slot(f);
            for (int s = 0; s < 2; ++s) {
                const Point2 a = q.position(face[s]);
                const Point2 c = q.position(face[s + 2]);
                out += "<line x1=\"" + px(a) + "\" y1=\"" + py(a) + "\" x2=\"" + px(c) + "\" y2=\"" + py(c) + "\"";
                out += s == b ? " stroke=\"#000000\"/>\n" : " stroke=\"#888888\" stroke-dasharray=\"2,2\"/>\n";
            }
        }
        out += "</g>\n";
    }
    out += "<g>\n";
    for (Index v = 0; v < q.vertex_count(); ++v) {
        const Point2 p = q.position(v);
        out += "<circle cx=\"" + px(p) + "\" cy=\"" + py(p) + "\" r=\"" + fmt3(radius[v]) + "\"";
        if (q.color(v) == Color::Black)
            out += " fill=\"" + vertex_ink[v] + "\"/>\n";
        else
            out += " fill=\"#ffffff\" stroke=\"" + vertex_ink[v] + "\" stroke-width=\"" +
                   fmt3(std::min(1.0, 0.4 * radius[v])) + "\"/>\n";
    }
    out += "</g>\n</svg>\n";
    return out;
}

void render_svg(const QuadLattice& q, const SvgOptions& options, const std::filesystem::path& path) {
    write_text(path, render_svg(q, options));
}

// ---------------------------------------------------------------------------------------------
// recipes

std::uint64_t default_seed() {
    if (const char* s = std::getenv("DCA_SEED")) {
        std::uint64_t v = 0;
        const std::string_view text(s);
        const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec == std::errc() && end == text.data() + text.size()) return v;
    }
    return 1;
}

SmoothFunction smooth_function(const Expression& e) {
    SmoothFunction g;
    g.name = e.source();
    g.value = [e](Point2 z) { return e.real(z); };
    return g;
}

RunConfig parse_run_config(std::string_view json_text) {
    const json j = parse_json(json_text);
    if (!j.is_object()) parse_fail("recipe: top level must be an object");
    RunConfig c;
    c.seed = default_seed();
    try {
        c.generator = j.value("generator", c.generator);
        c.boundary = j.value("boundary", c.boundary);
        if (c.generator == "square") {
            const json& s = j.at("square");
            if (s.contains("domain")) {
                const auto d = s.at("domain").get<std::vector<double>>();
                if (d.size() != 4) parse_fail("square.domain: expected [x0, y0, x1, y1]");
                std::copy(d.begin(), d.end(), c.domain.begin());
            }
            c.steps = s.at("steps").get<std::vector<double>>();
            if (c.steps.empty()) parse_fail("square.steps: empty");
        } else if (c.generator == "annuli") {
            const json& a = j.at("annuli");
            if (a.contains("base_size")) c.base_size = a.at("base_size").get<double>();
            for (const json& step : a.at("sweep")) {
                const auto pair = step.get<std::vector<int>>();
                if (pair.size() != 2) parse_fail("annuli.sweep: expected [levels, refinement] pairs");
                c.annuli_sweep.emplace_back(pair[0], pair[1]);
            }
            if (c.annuli_sweep.empty()) parse_fail("annuli.sweep: empty");
        } else if (c.generator == "strip") {
            const json& s = j.at("strip");
            c.strip_n = s.value("n", c.strip_n);
            c.strip_eps = s.at("eps").get<std::vector<double>>();
            if (c.strip_eps.empty()) parse_fail("strip.eps: empty");
        } else {
            parse_fail("generator: unknown '" + c.generator + "'");
        }
        if (j.contains("solver")) {
            const json& s = j.at("solver");
            c.solver.tolerance = s.value("tolerance", c.solver.tolerance);
            c.solver.max_iterations = s.value("max_iterations", c.solver.max_iterations);
            c.solver.parallel = s.value("parallel", c.solver.parallel);
            const std::string pre = s.value("preconditioner", std::string("diagonal"));
            if (pre == "diagonal") c.solver.preconditioner = Preconditioner::Diagonal;
            else if (pre == "none") c.solver.preconditioner = Preconditioner::None;
            else parse_fail("solver.preconditioner: expected none or diagonal");
            if (!(c.solver.tolerance > 0.0)) parse_fail("solver.tolerance: must be positive");
        }
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        c.output = j.value("output", std::string());
    } catch (const json::exception& e) {
        parse_fail(std::string("recipe: ") + e.what());
    }
    (void)Expression::parse(c.boundary);
    c.canonical = j.dump();
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(read_text(path)); }

LatticeSequence build_sequence(const RunConfig& config) {
    LatticeSequence seq;
    if (config.generator == "square") {
        const auto [x0, y0, x1, y1] = config.domain;
        for (double h : config.steps) seq.lattices.push_back(gen_square(x0, y0, x1, y1, h));
        seq.domain_boundary.points = {Point2{x0, y0}, Point2{x1, y0}, Point2{x1, y1}, Point2{x0, y1}};
        seq.domain_boundary.closed = true;
    } else if (config.generator == "annuli") {
        double extent = 0.0;
        for (const auto& [levels, p] : config.annuli_sweep) {
            const double base = config.base_size.value_or(1.0 / (3.0 * p));
            seq.lattices.push_back(gen_adaptive_annuli(levels, base, p));
            extent = std::max(extent, 3.0 * p * base);
        }
        seq.domain_boundary.points = {Point2{-extent, -extent}, Point2{extent, -extent}, Point2{extent, extent},
                                      Point2{-extent, extent}};
        seq.domain_boundary.closed = true;
    } else if (config.generator == "strip") {
        for (double eps : config.strip_eps) seq.lattices.push_back(gen_degenerate_strip(eps, config.strip_n));
        seq.domain_boundary = seq.lattices.front().boundary_polyline();
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown generator '" + config.generator + "'");
    }
    return seq;
}

ConvergenceTable run_recipe(const RunConfig& config) {
    const LatticeSequence seq = build_sequence(config);
    ConvergenceTable table = convergence_experiment(seq, smooth_function(Expression::parse(config.boundary)),
                                                    config.solver);
    table.metadata["generator"] = config.generator;
    table.metadata["seed"] = std::to_string(config.seed);
    table.metadata["config_hash"] = hex64(fnv1a(config.canonical));
    return table;
}

} // namespace dca
