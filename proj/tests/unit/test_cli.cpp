#include "dca/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

namespace {

const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() / "dca_cli_test";
    std::filesystem::create_directories(d);
    return d;
}();

std::string at(const std::string& name) { return (dir / name).string(); }

int run(const std::string& args) {
    const std::string cmd = std::string(DCA_CLI) + " " + args + " > " + at("stdout.txt") + " 2> " + at("stderr.txt");
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("generate, validate, solve") {
    CHECK(run("gen-square --x0 0 --y0 0 --x1 1 --y1 1 --step 0.125 -o " + at("sq.json")) == 0);
    CHECK(run("validate " + at("sq.json")) == 0);
    CHECK(dca::read_text(at("stdout.txt")).find("k_round 4") != std::string::npos);
    CHECK(run("solve " + at("sq.json") + " -b 're(z^2)' --tol 1e-12 -o " + at("sol.json")) == 0);
    const dca::LoadedMesh m = dca::load_mesh(at("sol.json"));
    const auto& u = m.document.fields.at("u");
    for (dca::Index v = 0; v < m.lattice.vertex_count(); ++v) {
        const auto z = m.lattice.position(v);
        CHECK(u[v] == doctest::Approx((z * z).real()).scale(1.0).epsilon(1e-9));
    }
    CHECK(run("render " + at("sol.json") + " --color-by field --field u --diagonals -o " + at("sol.svg")) == 0);
    CHECK(dca::read_text(at("sol.svg")).rfind("<svg", 0) == 0);
}

TEST_CASE("other generators") {
    CHECK(run("gen-annuli --levels 2 --base 1 -p 2 -o " + at("a.json")) == 0);
    CHECK(run("validate " + at("a.json")) == 0);
    CHECK(run("gen-strip --eps 0.01 --n 6 -o " + at("s.json")) == 0);
    CHECK(run("gen-tree --n 5 --seed 3") == 0);
    CHECK(run("gen-surface --n 5 --seed 3") == 0);
    CHECK(run("gen-pack --petals 7 -o " + at("flower.json")) == 0);
    CHECK(run("validate " + at("flower.json")) == 0);
    CHECK(run("laptest " + at("a.json") + " --g 'x*x+y*y' --square -2 -2 4") == 0);
}

TEST_CASE("exit codes") {
    dca::write_text(at("rect.json"),
                    R"({"format_version": "1", "vertices": [[0,0],[2,0],[2,1],[0,1]], "faces": [[0,1,2,3]]})");
    CHECK(run("validate " + at("rect.json")) == 1);
    CHECK(run("solve " + at("rect.json") + " -b x") == 1);
    dca::write_text(at("bad.json"), R"({"format_version": "1", "vertices": [[0,0],)");
    CHECK(run("validate " + at("bad.json")) == 2);
    CHECK(run("validate " + at("missing.json")) == 2);
    CHECK(run("solve " + at("sq.json") + " -b 're(z'") == 2);
    CHECK(run("solve " + at("sq.json")) == 2);  // no boundary values in the file
    CHECK(run("frobnicate") == 2);
    CHECK(run("gen-square --step nope") == 2);
    CHECK(run("solve " + at("sq.json") + " -b 're(z^3)' --max-iter 1 --no-precond") == 3);
}

TEST_CASE("converge writes a table") {
    dca::write_text(at("recipe.json"), R"J({"generator": "square", "boundary": "re(z^3)",
        "square": {"domain": [0, 0, 1, 1], "steps": [0.25, 0.125]}, "seed": 5})J");
    CHECK(run("converge " + at("recipe.json") + " -o " + at("table.csv")) == 0);
    const std::string csv = dca::read_text(at("table.csv"));
    CHECK(csv.find("# seed=5") != std::string::npos);
    CHECK(csv.find("n,M,hausdorff") != std::string::npos);
}
