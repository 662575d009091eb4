#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "modelspace/io.hpp"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace modelspace;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;  // stdout
    std::string all;  // stdout followed by stderr
};

std::string capture(const std::string& cmd, int& code)
{
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int status = pclose(pipe);
    code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

// Runs the CLI with the given arguments (and optional environment prefix).
Run cli(const std::string& args, const std::string& env = "")
{
    const std::string base = env + " \"" MODELSPACE_CLI_PATH "\" " + args;
    Run r;
    int code_all = -1;
    r.out = capture(base + " 2>/dev/null", r.code);
    r.all = capture(base + " 2>&1", code_all);
    CHECK(code_all == r.code);
    return r;
}

std::string scene(const std::string& name) { return "\"" MODELSPACE_SCENES_DIR "/" + name + "\""; }

std::string write_temp(const std::string& name, const std::string& content)
{
    const fs::path dir = fs::temp_directory_path() / "modelspace_cli_test";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << content;
    return "\"" + p.string() + "\"";
}

bool contains(const std::string& s, const std::string& what) { return s.find(what) != std::string::npos; }

int count_lines(const std::string& s)
{
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("distance and line type of two elliptic points")
{
    const Run r = cli("distance --space Ell2 --x \"[1,0,0]\" --y \"[0,1,0]\"");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "distance: 1.5707963267948966"));
    CHECK(contains(r.out, "line: elliptic"));
}

TEST_CASE("distance from a scene and JSON output")
{
    const Run r = cli("distance --space Hyp2 --scene " + scene("hyp_points.json") + " --emit json");
    REQUIRE(r.code == 0);
    const io::Json j = io::parse_json(r.out);
    CHECK(j.at("distance").get<double>() == doctest::Approx(std::atanh(0.5)).epsilon(1e-14));
    CHECK(j.at("line") == "hyperbolic");
}

TEST_CASE("classify-line covers the three line types")
{
    CHECK(contains(cli("classify-line --space Hyp2 --x \"[0,0,1]\" --y \"[0.5,0,1]\"").out, "line: hyperbolic"));
    CHECK(contains(cli("classify-line --space Hyp2 --x \"[1,0,1]\" --y \"[1,1,1]\"").out, "line: parabolic"));
    CHECK(contains(cli("classify-line --space Hyp2 --x \"[1,0,0]\" --y \"[0,1,0]\"").out, "line: elliptic"));
    CHECK(contains(cli("classify-line --space dS2 --x \"[1,0,0]\" --y \"[0,0,1]\"").out, "line: hyperbolic"));
}

TEST_CASE("dualize: ball of radius 2 has the ball of radius 1/2 as dual")
{
    const Run r = cli("dualize --flavor euclidean --body " + scene("ball_r2.json"));
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "support ≡ 0.5"));
    CHECK(contains(r.out, "dual: ball of radius 0.5"));
    const Run j = cli("dualize --flavor euclidean --body " + scene("ball_r2.json") + " --emit json --grid 16");
    REQUIRE(j.code == 0);
    const io::Json doc = io::parse_json(j.out);
    CHECK(doc.at("dual").at("radius").get<double>() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(doc.at("support_min").get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(doc.at("support_max").get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(doc.at("points").size() == 256);
}

TEST_CASE("dualize: Minkowski hyperboloid and polytope")
{
    const Run h = cli("dualize --flavor minkowski --body " + scene("hyperboloid_r2.json") + " --grid 16");
    CHECK(h.code == 0);
    CHECK(contains(h.out, "dual: future hyperboloid of radius 0.5"));
    CHECK(contains(h.out, "support ≡ -0.5"));
    const Run c = cli("dualize --body " + scene("cube.json") + " --grid 16");
    CHECK(c.code == 0);
    CHECK(contains(c.out, "dual: polytope with 6 vertices"));
    // Flavor mismatch is a validation error.
    CHECK(cli("dualize --flavor minkowski --body " + scene("ball_r2.json")).code == 2);
}

TEST_CASE("malformed JSON reports line and column with exit code 2")
{
    const std::string path = write_temp("malformed.json", "{\n  \"space\": \"Hyp2\",\n  \"entities\": [,]\n}\n");
    const Run r = cli("distance --space Hyp2 --scene " + path);
    CHECK(r.code == 2);
    CHECK(contains(r.all, "malformed.json:3:16: malformed JSON"));
    CHECK(r.out.empty());
}

TEST_CASE("scene validation errors exit with code 2")
{
    CHECK(contains(cli("distance --space Hyp2 --scene " + scene("unknown_tag.json")).all, "unknown tag \"polygon\""));
    CHECK(cli("distance --space Hyp2 --scene " + scene("unknown_tag.json")).code == 2);
    const std::string outside = write_temp(
        "outside.json", R"({"space": "Hyp2", "entities": [{"tag": "point", "coords": [2, 0, 1]}]})");
    const Run o = cli("distance --space Hyp2 --scene " + outside);
    CHECK(o.code == 2);
    CHECK(contains(o.all, "point is not in Hyp2"));
    const std::string typo = write_temp(
        "typo.json", R"({"tag": "body", "flavor": "euclidean", "kind": "ball", "radus": 2})");
    CHECK(contains(cli("dualize --body " + typo).all, "unknown field \"radus\""));
    CHECK(cli("distance --space Hyp2 --x \"[1,0,0]\" --y \"[0,0,1]\"").code == 2);
    CHECK(cli("distance --space Foo2 --x \"[1,0,0]\" --y \"[0,0,1]\"").code == 2);
    CHECK(cli("distance --space Ell2 --x \"[1,0\" --y \"[0,0,1]\"").code == 2);
    CHECK(cli("no-such-command").code == 2);
    CHECK(cli("distance --emit xml --space Ell2 --x \"[1,0,0]\" --y \"[0,1,0]\"").code == 2);
}

TEST_CASE("tolerance breach exits with code 3 and names the worst offender")
{
    const Run r = cli("check-surface --patch " + scene("unit_sphere.json") + " --grid 16 --tol 1e-12");
    CHECK(r.code == 3);
    CHECK(contains(r.all, "tolerance exceeded: gauss residual"));
    CHECK(contains(r.all, "at (u, v) = ("));
    // The summary is still printed before the failure.
    CHECK(contains(r.out, "gauss residual:"));
}

TEST_CASE("output is byte-identical for a fixed seed")
{
    for (const std::string& args : std::vector<std::string>{
             "transition --space Hyp3 --family point --seed 7", "check-connection --space coMin3 --seed 3 --emit json",
          "pogorelov --space AdS3 --samples 4 --seed 5 --emit csv",
          "check-surface --space coEuc3 --patch " + scene("co_graph.json") + " --grid 16 --emit csv"}) {
        const Run a = cli(args), b = cli(args);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        CHECK(!a.out.empty());
    }
    CHECK(cli("transition --space Hyp3 --family point --seed 7 --emit json").out !=
          cli("transition --space Hyp3 --family point --seed 8 --emit json").out);
}

TEST_CASE("MODELSPACE_GRID overrides the default grid; --grid overrides both")
{
    CHECK(contains(cli("check-surface --patch " + scene("unit_sphere.json"), "MODELSPACE_GRID=16").out,
                   "grid: 16 x 16"));
    CHECK(contains(cli("check-surface --patch " + scene("unit_sphere.json") + " --grid 20", "MODELSPACE_GRID=16").out,
                   "grid: 20 x 20"));
    CHECK(cli("check-surface --patch " + scene("unit_sphere.json"), "MODELSPACE_GRID=abc").code == 2);
}

TEST_CASE("check-surface CSV has the documented columns and one row per node")
{
    const Run r = cli("check-surface --patch " + scene("unit_sphere.json") + " --grid 16 --emit csv");
    REQUIRE(r.code == 0);
    const std::string header = r.out.substr(0, r.out.find('\n'));
    CHECK(header == "i,j,u,v,I11,I12,I22,B11,B12,B21,B22,K_I,det_B,gauss_residual,codazzi_residual");
    CHECK(count_lines(r.out) == 1 + 16 * 16);
    const Run help = cli("check-surface --help");
    CHECK(help.code == 0);
    CHECK(contains(help.out, "gauss_residual"));
    CHECK(contains(help.out, "MODELSPACE_GRID"));
}

TEST_CASE("surface commands on the sample patches")
{
    const Run s = cli("check-surface --patch " + scene("unit_sphere.json") + " --emit json");
    REQUIRE(s.code == 0);
    const io::Json j = io::parse_json(s.out);
    CHECK(j.at("K_I_min").get<double>() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(j.at("det_B_max").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(j.at("gauss_residual").get<double>() < 1e-4);

    CHECK(cli("check-surface --patch " + scene("hyp_graph.json")).code == 0);
    CHECK(cli("check-surface --space coMin3 --patch " + scene("co_graph.json")).code == 0);
    // A patch of Hyp3 is not a patch of Euc3.
    CHECK(cli("check-surface --space Euc3 --patch " + scene("hyp_graph.json")).code == 2);

    const Run d = cli("dual-surface --patch " + scene("hyp_graph.json"));
    CHECK(d.code == 0);
    CHECK(contains(d.out, "space: dS3"));
    const Run dc = cli("dual-surface --space coEuc3 --patch " + scene("co_graph.json") + " --emit json");
    REQUIRE(dc.code == 0);
    const io::Json dj = io::parse_json(dc.out);
    CHECK(dj.at("space") == "Euc3");
    CHECK(dj.at("involution_gap").get<double>() < 1e-8);
    CHECK(dj.at("third_form_curvature_gap").get<double>() < 1e-6);

    for (const char* src : {"Ell3", "dS3", "Hyp3", "AdS3"}) {
        const Run t = cli(std::string("transition-surface --space ") + src + " --patch " + scene("co_graph.json") +
                          " --emit json");
        REQUIRE(t.code == 0);
        CHECK(io::parse_json(t.out).at("limit_gap").get<double>() < 1e-5);
    }
}

TEST_CASE("transition, check-connection and pogorelov")
{
    CHECK(cli("transition --space Ell3 --family plane --samples 5").code == 0);
    const Run p = cli("transition --space Hyp3 --family point --scene " + scene("killing_hyp3.json"));
    CHECK(p.code == 0);
    CHECK(contains(p.out, "path 1 limit: [ 1 0 0 1 ; 0 1 0 0 ; 0 0 1 0 ; 0 0 0 1 ]"));
    const std::string bad = write_temp(
        "bad_path.json", R"({"entities": [{"tag": "path", "generator": [[0,1,0,0],[1,0,0,0],[0,0,0,0],[0,0,0,0]]}]})");
    CHECK(cli("transition --space Hyp3 --family point --scene " + bad).code == 2);

    const Run c = cli("check-connection --space coEuc3 --emit json");
    REQUIRE(c.code == 0);
    const io::Json cj = io::parse_json(c.out);
    for (const char* k : {"symmetry", "metric", "volume", "degenerate_field", "plane"})
        CHECK(cj.at(k).get<double>() < 1e-6);
    CHECK(cli("check-connection --space coEuc3 --scene " + scene("fields_coeuc3.json")).code == 0);
    CHECK(cli("check-connection --space dS3 --samples 5").code == 0);

    CHECK(cli("pogorelov --space Hyp3 --samples 5").code == 0);
    CHECK(cli("pogorelov --space Hyp3 --scene " + scene("killing_hyp3.json")).code == 0);
    CHECK(cli("pogorelov --space Ell3").code == 2);
}

TEST_CASE("acceptance subcommand prints the table")
{
    const Run r = cli("acceptance --only 3");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "PASS  3"));
    CHECK(contains(r.out, "0 of 1 criteria failed"));
    CHECK(r.out == cli("acceptance --only 3").out);
    CHECK(cli("acceptance --only 12").code == 2);
}
