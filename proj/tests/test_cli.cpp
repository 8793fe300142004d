#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "loopgeo/fixtures.hpp"
#include "loopgeo/sweep.hpp"

using nlohmann::json;
using namespace loopgeo;

namespace {

const std::string kCli = LOOPGEO_CLI_PATH;
const std::string kData = LOOPGEO_DATA_DIR;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args) {
    std::string out_file = "cli_stdout.txt", err_file = "cli_stderr.txt";
    std::string cmd = kCli + " " + args + " >" + out_file + " 2>" + err_file;
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    auto slurp = [](const std::string& path) {
        std::ifstream in(path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

std::string sphere3() { return kData + "/sphere_subdiv3.off"; }

}  // namespace

TEST_CASE("bounds subcommand reproduces the calculus examples") {
    RunResult r = run_cli("bounds --n 2 --v 1 --D 1 --c 2 --c1 1 --c2 1");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["r_value"].get<double>() == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
    CHECK(j["R_value"].get<double>() == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
    CHECK(j["width"]["zero"] == false);
    CHECK(j["inputs"]["n"] == 2);
}

TEST_CASE("config file supplies defaults, flags win") {
    {
        std::ofstream cfg("cli_cfg.json");
        cfg << R"({"mesh": ")" << sphere3() << R"(", "seed": 9})" << "\n";
    }
    RunResult r = run_cli("surface-stats --config cli_cfg.json");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["faces"] == 1280);
    CHECK(j["total_area"].get<double>() == doctest::Approx(4.0 * M_PI).epsilon(0.05));
}

TEST_CASE("error exit codes") {
    CHECK(run_cli("surface-stats").exit_code == 2);  // no mesh anywhere
    RunResult missing = run_cli("surface-stats --mesh /no/such/mesh.off");
    CHECK(missing.exit_code == 3);
    CHECK(missing.err.find("/no/such/mesh.off") != std::string::npos);
    CHECK(run_cli("bounds --config /no/such/config.json").exit_code == 2);
    CHECK(run_cli("bounds --n 1").exit_code == 2);  // params fail validation
    CHECK(run_cli("definitely-not-a-subcommand").exit_code == 2);
    // numerical failure: no level set exists past the diameter
    CHECK(run_cli("homotopy-contract --mesh " + sphere3() + " --radius 5.0").exit_code == 4);
}

TEST_CASE("flat torus loads with its length sidecar") {
    RunResult r = run_cli("surface-stats --mesh " + kData + "/flat_torus_32.off --sidecar " +
                          kData + "/flat_torus_32.lengths.json");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["faces"] == 2048);
    // intrinsic metric of the unit square torus
    CHECK(j["total_area"].get<double>() == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("cover subcommand validates its output") {
    RunResult r = run_cli("cover --mesh " + sphere3() + " --eps 1.2");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["valid"] == true);
    CHECK(j["center_count"].get<int>() > 4);
}

TEST_CASE("geodesics subcommand finds the long way around") {
    RunResult r = run_cli("geodesics --mesh " + sphere3() + " --p 0 --q-dist 1.0 -m 2");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    double d = j["distance"].get<double>();
    REQUIRE(j["lengths"].size() == 2);
    CHECK(j["lengths"][0].get<double>() == doctest::Approx(d).epsilon(1e-3));
    CHECK(j["lengths"][1].get<double>() == doctest::Approx(2 * M_PI - d).epsilon(0.03));
}

TEST_CASE("compress subcommand round-trips a family file") {
    // serialize a 5-member constant family of the same minimizing geodesic
    Surface s = make_icosphere(3);
    SurfacePoint p = s.vertex_point(0), q = s.vertex_point(40);
    Curve g0 = Curve::from_polyline(s, s.geodesic(p, q).points, false);
    json members = json::array();
    for (int i = 0; i < 5; ++i) {
        json pts = json::array();
        for (const SurfacePoint& sp : g0.samples(64))
            pts.push_back({sp.face, sp.bary[0], sp.bary[1], sp.bary[2]});
        members.push_back(std::move(pts));
    }
    {
        std::ofstream f("cli_family.json");
        f << json{{"degree", 0}, {"members", members}} << "\n";
    }
    RunResult r = run_cli("compress --mesh " + sphere3() + " --family cli_family.json --delta 1.0");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["members"] == 5);
    CHECK(j["max_length"].get<double>() <= j["length_bound"].get<double>());
    CHECK(j["W_emp"].get<double>() == 0.0);
}

TEST_CASE("verify-all is deterministic and reports per-check results") {
    std::string args = "verify-all --mesh " + sphere3() + " --seed 7 --out cli_verify1.json";
    RunResult r1 = run_cli(args);
    REQUIRE(r1.exit_code == 0);
    RunResult r2 = run_cli("verify-all --mesh " + sphere3() + " --seed 7 --out cli_verify2.json");
    REQUIRE(r2.exit_code == 0);

    auto slurp = [](const char* path) {
        std::ifstream in(path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    std::string a = slurp("cli_verify1.json"), b = slurp("cli_verify2.json");
    REQUIRE(!a.empty());
    CHECK(a == b);

    json j = json::parse(a);
    CHECK(j["all_pass"] == true);
    CHECK(j["checks"].size() >= 6);
    for (const auto& c : j["checks"]) CHECK(c["pass"] == true);
}
