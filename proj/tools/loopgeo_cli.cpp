// loopgeo command-line front end: loads a mesh, runs one of the pipeline
// stages, and emits a deterministic JSON report on stdout (or --out). The
// run-environment metadata block goes to stderr / a .meta.json sidecar so
// that report bytes stay reproducible.
//
// Exit codes: 0 ok, 2 config error, 3 mesh error, 4 numerical failure,
// 5 verification failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "loopgeo/bounds.hpp"
#include "loopgeo/cover.hpp"
#include "loopgeo/fixtures.hpp"
#include "loopgeo/homotopy.hpp"
#include "loopgeo/net.hpp"
#include "loopgeo/report.hpp"
#include "loopgeo/surface.hpp"
#include "loopgeo/sweep.hpp"

using namespace loopgeo;
using nlohmann::ordered_json;

namespace {

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct VerifyFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Options shared by every mesh-consuming subcommand, plus the optional
/// serialized RunConfig. Command-line flags win over config-file values.
struct RunOpts {
    std::string config_path;
    std::string mesh_path;
    std::string sidecar_path;
    std::string out_path;
    double tol_geo = 0.01;
    int steiner = 2;
    uint64_t seed = 7;

    CLI::Option* mesh_opt = nullptr;
    CLI::Option* sidecar_opt = nullptr;
    CLI::Option* out_opt = nullptr;
    CLI::Option* tol_opt = nullptr;
    CLI::Option* steiner_opt = nullptr;
    CLI::Option* seed_opt = nullptr;

    void attach(CLI::App* cmd, bool needs_mesh) {
        cmd->add_option("--config", config_path, "JSON run configuration file");
        mesh_opt = cmd->add_option("--mesh", mesh_path, "mesh file (.off or .obj)");
        if (needs_mesh) mesh_opt->required(false);  // may come from the config
        sidecar_opt =
            cmd->add_option("--sidecar", sidecar_path, "edge-length sidecar JSON (.obj/.off)");
        out_opt = cmd->add_option("--out", out_path, "report output path (default stdout)");
        tol_opt = cmd->add_option("--tol-geo", tol_geo, "geodesic tolerance");
        steiner_opt = cmd->add_option("--steiner", steiner, "Steiner points per edge");
        seed_opt = cmd->add_option("--seed", seed, "RNG seed");
    }

    /// Fill any flag the user did not pass from the config file.
    void apply_config() {
        if (config_path.empty()) return;
        std::ifstream in(config_path);
        if (!in) throw std::invalid_argument("config: cannot open " + config_path);
        ordered_json cfg;
        try {
            in >> cfg;
        } catch (const std::exception& e) {
            throw std::invalid_argument("config: " + config_path + ": " + e.what());
        }
        auto take = [&](const char* key, CLI::Option* opt, auto& slot) {
            if (cfg.contains(key) && (!opt || opt->count() == 0)) slot = cfg[key].template get<std::decay_t<decltype(slot)>>();
        };
        take("mesh", mesh_opt, mesh_path);
        take("sidecar", sidecar_opt, sidecar_path);
        take("out", out_opt, out_path);
        take("tol_geo", tol_opt, tol_geo);
        take("steiner", steiner_opt, steiner);
        take("seed", seed_opt, seed);
        if (const char* dir = std::getenv("LOOPGEO_OUT_DIR"); dir && !out_path.empty())
            out_path = (std::filesystem::path(dir) / out_path).string();
    }

    Surface load_mesh() const {
        if (mesh_path.empty()) throw std::invalid_argument("a mesh is required (--mesh or config)");
        if (!std::filesystem::exists(mesh_path))
            throw MeshError("mesh file not found: " + mesh_path);
        Surface s = [&] {
            std::string ext = std::filesystem::path(mesh_path).extension().string();
            try {
                if (ext == ".obj") return load_obj(mesh_path, tol_geo, steiner);
                return load_off(mesh_path, tol_geo, steiner);
            } catch (const std::exception& e) {
                throw MeshError("mesh " + mesh_path + ": " + e.what());
            }
        }();
        if (!sidecar_path.empty()) {
            if (!std::filesystem::exists(sidecar_path))
                throw MeshError("sidecar file not found: " + sidecar_path);
            apply_length_sidecar(s, sidecar_path);
        }
        return s;
    }

    /// Write the report body, and the metadata block next to it (or to
    /// stderr when the body goes to stdout).
    void emit(const ordered_json& body) const {
        std::string text = render_report(body);
        std::string meta = render_report(metadata_block());
        if (out_path.empty()) {
            std::cout << text;
            std::cerr << meta;
        } else {
            std::ofstream(out_path) << text;
            std::ofstream(out_path + ".meta.json") << meta;
        }
    }
};

SurfacePoint resolve_point(const Surface& s, int vertex, double dist_from, int from_vertex) {
    if (dist_from <= 0) return s.vertex_point(vertex);
    std::vector<double> fld = s.distance_field(s.vertex_point(from_vertex));
    std::vector<Curve> iso = iso_contours(s, fld, dist_from);
    if (iso.empty()) throw std::runtime_error("no level set at the requested distance");
    return iso.front().eval(0.0);
}

/// Build the shared contraction machinery the homotopy/compression
/// subcommands need. Calibration probes are seeded, so this is deterministic.
struct Pipeline {
    SurfaceInvariants inv;
    Calibration cal;
    double a;
    double eps_net;
    Cover cover;
    Net net;
    ContractionContext ctx;

    Pipeline(const Surface& s, uint64_t seed, double a_, int probes)
        : inv(s.invariants(8, 1)),
          cal(calibrate_contraction(s, probes, seed)),
          a(a_),
          eps_net(cal.r_emp / (4.0 * a_)),
          cover(build_cover(s, eps_net)),
          net(cover, 60.0, eps_net),
          ctx{&s, &net, cal, a, 0.1 * cal.r_emp, inv.diameter_est} {}
};

// ---------------------------------------------------------------------------
// subcommands

int cmd_bounds(RunOpts& run, GeometryParams& p, double c1, double c2) {
    run.apply_config();
    p.validate();
    BoundReport rep = compute_bound_report(p, c1, c2);
    run.emit(report_json(rep));
    return 0;
}

int cmd_surface_stats(RunOpts& run, int samples) {
    run.apply_config();
    Surface s = run.load_mesh();
    ordered_json j;
    j["mesh"] = run.mesh_path;
    j["vertices"] = s.vertex_count();
    j["faces"] = s.face_count();
    j["edges"] = s.edges().size();
    j["mean_edge_length"] = s.mean_edge_length();
    j["total_area"] = s.total_area();
    j["invariants"] = report_json(s.invariants(samples, run.seed));
    run.emit(j);
    return 0;
}

int cmd_cover(RunOpts& run, double eps) {
    run.apply_config();
    Surface s = run.load_mesh();
    Cover c = build_cover(s, eps);
    ordered_json j = report_json(c);
    j["valid"] = cover_is_valid(c, s.mean_edge_length());
    run.emit(j);
    return 0;
}

int cmd_net_project(RunOpts& run, double eps, double L, int count) {
    run.apply_config();
    Surface s = run.load_mesh();
    Cover cover = build_cover(s, eps);
    Net net(cover, L, eps);
    std::mt19937 rng(uint32_t(run.seed));
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < count; ++i) {
        Curve gamma = random_closed_curve(s, L, 8, rng);
        NetElement el = net.project(gamma);
        ordered_json r;
        r["curve_length"] = gamma.length();
        r["element_length"] = el.curve.length();
        r["centers"] = el.center_indices.size();
        r["sup_distance"] = sup_distance(gamma, el.curve, 128);
        rows.push_back(std::move(r));
    }
    ordered_json j;
    j["eps"] = eps;
    j["L"] = L;
    j["projections"] = std::move(rows);
    j["elements_observed"] = net.size_observed();
    j["net_size_bound"] = report_json(net_size_bound(double(cover.centers.size()), L, eps));
    run.emit(j);
    return 0;
}

int cmd_homotopy_contract(RunOpts& run, double radius, double a, int probes,
                          const std::string& csv_path) {
    run.apply_config();
    Surface s = run.load_mesh();
    Pipeline pl(s, run.seed, a, probes);
    std::vector<double> fld = s.distance_field(s.vertex_point(0));
    std::vector<Curve> iso = iso_contours(s, fld, radius);
    if (iso.empty()) throw std::runtime_error("no loop at the requested radius");
    Curve gamma = iso.front();

    Homotopy raw = contract_loop_raw(gamma, pl.cal);
    Homotopy based = contract_based_short(gamma, raw, pl.net, a, pl.cal, pl.ctx.eps_len);

    ordered_json j;
    j["loop_length"] = gamma.length();
    j["radius"] = radius;
    j["calibration"] = report_json(pl.cal);
    j["raw"] = report_json(raw);
    j["based_short"] = report_json(based);
    double W = width(based);
    j["level_bound"] = 2.0 * pl.inv.diameter_est + 5.0 * W + pl.ctx.eps_len;
    run.emit(j);
    if (!csv_path.empty()) std::ofstream(csv_path) << level_lengths_csv(based);
    return 0;
}

int cmd_geodesics(RunOpts& run, int pv, int qv, double q_dist, int m, int samples) {
    run.apply_config();
    Surface s = run.load_mesh();
    SurfacePoint p = s.vertex_point(pv);
    SurfacePoint q = resolve_point(s, qv, q_dist, pv);
    std::vector<Curve> gs = find_geodesics(s, p, q, m);
    ordered_json j;
    j["distance"] = s.distance(p, q);
    ordered_json lens = ordered_json::array(), curves = ordered_json::array();
    for (const Curve& g : gs) {
        lens.push_back(g.length());
        curves.push_back(report_json(g, samples));
    }
    j["lengths"] = std::move(lens);
    j["curves"] = std::move(curves);
    run.emit(j);
    return 0;
}

Sweepout read_family(const Surface& s, const std::string& path) {
    if (!std::filesystem::exists(path)) throw std::invalid_argument("family file not found: " + path);
    std::ifstream in(path);
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("family file: ") + e.what());
    }
    Sweepout sw;
    sw.degree = j.value("degree", 0);
    for (const auto& member : j.at("members")) {
        std::vector<SurfacePoint> pts;
        for (const auto& row : member) {
            SurfacePoint sp;
            sp.face = row.at(0).get<int>();
            sp.bary = {row.at(1).get<double>(), row.at(2).get<double>(), row.at(3).get<double>()};
            sp.canonicalize();
            pts.push_back(sp);
        }
        sw.family.push_back(Curve::through(s, pts, false));
    }
    return sw;
}

int cmd_compress(RunOpts& run, const std::string& family_path, double delta, double a,
                 int probes) {
    run.apply_config();
    Surface s = run.load_mesh();
    Sweepout sw = read_family(s, family_path);
    Pipeline pl(s, run.seed, a, probes);
    CompressedSweepout cs = compress_family(sw, pl.ctx, delta);

    ordered_json j = report_json(cs);
    double in_max = 0;
    for (const Curve& c : sw.family) in_max = std::max(in_max, c.length());
    j["input_max_length"] = in_max;
    j["length_bound"] =
        2.0 * (5.0 * cs.W_emp + 3.0 * pl.inv.diameter_est) + pl.inv.diameter_est + delta;
    ordered_json audit = ordered_json::array();
    for (const Homotopy& A : cs.audit) audit.push_back(report_json(A));
    j["audit"] = std::move(audit);
    run.emit(j);
    return 0;
}

// ---------------------------------------------------------------------------
// verify-all: seeded cross-module invariant suite; any failure exits 5.

int cmd_verify_all(RunOpts& run) {
    run.apply_config();
    Surface s = run.load_mesh();
    ordered_json checks = ordered_json::array();
    bool all = true;
    auto record = [&](const char* name, bool pass, ordered_json detail) {
        detail["name"] = name;
        detail["pass"] = pass;
        // keep name/pass first for readability
        ordered_json row;
        row["name"] = name;
        row["pass"] = pass;
        for (auto& [k, v] : detail.items())
            if (k != "name" && k != "pass") row[k] = v;
        checks.push_back(std::move(row));
        all = all && pass;
    };

    {  // bound-calculus identities
        ContractibilityParams cp = contractibility_params(2, 1, 1, 1, 1);
        double r_err = std::fabs(cp.r.to_double() - std::exp(-1.0));
        double R_err = std::fabs(cp.R.to_double() - std::exp(1.0));
        LogScalar bc = ball_count_bound(1.0, 1.0, 2);
        double bc_rel = std::fabs(bc.to_double() / (144.0 * std::exp(1.0)) - 1.0);
        LogScalar ns = net_size_bound(10.0, 0.25, 0.25);
        double log10_ns = ns.log_value() / std::log(10.0);
        bool pass = r_err < 1e-12 && R_err < 1e-12 && bc_rel < 1e-9 &&
                    std::fabs(log10_ns - 19.0) < 1e-9;
        record("bound-identities", pass,
               {{"r_err", r_err}, {"R_err", R_err}, {"ball_count_rel_err", bc_rel},
                {"net_size_log10", log10_ns}});
    }

    double scale = s.invariants(8, 1).diameter_est;
    std::mt19937 rng(uint32_t(run.seed));

    {  // metric sanity: symmetry and the triangle inequality on sampled triples
        double worst_sym = 0, worst_tri = 0;
        for (int i = 0; i < 8; ++i) {
            SurfacePoint p = random_surface_point(s, rng);
            SurfacePoint q = random_surface_point(s, rng);
            SurfacePoint z = random_surface_point(s, rng);
            double dpq = s.distance(p, q);
            worst_sym = std::max(worst_sym, std::fabs(dpq - s.distance(q, p)));
            worst_tri = std::max(worst_tri, dpq - s.distance(p, z) - s.distance(z, q));
        }
        // both are straightened-search estimates, so allow tolerance-level play
        bool pass = worst_sym <= 2.0 * s.tol_geo() * scale && worst_tri <= 2.0 * s.tol_geo() * scale;
        record("metric-sanity", pass, {{"max_asymmetry", worst_sym}, {"max_triangle_excess", worst_tri}});
    }

    Calibration cal = calibrate_contraction(s, 6, run.seed);
    {
        Calibration again = calibrate_contraction(s, 6, run.seed);
        bool pass = cal.r_emp > 0 && cal.R_emp >= 1.0 && again.r_emp == cal.r_emp &&
                    again.R_emp == cal.R_emp;
        record("calibration", pass, {{"r_emp", cal.r_emp}, {"R_emp", cal.R_emp}});
    }

    double a = 4.0, eps_net = cal.r_emp / (4.0 * a);
    Cover cover = build_cover(s, eps_net);
    {
        bool valid = cover_is_valid(cover, s.mean_edge_length());
        std::vector<NerveEdge> brute = compute_nerve(s, cover.centers, cover.eps / 2.0);
        bool same = brute.size() == cover.nerve_edges.size();
        for (size_t i = 0; same && i < brute.size(); ++i)
            same = brute[i].i == cover.nerve_edges[i].i && brute[i].j == cover.nerve_edges[i].j;
        record("cover", valid && same,
               {{"centers", cover.centers.size()}, {"valid", valid}, {"nerve_matches", same}});
    }

    Net net(cover, 60.0, eps_net);
    {  // net projection law on seeded random curves
        double L = 2.0 * scale;
        int pass_n = 0;
        double worst = 0;
        for (int i = 0; i < 5; ++i) {
            Curve gamma = random_closed_curve(s, L, 8, rng);
            NetElement el = net.project(gamma);
            double sup = sup_distance(gamma, el.curve, 128);
            worst = std::max(worst, sup);
            if (sup <= 5.0 * eps_net / 6.0 + 2.0 * s.mean_edge_length() &&
                el.curve.length() <= 3.0 * L)
                ++pass_n;
        }
        record("net-projection", pass_n == 5, {{"passed", pass_n}, {"worst_sup", worst}});
    }

    {  // contraction pipeline on a mid-size metric circle
        std::vector<double> fld = s.distance_field(s.vertex_point(0));
        std::vector<Curve> iso = iso_contours(s, fld, 0.45 * scale);
        if (iso.empty()) {
            record("contraction-pipeline", false, {{"error", "no test loop"}});
        } else {
            Curve gamma = iso.front();
            Homotopy raw = contract_loop_raw(gamma, cal);
            double eps_len = 0.1 * cal.r_emp;
            Homotopy based = contract_based_short(gamma, raw, net, a, cal, eps_len);
            double W = width(based);
            double bound = 2.0 * scale + 5.0 * W + eps_len;
            bool pass = based.is_contraction() && based.max_level_length() <= bound * 1.10;
            record("contraction-pipeline", pass,
                   {{"loop_length", gamma.length()}, {"width", W},
                    {"max_level_length", based.max_level_length()}, {"bound", bound}});
        }
    }

    {  // shortening: a minimizing geodesic is a fixed point
        SurfacePoint p = random_surface_point(s, rng);
        SurfacePoint q = random_surface_point(s, rng);
        GeodesicPath g = s.geodesic(p, q);
        Curve g0 = Curve::from_polyline(s, g.points, false);
        ShortenResult sr = birkhoff_shorten(g0);
        // shortening may still recover up to the geodesic tolerance
        bool pass = sr.converged && sr.curve.length() >= g0.length() * (1.0 - s.tol_geo()) &&
                    sr.curve.length() <= g0.length() + 1e-12;
        record("shortening-fixed-point", pass,
               {{"input_length", g0.length()}, {"output_length", sr.curve.length()}});
    }

    ordered_json j;
    j["mesh"] = run.mesh_path;
    j["seed"] = run.seed;
    j["checks"] = std::move(checks);
    j["all_pass"] = all;
    run.emit(j);
    if (!all) throw VerifyFailure("verification failed");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geodesic length bounds on triangulated surfaces"};
    app.require_subcommand(1);

    // bounds
    GeometryParams gp = GeometryParams::make(2, 1.0, 1.0, 2.0);
    double c1 = 1.0, c2 = 1.0;
    RunOpts run_bounds;
    {
        CLI::App* c = app.add_subcommand("bounds", "evaluate the bound calculus");
        run_bounds.attach(c, false);
        c->add_option("--n", gp.n, "dimension");
        c->add_option("--k", gp.k, "curvature lower bound");
        c->add_option("--v", gp.v, "volume lower bound");
        c->add_option("--D", gp.D, "diameter upper bound");
        c->add_option("--d", gp.d, "actual diameter");
        c->add_option("--c", gp.c, "contraction constant");
        c->add_option("--a", gp.a, "free parameter a");
        c->add_option("--delta", gp.delta, "length slack");
        c->add_option("--l", gp.l, "sphere dimension");
        c->add_option("--c1", c1, "contractibility constant c1");
        c->add_option("--c2", c2, "contractibility constant c2");
        c->callback([&] {
            if (CLI::App* p = app.get_subcommand("bounds"); p->count("--d") == 0) gp.d = gp.D;
            cmd_bounds(run_bounds, gp, c1, c2);
        });
    }

    RunOpts run_stats;
    int stat_samples = 16;
    {
        CLI::App* c = app.add_subcommand("surface-stats", "mesh counts and invariants");
        run_stats.attach(c, true);
        c->add_option("--samples", stat_samples, "invariant sample count");
        c->callback([&] { cmd_surface_stats(run_stats, stat_samples); });
    }

    RunOpts run_cover;
    double cover_eps = 1.0;
    {
        CLI::App* c = app.add_subcommand("cover", "greedy packing/cover and its nerve");
        run_cover.attach(c, true);
        c->add_option("--eps", cover_eps, "cover scale")->required();
        c->callback([&] { cmd_cover(run_cover, cover_eps); });
    }

    RunOpts run_net;
    double net_eps = 0.1, net_L = 6.0;
    int net_count = 5;
    {
        CLI::App* c = app.add_subcommand("net-project", "project random curves into the net");
        run_net.attach(c, true);
        c->add_option("--eps", net_eps, "net scale")->required();
        c->add_option("--len", net_L, "max curve length");
        c->add_option("--count", net_count, "number of curves");
        c->callback([&] { cmd_net_project(run_net, net_eps, net_L, net_count); });
    }

    RunOpts run_hc;
    double hc_radius = 1.0, hc_a = 4.0;
    int hc_probes = 6;
    std::string hc_csv;
    {
        CLI::App* c = app.add_subcommand("homotopy-contract",
                                         "contract a metric circle through the pipeline");
        run_hc.attach(c, true);
        c->add_option("--radius", hc_radius, "circle radius around vertex 0")->required();
        c->add_option("--a", hc_a, "closeness parameter a");
        c->add_option("--probes", hc_probes, "calibration probes");
        c->add_option("--csv", hc_csv, "level-length CSV output path");
        c->callback([&] { cmd_homotopy_contract(run_hc, hc_radius, hc_a, hc_probes, hc_csv); });
    }

    RunOpts run_geo;
    int geo_p = 0, geo_q = 1, geo_m = 1, geo_samples = 0;
    double geo_qdist = 0.0;
    {
        CLI::App* c = app.add_subcommand("geodesics", "find m geodesics between two points");
        run_geo.attach(c, true);
        c->add_option("--p", geo_p, "start vertex index");
        c->add_option("--q", geo_q, "end vertex index");
        c->add_option("--q-dist", geo_qdist, "place q at this distance from p instead");
        c->add_option("-m,--count", geo_m, "number of geodesics");
        c->add_option("--samples", geo_samples, "sample points per emitted curve");
        c->callback(
            [&] { cmd_geodesics(run_geo, geo_p, geo_q, geo_qdist, geo_m, geo_samples); });
    }

    RunOpts run_cf;
    std::string cf_family;
    double cf_delta = 1.0, cf_a = 4.0;
    int cf_probes = 6;
    {
        CLI::App* c = app.add_subcommand("compress", "compress a sweepout family");
        run_cf.attach(c, true);
        c->add_option("--family", cf_family, "family JSON file")->required();
        c->add_option("--delta", cf_delta, "radial-trace budget");
        c->add_option("--a", cf_a, "closeness parameter a");
        c->add_option("--probes", cf_probes, "calibration probes");
        c->callback([&] { cmd_compress(run_cf, cf_family, cf_delta, cf_a, cf_probes); });
    }

    RunOpts run_va;
    {
        CLI::App* c = app.add_subcommand("verify-all", "seeded cross-module invariant suite");
        run_va.attach(c, true);
        c->callback([&] { cmd_verify_all(run_va); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const MeshError& e) {
        std::cerr << "mesh error: " << e.what() << "\n";
        return 3;
    } catch (const VerifyFailure& e) {
        std::cerr << e.what() << "\n";
        return 5;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
