#include "doctest.h"

#include "loopgeo/cover.hpp"
#include "loopgeo/fixtures.hpp"
#include "loopgeo/homotopy.hpp"
#include "loopgeo/net.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

using namespace loopgeo;

namespace {

// One shared sphere with its calibration and net; building these dominates
// the suite's cost, so every test case reuses them.
struct Rig {
    Surface s = make_icosphere(3);
    SurfaceInvariants inv = s.invariants(8, 1);
    Calibration cal = calibrate_contraction(s, 6, 7);
    double a = 4.0;
    double eps_net = cal.r_emp / (4.0 * a);
    Cover cover = build_cover(s, eps_net);
    Net net{cover, 60.0, eps_net};
    std::vector<double> fld0 = s.distance_field(s.vertex_point(0));
    Curve equator = iso_contours(s, fld0, M_PI / 2).front();
    ContractionContext ctx{&s, &net, cal, a, 0.3, inv.diameter_est};
};

Rig& rig() {
    static Rig r;
    return r;
}

Curve geo(const Surface& s, const SurfacePoint& a, const SurfacePoint& b) {
    return Curve::from_polyline(s, s.geodesic(a, b).points, false);
}

SurfacePoint step_toward(const Surface& s, const SurfacePoint& p, const SurfacePoint& z,
                         double d) {
    Curve c = geo(s, p, z);
    if (c.length() <= d) return z;
    return c.eval(d / c.length());
}

// A closed curve near gamma: breakpoints nudged toward a random point.
Curve perturb_curve(const Curve& gamma, double d_max, std::mt19937& rng) {
    const Surface& s = gamma.surface();
    SurfacePoint z = random_surface_point(s, rng);
    std::uniform_real_distribution<double> ud(0.0, d_max);
    int n = 14;
    std::vector<SurfacePoint> bps;
    for (int i = 0; i < n; ++i)
        bps.push_back(step_toward(s, gamma.eval(double(i) / n), z, ud(rng)));
    return Curve::through(s, bps, true);
}

template <typename F>
bool throws_prefixed(F&& f, const char* prefix) {
    try {
        f();
    } catch (const std::exception& e) {
        return std::string(e.what()).rfind(prefix, 0) == 0;
    }
    return false;
}

SurfacePoint far_vertex(const Surface& s, const std::vector<double>& fld) {
    int best = 0;
    for (int v = 1; v < s.vertex_count(); ++v)
        if (fld[v] > fld[best]) best = v;
    return s.vertex_point(best);
}

}  // namespace

TEST_CASE("width of constant and rotating homotopies") {
    Rig& R = rig();

    Curve circle = iso_contours(R.s, R.fld0, 0.9).front();
    Homotopy still;
    still.levels = {circle, circle, circle};
    CHECK(width(still) == 0.0);

    // rotating a latitude circle by total angle theta moves every point by
    // theta * (circumference / 2 pi) along the circle
    double theta = 0.6;
    double shift = theta / (2.0 * M_PI);
    Homotopy rot;
    int J = 16;
    for (int j = 0; j < J; ++j) rot.levels.push_back(circle.rotated(shift * j / (J - 1)));
    double expect = theta * circle.length() / (2.0 * M_PI);
    CHECK(width(rot) == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("ball contraction of a point curve and a latitude ring") {
    Rig& R = rig();
    SurfacePoint c0 = R.s.vertex_point(0);

    auto [Hp, bp] = contract_in_ball(Curve::point_curve(R.s, c0, true), c0, 0.5);
    CHECK(width(Hp) == 0.0);
    CHECK(bp.measured_R == 1.0);
    CHECK(Hp.is_contraction());

    Curve ring = iso_contours(R.s, R.fld0, 0.35).front();
    auto [Hr, br] = contract_in_ball(ring, c0, 0.35);
    CHECK(width(Hr) == doctest::Approx(0.35).epsilon(0.10));
    CHECK(br.measured_R >= 1.0);
    CHECK(br.measured_R < 1.5);
    CHECK(Hr.is_contraction());
    CHECK(kind_invariant_ok(Hr, 1e-9));
    // boundary levels are the inputs, not resampled copies
    CHECK(sup_distance(Hr.levels.front(), ring, 32) == 0.0);
    CHECK(Hr.levels.back().length() == 0.0);
    CHECK(R.s.distance(Hr.levels.back().start(), c0) == 0.0);
}

TEST_CASE("cone failure when the ball reaches an ambiguous zone") {
    Rig& R = rig();
    // a point on the equator sees the opposite equator arc at distance ~pi;
    // rays from there back to the center pick sides arbitrarily
    SurfacePoint c = R.equator.eval(0.25);
    CHECK(throws_prefixed([&] { contract_in_ball(R.equator, c, M_PI); }, "cone-failure"));
}

TEST_CASE("calibration is deterministic and within the mesh scale") {
    Rig& R = rig();
    CHECK(R.cal.r_emp > 2.0 * R.s.mean_edge_length());
    CHECK(R.cal.r_emp < R.inv.diameter_est);
    CHECK(R.cal.R_emp >= 1.0);
    CHECK(R.cal.R_emp < 3.0);
    Calibration again = calibrate_contraction(R.s, 6, 7);
    CHECK(again.r_emp == R.cal.r_emp);
    CHECK(again.R_emp == R.cal.R_emp);
}

TEST_CASE("close-curve homotopies: exact ends and the width law") {
    Rig& R = rig();
    double bound = (4.0 * R.cal.R_emp + 2.0) * R.cal.r_emp / R.a;

    std::mt19937 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        Curve gamma = random_closed_curve(R.s, 4.0, 5, rng);
        Curve alpha = perturb_curve(gamma, 0.12, rng);
        REQUIRE(sup_distance(alpha, gamma) < R.cal.r_emp / R.a);

        Homotopy H = homotope_close_curves(alpha, gamma, R.a, R.cal);
        CHECK(H.kind == Homotopy::Kind::FreeClosed);
        CHECK(sup_distance(H.levels.front(), alpha, 32) == 0.0);
        CHECK(sup_distance(H.levels.back(), gamma, 32) == 0.0);
        CHECK(width(H) <= bound * 1.10);
        CHECK(H.continuity_budget < R.cal.r_emp);
    }

    Curve lat1 = iso_contours(R.s, R.fld0, 0.8).front();
    Curve lat2 = iso_contours(R.s, R.fld0, 1.8).front();
    CHECK(throws_prefixed([&] { homotope_close_curves(lat1, lat2, R.a, R.cal); },
                          "curves-not-close"));
}

TEST_CASE("width is subadditive under concatenation") {
    Rig& R = rig();
    std::mt19937 rng(4);
    Curve g0 = random_closed_curve(R.s, 4.0, 5, rng);
    Curve g1 = perturb_curve(g0, 0.10, rng);
    Curve g2 = perturb_curve(g1, 0.10, rng);
    Homotopy H1 = homotope_close_curves(g0, g1, R.a, R.cal);
    Homotopy H2 = homotope_close_curves(g1, g2, R.a, R.cal);
    Homotopy Hc = concat_homotopies(H1, H2);
    CHECK(Hc.levels.size() == H1.levels.size() + H2.levels.size() - 1);
    CHECK(width(Hc) <= width(H1) + width(H2) + 1e-9);
}

TEST_CASE("length laws along the contraction pipeline") {
    Rig& R = rig();
    double eps = 0.3, slack = 1.10;

    std::mt19937 rng(33);
    std::vector<Curve> fixtures = {R.equator};
    for (int i = 0; i < 3; ++i) fixtures.push_back(random_closed_curve(R.s, 5.0, 4, rng));

    for (const Curve& gamma : fixtures) {
        Homotopy raw = contract_loop_raw(gamma, R.cal);
        REQUIRE(raw.is_contraction());

        Homotopy via = contract_via_net(gamma, raw, R.net, R.a, R.cal);
        double W = width(via);
        REQUIRE(via.is_contraction());
        CHECK(sup_distance(via.levels.front(), gamma, 32) == 0.0);

        Homotopy sh = shorten_levels(via, eps);
        CHECK(sh.max_level_length() <= (gamma.length() + 3.0 * W + eps) * slack);
        CHECK(width(sh) <= W * slack);
        CHECK(sh.is_contraction());

        Homotopy based = free_to_based(sh);
        CHECK(based.kind == Homotopy::Kind::BasedLoop);
        CHECK(kind_invariant_ok(based, 1e-6));
        CHECK(based.is_contraction());
        CHECK(based.max_level_length() <=
              (sh.max_level_length() + 2.0 * width(sh)) * slack);
        // the headline short-loop law
        CHECK(based.max_level_length() <=
              (2.0 * R.inv.diameter_est + 5.0 * W + eps) * slack);
    }

    // the packaged composition agrees with running the stages by hand
    Homotopy raw = contract_loop_raw(R.equator, R.cal);
    Homotopy direct = contract_based_short(R.equator, raw, R.net, R.a, R.cal, eps);
    Homotopy via = contract_via_net(R.equator, raw, R.net, R.a, R.cal);
    Homotopy byhand = free_to_based(shorten_levels(via, eps));
    REQUIRE(direct.levels.size() == byhand.levels.size());
    CHECK(direct.max_level_length() == byhand.max_level_length());

    Homotopy notc = homotope_close_curves(R.equator, R.equator.rotated(0.01), R.a, R.cal);
    CHECK(throws_prefixed([&] { shorten_levels(notc, eps); }, "not-a-contraction"));
    CHECK_THROWS_AS(shorten_levels(raw, -1.0), std::invalid_argument);
}

TEST_CASE("fixed-endpoint homotopy between a straight and a bent path") {
    Rig& R = rig();
    SurfacePoint c0 = R.s.vertex_point(0);
    SurfacePoint q = R.equator.eval(0.0);
    Curve g1 = geo(R.s, c0, q);
    Curve g2 = Curve::concat(geo(R.s, c0, R.equator.eval(0.15)),
                             geo(R.s, R.equator.eval(0.15), q));

    Curve loop = connecting_loop(g1, g2);
    Homotopy raw = contract_loop_raw(loop, R.cal);
    Homotopy C = contract_based_short(loop, raw, R.net, R.a, R.cal, 0.3);
    REQUIRE(C.kind == Homotopy::Kind::BasedLoop);

    Homotopy ph = path_homotopy(g1, g2, C);
    CHECK(ph.kind == Homotopy::Kind::FixedEndpoints);
    CHECK(kind_invariant_ok(ph, 1e-6));
    CHECK(ph.max_level_length() <=
          C.max_level_length() + std::min(g1.length(), g2.length()) + 1e-9);
    CHECK(sup_distance(ph.levels.back(), g2, 32) == 0.0);

    // longer-first argument order goes through the reversed schedule
    Homotopy C2 = C;
    for (Curve& lvl : C2.levels) lvl = lvl.reversed();
    Homotopy ph2 = path_homotopy(g2, g1, C2);
    CHECK(kind_invariant_ok(ph2, 1e-6));
    CHECK(sup_distance(ph2.levels.front(), g2, 32) == 0.0);
    CHECK(ph2.max_level_length() <=
          C2.max_level_length() + std::min(g1.length(), g2.length()) + 1e-9);

    // precondition failures
    Curve elsewhere = geo(R.s, c0, R.equator.eval(0.4));
    CHECK(throws_prefixed([&] { path_homotopy(g1, elsewhere, C); }, "endpoint-mismatch"));
    Homotopy freeC = C;
    freeC.kind = Homotopy::Kind::FreeClosed;
    CHECK(throws_prefixed([&] { path_homotopy(g1, g2, freeC); }, "contraction-kind"));
    Homotopy truncated = C;
    truncated.levels.resize(truncated.levels.size() / 2);
    CHECK(throws_prefixed([&] { path_homotopy(g1, g2, truncated); }, "not-a-contraction"));
}

TEST_CASE("short path families with and without cut-locus jumps") {
    Rig& R = rig();
    SurfacePoint c0 = R.s.vertex_point(0);
    SurfacePoint q = R.equator.eval(0.0);

    // a minimizing geodesic stays inside the injectivity radius: no digons
    Curve alpha = geo(R.s, c0, q);
    PathFamily fam = short_path_family(alpha, R.ctx);
    CHECK(fam.digon_params.empty());
    CHECK(fam.W_emp == 0.0);
    CHECK(fam.phi.front() == 0.0);
    CHECK(fam.phi.back() == 1.0);
    for (size_t i = 1; i < fam.phi.size(); ++i) CHECK(fam.phi[i] >= fam.phi[i - 1]);
    for (const Curve& g : fam.family)
        CHECK(g.length() <= alpha.length() * 1.05 + R.s.mean_edge_length());
    for (const Curve& g : fam.family)
        CHECK(R.s.distance(g.start(), c0) < 1e-9);

    // a path through the antipode crosses the cut locus exactly once
    SurfacePoint anti = far_vertex(R.s, R.fld0);
    Curve beta = Curve::concat(geo(R.s, c0, anti), geo(R.s, anti, q));
    PathFamily fam2 = short_path_family(beta, R.ctx);
    REQUIRE(fam2.digon_params.size() == 1);
    CHECK(fam2.digon_params[0] > 0.45);
    CHECK(fam2.digon_params[0] < 0.85);
    CHECK(fam2.W_emp > 0.0);
    for (size_t i = 1; i < fam2.phi.size(); ++i) CHECK(fam2.phi[i] >= fam2.phi[i - 1]);
    double member_bound =
        (5.0 * fam2.W_emp + 3.0 * R.inv.diameter_est + R.ctx.eps_len) * 1.10;
    for (const Curve& g : fam2.family) CHECK(g.length() <= member_bound);
    // at() resolves the endpoint parameter
    CHECK(R.s.distance(fam2.at(1.0).end(), q) < 1e-9);

    CHECK_THROWS_AS(short_path_family(R.equator, R.ctx), std::invalid_argument);
}

TEST_CASE("interval extension of boundary assignments") {
    Rig& R = rig();
    SurfacePoint c0 = R.s.vertex_point(0);
    SurfacePoint q = R.equator.eval(0.0);
    SurfacePoint anti = far_vertex(R.s, R.fld0);

    // a fan of slightly offset two-leg paths from pole to equator
    Curve base = geo(R.s, c0, anti);
    size_t X = 5, T = 9;
    CurveFamily f;
    for (size_t xi = 0; xi < X; ++xi) {
        SurfacePoint mid = base.eval(0.45 + (double(xi) - 2.0) * 0.02);
        f.curves.push_back(Curve::concat(geo(R.s, c0, mid), geo(R.s, mid, q)));
    }
    std::vector<Curve> bdl, bdr;
    double Lb = 0;
    for (size_t j = 0; j < T; ++j) {
        double t = double(j) / (T - 1);
        bdl.push_back(geo(R.s, c0, f.curves.front().eval(t)));
        bdr.push_back(geo(R.s, c0, f.curves.back().eval(t)));
        Lb = std::max({Lb, bdl.back().length(), bdr.back().length()});
    }

    IntervalExtension ext = extend_to_interval(f, bdl, bdr, 0.5, R.ctx);
    CHECK(ext.grid.size() == X);
    CHECK(ext.grid[0].size() == T);
    CHECK(ext.delta_measured < 0.5);
    for (size_t xi = 0; xi < X; ++xi) {
        CHECK(R.s.distance(ext.grid[xi][0].start(), c0) < 1e-9);
        CHECK(R.s.distance(ext.grid[xi][T - 1].end(), q) < 1e-6);
    }
    double member =
        5.0 * ext.W_emp + 3.0 * R.inv.diameter_est + R.ctx.eps_len;
    CHECK(ext.max_length <= (Lb + 2.0 * ext.delta_measured + 2.0 * member) * 1.10);

    // constant family: every trace degenerates and the center family rules
    CurveFamily fc;
    for (int i = 0; i < 3; ++i) fc.curves.push_back(geo(R.s, c0, q));
    std::vector<Curve> cb;
    for (size_t j = 0; j < 5; ++j)
        cb.push_back(geo(R.s, c0, fc.curves[0].eval(double(j) / 4)));
    IntervalExtension cext = extend_to_interval(fc, cb, cb, 0.5, R.ctx);
    CHECK(cext.delta_measured == 0.0);
    CHECK(cext.W_emp == 0.0);

    CHECK(throws_prefixed([&] { extend_to_interval(f, bdl, bdr, 0.05, R.ctx); },
                          "variation-too-large"));
    CurveFamily even;
    for (int i = 0; i < 4; ++i) even.curves.push_back(geo(R.s, c0, q));
    CHECK_THROWS_AS(extend_to_interval(even, bdl, bdr, 0.5, R.ctx), std::invalid_argument);
}

TEST_CASE("ball contraction radius on a fine flat region") {
    Surface torus = make_flat_torus(32);
    SurfacePoint c = torus.vertex_point(0);
    std::vector<double> fld = torus.distance_field(c);
    Curve ring = iso_contours(torus, fld, 0.1).front();
    auto [H, bc] = contract_in_ball(ring, c, 0.1);
    CHECK(width(H) == doctest::Approx(0.1).epsilon(0.05));
    CHECK(bc.measured_R < 1.2);
    CHECK(H.is_contraction());
}
