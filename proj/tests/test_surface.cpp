#include "doctest.h"

#include "loopgeo/curve.hpp"
#include "loopgeo/fixtures.hpp"
#include "loopgeo/surface.hpp"

#include <cmath>
#include <cstdio>
#include <random>

using namespace loopgeo;

namespace {

SurfacePoint random_point(const Surface& s, std::mt19937& rng) {
    std::uniform_int_distribution<int> face(0, s.face_count() - 1);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double r1 = std::sqrt(uni(rng)), r2 = uni(rng);
    return s.face_point(face(rng), 1.0 - r1, r1 * (1.0 - r2), r1 * r2);
}

// a point on the sphere mesh near a given direction
SurfacePoint near_direction(const Surface& s, const Vec3& dir) {
    int best = 0;
    double bd = -2;
    for (int v = 0; v < s.vertex_count(); ++v) {
        double d = s.positions()[v].dot(dir) / s.positions()[v].norm();
        if (d > bd) {
            bd = d;
            best = v;
        }
    }
    return s.vertex_point(best);
}

}  // namespace

TEST_CASE("construction validation") {
    // tetrahedron: closed, orientable, connected
    std::vector<Vec3> pos{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    std::vector<std::array<int, 3>> faces{{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
    CHECK_NOTHROW(Surface(pos, faces));
    // drop a face -> boundary edges
    CHECK_THROWS(Surface(pos, {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}}));
    // flip one face -> repeated directed edge
    CHECK_THROWS(Surface(pos, {{0, 1, 2}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}}));
    // degenerate intrinsic metric
    Surface t(pos, faces);
    CHECK_THROWS(t.override_edge_length(0, 9, 1.0));
    t.override_edge_length(0, 1, 10.0);  // exceeds the sum of the other two sides
    CHECK_THROWS(t.rebuild());
}

TEST_CASE("distance basics on the sphere mesh") {
    Surface s = make_icosphere(4);
    SurfacePoint p = s.face_point(11, 0.3, 0.5, 0.2);
    CHECK(s.distance(p, p) == doctest::Approx(0.0).epsilon(1e-12));

    // antipodal vertices: great-circle distance pi
    SurfacePoint a = near_direction(s, {0, 0, 1});
    SurfacePoint b = near_direction(s, {0, 0, -1});
    CHECK(s.distance(a, b) == doctest::Approx(M_PI).epsilon(0.02));

    // two vertices joined by a single edge: the edge length
    const Surface::Edge& e = s.edges()[5];
    CHECK(s.distance(s.vertex_point(e.v0), s.vertex_point(e.v1)) ==
          doctest::Approx(e.len).epsilon(1e-9));

    // symmetry
    std::mt19937 rng(3);
    for (int i = 0; i < 20; ++i) {
        SurfacePoint x = random_point(s, rng), y = random_point(s, rng);
        double dxy = s.distance(x, y), dyx = s.distance(y, x);
        CHECK(std::fabs(dxy - dyx) <= 2.0 * s.tol_geo() * M_PI);
    }
}

TEST_CASE("minimizing geodesics") {
    Surface s = make_icosphere(4);
    // equatorial points at angular distance 1 rad
    SurfacePoint p = near_direction(s, {1, 0, 0});
    SurfacePoint q = near_direction(s, {std::cos(1.0), std::sin(1.0), 0});
    GeodesicPath g = s.geodesic(p, q);
    CHECK(g.length == doctest::Approx(1.0).epsilon(0.02));
    CHECK(g.points.front().face == p.face);
    CHECK(g.points.back().face == q.face);

    // curve form has matching length and constant-speed evaluation
    Curve c = Curve::through(s, {p, q}, false);
    CHECK(c.length() == doctest::Approx(g.length).epsilon(s.tol_geo()));
    double quarter = s.distance(c.eval(0.0), c.eval(0.25));
    CHECK(quarter == doctest::Approx(c.length() / 4.0).epsilon(0.05));

    // point curve
    Curve pc = Curve::point_curve(s, p, false);
    CHECK(pc.length() == doctest::Approx(0.0));

    // self-consistency for random pairs
    std::mt19937 rng(11);
    for (int i = 0; i < 100; ++i) {
        SurfacePoint x = random_point(s, rng), y = random_point(s, rng);
        GeodesicPath gp = s.geodesic(x, y);
        CHECK(gp.length == doctest::Approx(s.distance(x, y)).epsilon(s.tol_geo()));
    }
}

TEST_CASE("triangle inequality") {
    Surface s = make_icosphere(3);
    std::mt19937 rng(17);
    double slack = 3.0 * s.tol_geo() * M_PI;
    for (int i = 0; i < 200; ++i) {
        SurfacePoint p = random_point(s, rng), q = random_point(s, rng), r = random_point(s, rng);
        CHECK(s.distance(p, r) <= s.distance(p, q) + s.distance(q, r) + slack);
    }
}

TEST_CASE("distance agrees with a refined-graph Dijkstra oracle") {
    Surface s = make_icosphere(3);
    // independent oracle: same mesh, 4x the Steiner density, raw graph metric
    Surface oracle(s.positions(), s.faces(), s.tol_geo(), 8);
    std::mt19937 rng(23);
    for (int i = 0; i < 60; ++i) {
        SurfacePoint p = random_point(s, rng), q = random_point(s, rng);
        double d = s.distance(p, q);
        double od = oracle.field_distance(oracle.distance_field(p), q);
        if (od < 1e-9) {
            CHECK(d <= 2.0 * s.tol_geo());
        } else {
            CHECK(std::fabs(d - od) / od <= 2.0 * s.tol_geo());
        }
    }
}

TEST_CASE("invariants on the round sphere") {
    Surface s = make_icosphere(4);
    SurfaceInvariants inv = s.invariants(2, 5);
    CHECK(inv.area == doctest::Approx(4.0 * M_PI).epsilon(0.01));
    CHECK(inv.diameter_est == doctest::Approx(M_PI).epsilon(0.02));
    CHECK(inv.curv_lower_est == doctest::Approx(1.0).epsilon(0.10));
}

TEST_CASE("invariants on the flat torus") {
    Surface t = make_flat_torus(12);
    SurfaceInvariants inv = t.invariants(2, 5);
    CHECK(std::fabs(inv.curv_lower_est) < 1e-6);
    CHECK(inv.area == doctest::Approx(1.0).epsilon(1e-9));
    // a straight horizontal run of half the fundamental domain
    CHECK(t.distance(t.vertex_point(0), t.vertex_point(6 * 12)) ==
          doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("scaling homogeneity") {
    Surface a = make_icosphere(3, 1.0);
    Surface b = make_icosphere(3, 2.0);
    SurfaceInvariants ia = a.invariants(2, 9), ib = b.invariants(2, 9);
    CHECK(ib.diameter_est == doctest::Approx(2.0 * ia.diameter_est).epsilon(1e-9));
    CHECK(ib.area == doctest::Approx(4.0 * ia.area).epsilon(1e-9));
}

TEST_CASE("curve operations") {
    Surface s = make_icosphere(3);
    std::mt19937 rng(31);
    std::vector<SurfacePoint> bps;
    for (int i = 0; i < 5; ++i) bps.push_back(random_point(s, rng));
    Curve c = Curve::through(s, bps, true);
    CHECK(c.closed());
    double gap = s.distance(c.eval(0.0), c.eval(1.0));
    CHECK(gap == doctest::Approx(0.0).epsilon(1e-9));

    Curve r = c.reversed();
    CHECK(r.length() == doctest::Approx(c.length()).epsilon(1e-12));
    CHECK(s.distance(c.eval(0.25), r.eval(0.75)) < 1e-9);

    Curve rot = c.rotated(0.3);
    CHECK(rot.length() == doctest::Approx(c.length()).epsilon(1e-9));
    CHECK(s.distance(rot.eval(0.0), c.eval(0.3)) < 1e-9);

    Curve sub = c.subcurve(0.2, 0.6);
    CHECK_FALSE(sub.closed());
    CHECK(sub.length() == doctest::Approx(0.4 * c.length()).epsilon(1e-9));
    CHECK(s.distance(sub.eval(0.5), c.eval(0.4)) < 1e-9);
    // wrap-around sub-arc on a closed curve
    Curve wrap = c.subcurve(0.8, 0.2);
    CHECK(wrap.length() == doctest::Approx(0.4 * c.length()).epsilon(1e-9));

    Curve open = Curve::through(s, {bps[0], bps[1], bps[2]}, false);
    Curve left = open.subcurve(0.0, 0.5), right = open.subcurve(0.5, 1.0);
    Curve glued = Curve::concat(left, right);
    CHECK(glued.length() == doctest::Approx(open.length()).epsilon(1e-9));
}

TEST_CASE("sup_distance") {
    Surface s = make_icosphere(4);
    std::mt19937 rng(41);
    Curve c = Curve::through(s, {random_point(s, rng), random_point(s, rng), random_point(s, rng)},
                             true);
    CHECK(sup_distance(c, c) == doctest::Approx(0.0).epsilon(1e-12));

    // parallel circles of latitude at angular separation theta
    auto latitude = [&](double phi) {
        std::vector<SurfacePoint> bps;
        int m = 24;
        for (int i = 0; i < m; ++i) {
            double th = 2.0 * M_PI * i / m;
            bps.push_back(near_direction(
                s, {std::cos(phi) * std::cos(th), std::cos(phi) * std::sin(th), std::sin(phi)}));
        }
        return Curve::through(s, bps, true);
    };
    Curve lat0 = latitude(0.15), lat1 = latitude(0.45);
    double sd = sup_distance(lat0, lat1, 96);
    CHECK(sd == doctest::Approx(0.30).epsilon(0.10));

    Curve d = Curve::through(s, {random_point(s, rng), random_point(s, rng)}, true);
    double ab = sup_distance(c, d), ba = sup_distance(d, c);
    CHECK(std::fabs(ab - ba) <= 2.0 * s.tol_geo() * M_PI);
    CHECK_THROWS(sup_distance(c, Curve::through(s, {random_point(s, rng)}, false)));
}

TEST_CASE("mesh io round trip") {
    Surface s = make_icosphere(2);
    std::string path = "/tmp/loopgeo_test_sphere.off";
    write_off(s, path);
    Surface back = load_off(path);
    CHECK(back.vertex_count() == s.vertex_count());
    CHECK(back.face_count() == s.face_count());
    CHECK(back.total_area() == doctest::Approx(s.total_area()).epsilon(1e-12));

    // OBJ writer-by-hand round trip
    std::string obj = "/tmp/loopgeo_test_tetra.obj";
    {
        FILE* f = fopen(obj.c_str(), "w");
        fputs("v 1 1 1\nv 1 -1 -1\nv -1 1 -1\nv -1 -1 1\n", f);
        fputs("f 1 3 2\nf 1 2 4\nf 1 4 3\nf 2 3 4\n", f);
        fclose(f);
    }
    Surface tet = load_obj(obj);
    CHECK(tet.face_count() == 4);

    // intrinsic sidecar: unit-square flat torus from the embedded donut
    std::string sidecar = "/tmp/loopgeo_test_torus.json";
    {
        FILE* f = fopen(sidecar.c_str(), "w");
        fputs("{\"edge_lengths\": [", f);
        auto rows = flat_torus_edge_lengths(6);
        for (size_t i = 0; i < rows.size(); ++i)
            fprintf(f, "%s[%d, %d, %.17g]", i ? ", " : "", int(rows[i][0]), int(rows[i][1]),
                    rows[i][2]);
        fputs("]}", f);
        fclose(f);
    }
    Surface torus = make_flat_torus(6);  // embedded donut positions
    Surface donut(torus.positions(), torus.faces());
    CHECK(donut.total_area() != doctest::Approx(1.0).epsilon(1e-6));
    apply_length_sidecar(donut, sidecar);
    CHECK(donut.total_area() == doctest::Approx(1.0).epsilon(1e-9));
}
