#include "doctest.h"

#include "loopgeo/bounds.hpp"
#include "loopgeo/fixtures.hpp"
#include "loopgeo/net.hpp"

#include <cmath>
#include <random>

using namespace loopgeo;

TEST_CASE("canonical rotation") {
    CHECK(canonical_rotation({3, 1, 2}) == std::vector<int>{1, 2, 3});
    CHECK(canonical_rotation({1, 2, 3}) == std::vector<int>{1, 2, 3});
    CHECK(canonical_rotation({2, 1, 2, 1}) == std::vector<int>{1, 2, 1, 2});
    CHECK(canonical_rotation({5}) == std::vector<int>{5});
    CHECK(canonical_rotation({}) == std::vector<int>{});
}

TEST_CASE("net bookkeeping") {
    Surface s = make_icosphere(3);
    Cover cover = build_cover(s, 1.2);
    Net net(cover, 6.0, 1.2);
    CHECK(net.size_observed() == 0);

    std::mt19937 rng(5);
    Curve gamma = random_closed_curve(s, 5.0, 4, rng);
    NetElement el = net.project(gamma);
    CHECK(net.size_observed() == 1);

    // canonicalization: projecting the same curve twice yields the same key
    NetElement el2 = net.project(gamma);
    CHECK(net.size_observed() == 1);
    CHECK(el.center_indices == el2.center_indices);
    CHECK(el.center_indices == canonical_rotation(el.center_indices));

    // reprojecting the element's own broken geodesic stays close to it
    if (el.curve.length() > 0) {
        NetElement re = net.project(el.curve);
        CHECK(sup_distance(el.curve, re.curve) < 1.2);
    }

    CHECK_THROWS(net.project(random_closed_curve(s, 5.0, 4, rng).subcurve(0.0, 0.5)));
    Curve longc = Curve::through(
        s, {s.vertex_point(0), s.vertex_point(100), s.vertex_point(200), s.vertex_point(300)},
        true);
    Net tiny(cover, 0.1, 1.2);
    CHECK_THROWS(tiny.project(longc));
}

TEST_CASE("eps-net property over random curves") {
    Surface s = make_icosphere(4);
    double eps = 1.2, L = 6.0;
    Cover cover = build_cover(s, eps);
    Net net(cover, L, eps);
    std::mt19937 rng(99);
    int pass = 0, trials = 40;
    for (int i = 0; i < trials; ++i) {
        Curve gamma = random_closed_curve(s, L, 4, rng);
        NetElement el = net.project(gamma);

        // length law, exact
        CHECK(el.curve.length() <= 3.0 * L);
        // segment count law
        CHECK(double(el.center_indices.size()) <= 18.0 * L / eps + 1.0);

        int samples = 64;
        double slack = (gamma.length() + el.curve.length()) / samples + 3.0 * s.mean_edge_length();
        double sd = sup_distance(gamma, el.curve, samples);
        if (sd < 5.0 * eps / 6.0 + slack) ++pass;
    }
    CHECK(pass == trials);
    // observed count never exceeds the combinatorial bound
    LogScalar bound = net_size_bound(double(cover.centers.size()), L, eps);
    LogScalar observed = LogScalar::from_value(double(net.size_observed()));
    CHECK(LogScalar::compare(observed, bound) == Ordering::Less);
}
