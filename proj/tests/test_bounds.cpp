#include "doctest.h"

#include "loopgeo/bounds.hpp"

#include <cmath>
#include <vector>

using namespace loopgeo;

TEST_CASE("ball_count_bound closed form") {
    // 12^2 * 2 * e / (2 * 1 * 1) = 144 e
    double expect = 144.0 * std::exp(1.0);
    CHECK(ball_count_bound(1.0, 1.0, 2).to_double() == doctest::Approx(expect).epsilon(1e-9));
    // D -> 0 limit is 144
    CHECK(ball_count_bound(1.0, 1e-12, 2).to_double() == doctest::Approx(144.0).epsilon(1e-9));
    // halving eps scales by 2^n
    for (int n : {2, 3, 5}) {
        double r = ball_count_bound(0.5, 1.0, n).to_double() / ball_count_bound(1.0, 1.0, n).to_double();
        CHECK(r == doctest::Approx(std::pow(2.0, n)).epsilon(1e-9));
    }
    CHECK_THROWS(ball_count_bound(0.0, 1.0, 2));
    CHECK_THROWS(ball_count_bound(1.0, 1.0, 1));
}

TEST_CASE("ball_count_bound homogeneity in eps") {
    // bcb(eps) * eps^n is constant in eps
    for (int n : {2, 3, 4}) {
        double base = ball_count_bound(1.0, 2.0, n).to_double();
        for (double eps : {0.01, 0.1, 0.37, 2.0, 9.0}) {
            double val = ball_count_bound(eps, 2.0, n).to_double() * std::pow(eps, n);
            CHECK(val == doctest::Approx(base).epsilon(1e-9));
        }
    }
}

TEST_CASE("contractibility_params") {
    auto cp = contractibility_params(2, 1.0, 1.0, 1.0, 1.0);
    CHECK(cp.r.to_double() == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(cp.R.to_double() == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
    // r*R = c1 c2 / D when v = 1
    for (double D : {0.5, 1.0, 3.0}) {
        auto c = contractibility_params(3, 1.0, D, 2.0, 5.0);
        CHECK((c.r * c.R).to_double() == doctest::Approx(10.0 / D).epsilon(1e-9));
    }
    // doubling v in the v <= 1/2 regime: r x4, R x1/2
    auto lo = contractibility_params(2, 0.25, 1.0, 1.0, 1.0);
    auto hi = contractibility_params(2, 0.5, 1.0, 1.0, 1.0);
    CHECK(hi.r.to_double() / lo.r.to_double() == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(hi.R.to_double() / lo.R.to_double() == doctest::Approx(0.5).epsilon(1e-9));
    CHECK_THROWS(contractibility_params(2, -1.0, 1.0, 1.0, 1.0));
}

TEST_CASE("net_size_bound") {
    // N=10, L=eps: exponent 19, so the value is 10^19
    LogScalar s = net_size_bound(10.0, 0.37, 0.37);
    CHECK(s.level() >= 1);
    CHECK(s.log_value() / std::log(10.0) == doctest::Approx(19.0).epsilon(1e-12));
    // power of 1 stays 1
    CHECK(net_size_bound(1.0, 5.0, 0.1).to_double() == doctest::Approx(1.0));
    // N=10, L=1, eps=0.01 -> 10^1801
    LogScalar t = net_size_bound(10.0, 1.0, 0.01);
    CHECK(t.log_value() / std::log(10.0) == doctest::Approx(1801.0).epsilon(1e-12));
    CHECK_THROWS(net_size_bound(0.5, 1.0, 1.0));
}

TEST_CASE("width_bound reference point") {
    GeometryParams p = GeometryParams::make(2, 1.0, 1.0, 2.0);
    WidthBound wb = width_bound(p, 1.0, 1.0);
    CHECK(wb.W.level() == 2);
    // golden regression value of log(log W), frozen from the first evaluation
    CHECK(wb.W.loglog_value() == doctest::Approx(9.960553605404128).epsilon(1e-9));
    CHECK(LogScalar::compare(wb.W, wb.envelope) != Ordering::Greater);
}

TEST_CASE("width_bound monotonicity probes") {
    GeometryParams p = GeometryParams::make(2, 1.0, 1.0, 2.0);
    GeometryParams pc = p; pc.c = 4.0;
    CHECK(width_bound(p, 1, 1).W < width_bound(pc, 1, 1).W);
    GeometryParams v1 = GeometryParams::make(2, 1.0, 1.0, 2.0);
    GeometryParams v2 = GeometryParams::make(2, 2.0, 1.0, 2.0);
    CHECK(width_bound(v2, 1, 1).W < width_bound(v1, 1, 1).W);
}

TEST_CASE("length_bound") {
    GeometryParams p = GeometryParams::make(2, 1.0, 1.0, 2.0);
    p.delta = 0.0;
    p.l = 1;
    CHECK(length_bound(p, LogScalar::zero()).to_double() == doctest::Approx(7.0));
    p.l = 2;
    p.delta = 0.5;
    CHECK(length_bound(p, LogScalar::one()).to_double() == doctest::Approx(33.5));
    // affine in l with slope 2(5W+3D)
    LogScalar W = LogScalar::from_value(2.0);
    GeometryParams q = p;
    q.delta = 0.25;
    q.l = 3;
    double l3 = length_bound(q, W).to_double();
    q.l = 4;
    double l4 = length_bound(q, W).to_double();
    CHECK(l4 - l3 == doctest::Approx(2.0 * (5.0 * 2.0 + 3.0 * q.D)).epsilon(1e-9));
}

TEST_CASE("rescale") {
    auto s = rescale(-1.0, 2.0, 3.0, 2.5, 4);
    CHECK(s.v == doctest::Approx(2.0));
    CHECK(s.D == doctest::Approx(3.0));
    CHECK(s.d == doctest::Approx(2.5));
    auto t = rescale(-4.0, 1.0, 1.0, 1.0, 2);
    CHECK(t.v == doctest::Approx(16.0));
    CHECK(t.D == doctest::Approx(4.0));
    CHECK(t.d == doctest::Approx(4.0));
    CHECK_THROWS(rescale(0.0, 1.0, 1.0, 1.0, 2));
    CHECK_THROWS(rescale(1.0, 1.0, 1.0, 1.0, 2));
}

TEST_CASE("grid finiteness, monotonicity, and envelope") {
    std::vector<int> ns{2, 3, 4};
    std::vector<double> Ds{1, 5, 10}, vs{0.1, 1, 10}, cs{1, 10, 100};
    auto eval = [](int n, double v, double D, double c) {
        GeometryParams p = GeometryParams::make(n, v, D, c);
        return width_bound(p, 1.0, 1.0);
    };
    for (int n : ns)
        for (double D : Ds)
            for (double v : vs)
                for (double c : cs) {
                    WidthBound wb = eval(n, v, D, c);
                    CHECK(wb.W.level() == 2);
                    CHECK(std::isfinite(wb.W.loglog_value()));
                    CHECK(LogScalar::compare(wb.W, wb.envelope) != Ordering::Greater);
                    GeometryParams p = GeometryParams::make(n, v, D, c);
                    LogScalar L = length_bound(p, wb.W);
                    CHECK(std::isfinite(L.loglog_value()));
                }
    // edges: nondecreasing in c and D, nonincreasing in v
    for (int n : ns)
        for (double D : Ds)
            for (double v : vs) {
                CHECK(LogScalar::compare(eval(n, v, D, 1).W, eval(n, v, D, 10).W) == Ordering::Less);
                CHECK(LogScalar::compare(eval(n, v, D, 10).W, eval(n, v, D, 100).W) == Ordering::Less);
            }
    for (int n : ns)
        for (double v : vs)
            for (double c : cs) {
                CHECK(LogScalar::compare(eval(n, v, 1, c).W, eval(n, v, 5, c).W) == Ordering::Less);
                CHECK(LogScalar::compare(eval(n, v, 5, c).W, eval(n, v, 10, c).W) == Ordering::Less);
            }
    for (int n : ns)
        for (double D : Ds)
            for (double c : cs) {
                CHECK(LogScalar::compare(eval(n, 1, D, c).W, eval(n, 0.1, D, c).W) == Ordering::Less);
                CHECK(LogScalar::compare(eval(n, 10, D, c).W, eval(n, 1, D, c).W) == Ordering::Less);
            }
}

TEST_CASE("bound report aggregates") {
    GeometryParams p = GeometryParams::make(2, 1.0, 1.0, 2.0);
    BoundReport rep = compute_bound_report(p, 1.0, 1.0);
    CHECK(rep.r.to_double() == doctest::Approx(std::exp(-1.0)));
    CHECK(rep.R.to_double() == doctest::Approx(std::exp(1.0)));
    CHECK(rep.W_bound.level() == 2);
    CHECK(std::isfinite(rep.L_bound.loglog_value()));
}
