#include "loopgeo/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace loopgeo {

namespace {

Curve geo_curve(const Surface& s, const SurfacePoint& a, const SurfacePoint& b) {
    GeodesicPath g = s.geodesic(a, b);
    return Curve::from_polyline(s, g.points, false);
}

Curve open_copy(const Curve& c) {
    return Curve::from_polyline(c.surface(), c.polyline(), false);
}

/// Concatenate open pieces, bridging any junction gap with a geodesic.
Curve chain_curves(const std::vector<Curve>& pieces) {
    const Curve* first = nullptr;
    for (const Curve& p : pieces)
        if (!p.empty()) {
            first = &p;
            break;
        }
    if (!first) throw std::invalid_argument("chain_curves: all pieces empty");
    const Surface& s = first->surface();
    Curve res = *first;
    for (const Curve& p : pieces) {
        if (&p == first) continue;
        if (p.empty()) continue;
        double gap = s.in_face_distance(res.end(), p.start());
        if (gap < 0) res = Curve::concat(res, geo_curve(s, res.end(), p.start()));
        res = Curve::concat(res, p);
    }
    return res;
}

/// A polyline through given waypoints with geodesic connections, remembering
/// where each waypoint landed so prefixes/suffixes can be cut at waypoints.
struct MarkedPath {
    const Surface* s = nullptr;
    std::vector<SurfacePoint> pts;
    std::vector<size_t> mark;

    static MarkedPath through(const Surface& s, const std::vector<SurfacePoint>& waypoints) {
        MarkedPath m;
        m.s = &s;
        m.pts.push_back(waypoints.front());
        m.mark.push_back(0);
        for (size_t i = 1; i < waypoints.size(); ++i) {
            GeodesicPath g = s.geodesic(m.pts.back(), waypoints[i]);
            for (size_t j = 1; j < g.points.size(); ++j) m.pts.push_back(g.points[j]);
            if (g.points.size() <= 1) m.pts.push_back(waypoints[i]);
            m.mark.push_back(m.pts.size() - 1);
        }
        return m;
    }

    Curve prefix(size_t j) const {
        return Curve::from_polyline(
            *s, std::vector<SurfacePoint>(pts.begin(), pts.begin() + mark[j] + 1), false);
    }
    Curve suffix(size_t j) const {
        return Curve::from_polyline(*s, std::vector<SurfacePoint>(pts.begin() + mark[j], pts.end()),
                                    false);
    }
    Curve full() const { return Curve::from_polyline(*s, pts, false); }
};

double checked_positive(double v, const char* what) {
    if (!(v > 0)) throw std::invalid_argument(std::string(what) + " must be positive");
    return v;
}

}  // namespace

double Homotopy::max_level_length() const {
    double m = 0;
    for (const Curve& c : levels) m = std::max(m, c.length());
    return m;
}

bool Homotopy::is_contraction(double tol) const {
    if (levels.size() < 2) return false;
    return levels.back().length() <= tol * (1.0 + levels.front().length());
}

double width(const Homotopy& H) {
    if (H.levels.size() < 2) throw std::invalid_argument("width: need at least 2 levels");
    const Surface& s = H.surface();
    double w = 0;
    if (!H.trajectories.empty()) {
        for (const auto& row : H.trajectories) {
            double acc = 0;
            for (size_t j = 1; j < row.size(); ++j) {
                double d = s.in_face_distance(row[j - 1], row[j]);
                if (d < 0 || d > 1e-12) acc += s.distance(row[j - 1], row[j]);
            }
            w = std::max(w, acc);
        }
        return w;
    }
    bool closed = H.levels.front().closed();
    int T = H.t_samples;
    int rows = closed ? T : T + 1;
    for (int k = 0; k < rows; ++k) {
        double t = double(k) / T;
        double acc = 0;
        SurfacePoint prev = H.levels.front().eval(t);
        for (size_t j = 1; j < H.levels.size(); ++j) {
            SurfacePoint cur = H.levels[j].eval(t);
            double d = s.in_face_distance(prev, cur);
            if (d < 0 || d > 1e-12) acc += s.distance(prev, cur);
            prev = cur;
        }
        w = std::max(w, acc);
    }
    return w;
}

double measure_continuity(Homotopy& H) {
    double b = 0;
    int n = std::min(H.t_samples, 32);
    for (size_t j = 1; j < H.levels.size(); ++j)
        b = std::max(b, sup_distance(H.levels[j - 1], H.levels[j], n));
    H.continuity_budget = b;
    return b;
}

bool kind_invariant_ok(const Homotopy& H, double tol) {
    const Surface& s = H.surface();
    switch (H.kind) {
        case Homotopy::Kind::FreeClosed:
            for (const Curve& c : H.levels)
                if (!c.closed()) return false;
            return true;
        case Homotopy::Kind::BasedLoop: {
            SurfacePoint base = H.levels.front().start();
            for (const Curve& c : H.levels) {
                if (!c.closed()) return false;
                if (s.distance(c.start(), base) > tol) return false;
            }
            return true;
        }
        case Homotopy::Kind::FixedEndpoints: {
            SurfacePoint p = H.levels.front().start(), q = H.levels.front().end();
            for (const Curve& c : H.levels) {
                if (c.closed()) return false;
                if (s.distance(c.start(), p) > tol) return false;
                if (s.distance(c.end(), q) > tol) return false;
            }
            return true;
        }
    }
    return false;
}

Homotopy concat_homotopies(const Homotopy& a, const Homotopy& b) {
    if (a.kind != b.kind) throw std::invalid_argument("concat_homotopies: kind mismatch");
    if (&a.surface() != &b.surface())
        throw std::invalid_argument("concat_homotopies: surfaces differ");
    Homotopy out;
    out.kind = a.kind;
    out.t_samples = a.t_samples;
    out.levels = a.levels;
    double joint = sup_distance(a.levels.back(), b.levels.front(), std::min(a.t_samples, 32));
    size_t start = joint <= 1e-9 ? 1 : 0;
    for (size_t j = start; j < b.levels.size(); ++j) out.levels.push_back(b.levels[j]);
    out.continuity_budget = std::max({a.continuity_budget, b.continuity_budget, joint});
    return out;
}

std::pair<Homotopy, BallContraction> contract_in_ball(const Curve& loop,
                                                      const SurfacePoint& center, double radius) {
    if (!loop.closed()) throw std::invalid_argument("contract_in_ball: loop must be closed");
    checked_positive(radius, "contract_in_ball: radius");
    const Surface& s = loop.surface();
    double h = s.mean_edge_length();
    double len = loop.length();

    int n = std::clamp(int(std::ceil(len / std::max(1e-12, 0.75 * h))), 12, 600);
    std::vector<SurfacePoint> pts = loop.samples(n);
    std::vector<Curve> rays;
    rays.reserve(n);
    double containment = 0;
    for (const SurfacePoint& x : pts) {
        rays.push_back(geo_curve(s, x, center));
        containment = std::max(containment, rays.back().length());
    }

    // cone failure: neighboring rays fly apart mid-way (ambiguous directions)
    double arc = len / n;
    double thresh = 3.0 * arc + 0.05 * radius + 2.0 * h;
    for (int k = 0; k < n; ++k) {
        double gap = s.distance(rays[k].eval(0.5), rays[(k + 1) % n].eval(0.5));
        if (gap > thresh) {
            std::ostringstream msg;
            msg << "cone-failure: rays diverge by " << gap << " at ball radius " << radius;
            throw std::runtime_error(msg.str());
        }
    }

    int stride = std::max(1, n / 96);
    int J = std::clamp(int(std::ceil(containment / std::max(1e-12, 0.5 * h))), 4, 24);
    Homotopy H;
    H.kind = Homotopy::Kind::FreeClosed;
    H.levels.push_back(loop);
    for (int j = 1; j < J; ++j) {
        double u = double(j) / J;
        std::vector<SurfacePoint> lvl;
        for (int k = 0; k < n; k += stride) lvl.push_back(rays[k].eval(u));
        H.levels.push_back(Curve::through(s, lvl, true));
    }
    H.levels.push_back(Curve::point_curve(s, center, true));
    for (int k = 0; k < n; k += stride) {
        std::vector<SurfacePoint> row;
        row.reserve(J + 1);
        for (int j = 0; j <= J; ++j) row.push_back(rays[k].eval(double(j) / J));
        H.trajectories.push_back(std::move(row));
    }
    measure_continuity(H);

    BallContraction bc;
    bc.center = center;
    bc.radius = radius;
    bc.measured_R = std::max(1.0, std::max(containment, width(H)) / radius);
    return {std::move(H), bc};
}

Calibration calibrate_contraction(const Surface& s, int probes, uint64_t seed,
                                  double init_radius) {
    if (probes < 1) throw std::invalid_argument("calibrate_contraction: need probes >= 1");
    double r = init_radius;
    if (!(r > 0)) r = 0.45 * s.invariants(6, seed).diameter_est;
    std::mt19937 rng{uint32_t(seed)};
    std::uniform_int_distribution<int> pickv(0, s.vertex_count() - 1);
    std::vector<SurfacePoint> centers;
    for (int i = 0; i < probes; ++i) centers.push_back(s.vertex_point(pickv(rng)));

    for (int halving = 0; halving < 8; ++halving) {
        if (r < 2.0 * s.mean_edge_length())
            throw std::runtime_error("calibrate_contraction: radius collapsed to mesh scale");
        double Rmax = 1.0;
        bool ok = true;
        for (const SurfacePoint& c : centers) {
            std::vector<double> field = s.distance_field(c);
            std::vector<Curve> rings = iso_contours(s, field, r);
            if (rings.empty()) {
                ok = false;
                break;
            }
            try {
                auto [H, bc] = contract_in_ball(rings.front(), c, r);
                Rmax = std::max(Rmax, bc.measured_R);
            } catch (const std::runtime_error&) {
                ok = false;
                break;
            }
        }
        if (ok) return {r, Rmax, probes};
        r *= 0.5;
    }
    throw std::runtime_error("calibrate_contraction: no workable radius found");
}

Homotopy homotope_close_curves(const Curve& alpha, const Curve& gamma, double a,
                               const Calibration& cal) {
    if (!(a > 2)) throw std::invalid_argument("homotope_close_curves: need a > 2");
    if (!alpha.closed() || !gamma.closed())
        throw std::invalid_argument("homotope_close_curves: curves must be closed");
    const Surface& s = alpha.surface();
    double r = checked_positive(cal.r_emp, "homotope_close_curves: calibration radius");
    double sd = sup_distance(alpha, gamma, 64);
    if (!(sd < r / a)) {
        std::ostringstream msg;
        msg << "curves-not-close: sup distance " << sd << " >= " << r / a;
        throw std::runtime_error(msg.str());
    }
    double len = std::max(alpha.length(), gamma.length());
    int m = std::max(8, int(std::ceil(4.0 * a * len / r)) + 1);
    std::vector<Curve> sigma;
    sigma.reserve(m);
    for (int i = 0; i < m; ++i) {
        double t = double(i) / m;
        sigma.push_back(geo_curve(s, alpha.eval(t), gamma.eval(t)));
    }
    const int K = 8;
    Homotopy H;
    H.kind = Homotopy::Kind::FreeClosed;
    H.levels.push_back(alpha);
    for (int k = 1; k < K; ++k) {
        std::vector<SurfacePoint> bps;
        bps.reserve(m);
        for (int i = 0; i < m; ++i) bps.push_back(sigma[i].eval(double(k) / K));
        H.levels.push_back(Curve::through(s, bps, true));
    }
    H.levels.push_back(gamma);
    measure_continuity(H);
    return H;
}

Homotopy shorten_levels(const Homotopy& H, double eps) {
    checked_positive(eps, "shorten_levels: eps");
    if (!H.is_contraction())
        throw std::runtime_error("not-a-contraction: last level is not a point curve");
    if (!H.levels.front().closed())
        throw std::invalid_argument("shorten_levels: levels must be closed curves");
    const Surface& s = H.surface();
    const Curve& gamma = H.levels.front();
    size_t J = H.levels.size() - 1;
    double maxlen = H.max_level_length();
    int m = std::max(2, int(std::ceil(maxlen / eps)));
    if (m > 5000) throw std::invalid_argument("shorten_levels: eps too small for this grid");
    SurfacePoint apex = H.levels.back().eval(0.0);

    // inner time grid per stage: a subsample of H's levels
    size_t q = std::min<size_t>(J, 4);
    std::vector<size_t> js;
    for (size_t k = 1; k <= q; ++k) {
        size_t j = (J * k) / q;
        if (js.empty() || j > js.back()) js.push_back(j);
    }

    // trajectories of the arc endpoints through H's levels
    std::vector<MarkedPath> eta(m + 1);
    for (int i = 0; i <= m; ++i) {
        std::vector<SurfacePoint> way;
        way.reserve(J + 1);
        for (size_t j = 0; j <= J; ++j) way.push_back(H.levels[j].eval(double(i) / m));
        eta[i] = MarkedPath::through(s, way);
    }
    Curve eta0_full = eta[0].full();

    Homotopy out;
    out.kind = Homotopy::Kind::FreeClosed;
    out.t_samples = H.t_samples;
    auto tpar = [&](int i) { return double(i) / m; };

    // sweep the arcs of gamma to the apex one at a time
    out.levels.push_back(gamma);
    for (int i = 1; i <= m; ++i) {
        for (size_t j : js) {
            std::vector<Curve> pieces;
            if (i == 1) {
                pieces.push_back(eta[0].prefix(j));
            } else {
                pieces.push_back(eta0_full);
                pieces.push_back(eta[i - 1].suffix(j).reversed());
            }
            pieces.push_back(H.levels[j].subcurve(tpar(i - 1), tpar(i)));
            pieces.push_back(eta[i == m ? 0 : i].prefix(j).reversed());
            if (i < m) pieces.push_back(gamma.subcurve(tpar(i), 1.0));
            out.levels.push_back(Curve::close_loop(chain_curves(pieces)));
        }
    }
    // cancel the remaining out-and-back spur toward the apex
    size_t spur_steps = std::max<size_t>(q, 2);
    for (size_t k = 1; k < spur_steps; ++k) {
        double v = double(k) / spur_steps;
        Curve su = eta0_full.subcurve(v, 1.0);
        out.levels.push_back(Curve::close_loop(chain_curves({su, su.reversed()})));
    }
    out.levels.push_back(Curve::point_curve(s, apex, true));

    // explicit correspondence: each tracked point follows its own H-trajectory
    // during its arc's stage and is parked at the apex afterwards
    int T = H.t_samples;
    size_t L = out.levels.size();
    for (int k = 0; k < T; ++k) {
        double t = double(k) / T;
        std::vector<SurfacePoint> row;
        row.reserve(L);
        if (k == 0) {
            // the basepoint rides the spur up at the very end
            size_t plain = 1 + size_t(m) * js.size();
            for (size_t l = 0; l < plain; ++l) row.push_back(gamma.eval(0.0));
            for (size_t sk = 1; sk < spur_steps; ++sk)
                row.push_back(eta0_full.eval(double(sk) / spur_steps));
            row.push_back(apex);
        } else {
            int stage = std::min(int(t * m) + 1, m);
            row.push_back(gamma.eval(t));
            for (int i = 1; i <= m; ++i)
                for (size_t j : js) {
                    if (i < stage) row.push_back(gamma.eval(t));
                    else if (i == stage) row.push_back(H.levels[j].eval(t));
                    else row.push_back(apex);
                }
            for (size_t sk = 1; sk < spur_steps; ++sk) row.push_back(apex);
            row.push_back(apex);
        }
        out.trajectories.push_back(std::move(row));
    }
    measure_continuity(out);
    return out;
}

Homotopy free_to_based(const Homotopy& H) {
    if (!H.is_contraction())
        throw std::runtime_error("not-a-contraction: last level is not a point curve");
    if (!H.levels.front().closed())
        throw std::invalid_argument("free_to_based: levels must be closed curves");
    const Surface& s = H.surface();
    size_t J = H.levels.size() - 1;
    std::vector<SurfacePoint> starts;
    starts.reserve(J + 1);
    for (const Curve& c : H.levels) starts.push_back(c.start());
    MarkedPath eta0 = MarkedPath::through(s, starts);
    Curve eta0_full = eta0.full();

    Homotopy out;
    out.kind = Homotopy::Kind::BasedLoop;
    out.t_samples = H.t_samples;
    for (size_t j = 0; j <= J; ++j) {
        Curve pre = eta0.prefix(j);
        out.levels.push_back(
            Curve::close_loop(chain_curves({pre, open_copy(H.levels[j]), pre.reversed()})));
    }
    size_t spur_steps = 8;
    for (size_t k = spur_steps - 1; k >= 1; --k) {
        double v = double(k) / spur_steps;
        Curve su = eta0_full.subcurve(0.0, v);
        out.levels.push_back(Curve::close_loop(chain_curves({su, su.reversed()})));
    }
    out.levels.push_back(Curve::point_curve(s, starts.front(), true));
    measure_continuity(out);
    return out;
}

namespace {

/// Slide homotopy between two close curves; when the matched-parameter sup
/// exceeds r/a, sweep from A to B along matched-sample geodesics computed
/// once up front: level k places each sample at fraction k/K of its
/// geodesic. Because the matching is frozen, consecutive levels differ by
/// roughly (sup motion + arc-length redistribution) / K, which can be pushed
/// under the threshold by raising K -- net projection scrambles constant-
/// speed parameters enough that re-matching per level (e.g. recursive
/// midcurve bisection) never settles. Each hop is still validated by
/// homotope_close_curves, so the closeness gate is not weakened. Beyond the
/// calibrated radius matched-sample geodesics are unreliable: hand over
/// immediately and let the caller get the curves-not-close diagnostic.
Homotopy bridged_close_homotopy(const Curve& A, const Curve& B, double a, const Calibration& cal) {
    double r = cal.r_emp;
    double sd = sup_distance(A, B, 64);
    if (sd < 0.95 * r / a || sd >= r) return homotope_close_curves(A, B, a, cal);
    const Surface& s = A.surface();
    bool closed = A.closed() && B.closed();
    double len = std::max(A.length(), B.length());
    int n = std::max(8, int(std::ceil(4.0 * a * len / r)) + 1);
    int count = closed ? n : n + 1;
    std::vector<Curve> geos;
    geos.reserve(count);
    for (int i = 0; i < count; ++i) {
        double t = double(i) / n;
        geos.push_back(geo_curve(s, A.eval(t), B.eval(t)));
    }

    double hop_cap = 0.8 * r / a;
    for (int K = std::max(2, int(std::ceil(sd / hop_cap))); K <= 256; K *= 2) {
        std::vector<Curve> levels;
        levels.push_back(A);
        for (int k = 1; k < K; ++k) {
            std::vector<SurfacePoint> bps;
            bps.reserve(count);
            for (int i = 0; i < count; ++i) bps.push_back(geos[i].eval(double(k) / K));
            levels.push_back(Curve::through(s, bps, closed));
        }
        levels.push_back(B);
        bool ok = true;
        for (size_t k = 1; k < levels.size() && ok; ++k)
            ok = sup_distance(levels[k - 1], levels[k], 64) < hop_cap;
        if (!ok) continue;
        Homotopy H = homotope_close_curves(levels[0], levels[1], a, cal);
        for (size_t k = 2; k < levels.size(); ++k)
            H = concat_homotopies(H, homotope_close_curves(levels[k - 1], levels[k], a, cal));
        return H;
    }
    return homotope_close_curves(A, B, a, cal);
}

}  // namespace

Homotopy contract_via_net(const Curve& gamma, const Homotopy& H_raw, Net& net, double a,
                          const Calibration& cal) {
    if (!(a > 2)) throw std::invalid_argument("contract_via_net: need a > 2");
    if (!H_raw.is_contraction())
        throw std::runtime_error("not-a-contraction: raw homotopy does not reach a point");
    const Surface& s = gamma.surface();
    if (sup_distance(gamma, H_raw.levels.front(), 32) > 1e-7 * (1.0 + gamma.length()))
        throw std::invalid_argument("contract_via_net: raw homotopy does not start at gamma");
    if (H_raw.max_level_length() > net.L())
        throw std::invalid_argument("contract_via_net: raw levels exceed the net length cap");
    double r = checked_positive(cal.r_emp, "contract_via_net: calibration radius");
    // half the r/(2a) the closeness argument needs: the projection itself eats
    // a mesh-scale chunk of the budget
    double step = r / (4.0 * a);

    // refine the time grid so consecutive levels are within r/(2a)
    std::vector<Curve> refined;
    refined.push_back(H_raw.levels.front());
    for (size_t j = 1; j < H_raw.levels.size(); ++j) {
        const Curve& A = H_raw.levels[j - 1];
        const Curve& B = H_raw.levels[j];
        double sd = sup_distance(A, B, 48);
        if (sd > 0.9 * r)
            throw std::runtime_error("contract_via_net: raw homotopy too coarse to refine");
        int k = std::max(1, int(std::ceil(sd / step)));
        if (k > 1) {
            double len = std::max(A.length(), B.length());
            int n = std::max(8, int(std::ceil(4.0 * a * len / r)) + 1);
            std::vector<Curve> sigma;
            sigma.reserve(n);
            for (int i = 0; i < n; ++i) {
                double t = double(i) / n;
                sigma.push_back(geo_curve(s, A.eval(t), B.eval(t)));
            }
            for (int kk = 1; kk < k; ++kk) {
                std::vector<SurfacePoint> bps;
                bps.reserve(n);
                for (int i = 0; i < n; ++i) bps.push_back(sigma[i].eval(double(kk) / k));
                refined.push_back(Curve::through(s, bps, true));
            }
        }
        refined.push_back(B);
    }

    // project every refined level and discard repeats forward
    std::vector<NetElement> chain;
    std::map<std::vector<int>, size_t> seen;
    for (const Curve& lvl : refined) {
        NetElement el = net.project(lvl);
        auto it = seen.find(el.aligned_indices);
        if (it != seen.end()) {
            size_t pos = it->second;
            chain.resize(pos);
            for (auto sit = seen.begin(); sit != seen.end();)
                sit = sit->second >= pos ? seen.erase(sit) : std::next(sit);
        }
        seen.emplace(el.aligned_indices, chain.size());
        chain.push_back(std::move(el));
    }

    Homotopy H = bridged_close_homotopy(gamma, chain.front().curve, a, cal);
    for (size_t k = 1; k < chain.size(); ++k)
        H = concat_homotopies(H, bridged_close_homotopy(chain[k - 1].curve, chain[k].curve, a, cal));
    SurfacePoint apex = H_raw.levels.back().eval(0.0);
    H = concat_homotopies(
        H, bridged_close_homotopy(chain.back().curve, Curve::point_curve(s, apex, true), a, cal));
    measure_continuity(H);
    return H;
}

Homotopy contract_based_short(const Curve& gamma, const Homotopy& H_raw, Net& net, double a,
                              const Calibration& cal, double eps) {
    Homotopy via = contract_via_net(gamma, H_raw, net, a, cal);
    Homotopy shortened = shorten_levels(via, eps);
    return free_to_based(shortened);
}

Curve connecting_loop(const Curve& gamma1, const Curve& gamma2) {
    return Curve::close_loop(chain_curves({gamma2, gamma1.reversed()}));
}

Homotopy path_homotopy(const Curve& gamma1, const Curve& gamma2, const Homotopy& C) {
    if (gamma1.closed() || gamma2.closed())
        throw std::invalid_argument("path_homotopy: paths must be open");
    const Surface& s = gamma1.surface();
    double tol = 1e-6 * (1.0 + gamma1.length() + gamma2.length());
    if (s.distance(gamma1.start(), gamma2.start()) > tol ||
        s.distance(gamma1.end(), gamma2.end()) > tol)
        throw std::invalid_argument("endpoint-mismatch: paths do not share endpoints");
    if (C.kind != Homotopy::Kind::BasedLoop)
        throw std::invalid_argument("contraction-kind: C must be a based-loop contraction");
    if (s.distance(C.levels.front().start(), gamma1.start()) > tol)
        throw std::invalid_argument("contraction-kind: C is not based at the shared start");
    if (!C.is_contraction())
        throw std::runtime_error("not-a-contraction: C does not reach a point");

    if (gamma1.length() > gamma2.length()) {
        Homotopy Crev = C;
        for (Curve& lvl : Crev.levels) lvl = lvl.reversed();
        Homotopy out = path_homotopy(gamma2, gamma1, Crev);
        std::reverse(out.levels.begin(), out.levels.end());
        measure_continuity(out);
        return out;
    }

    Homotopy out;
    out.kind = Homotopy::Kind::FixedEndpoints;
    out.t_samples = C.t_samples;
    // unwind the contraction in front of gamma1 ...
    for (size_t j = C.levels.size(); j-- > 0;)
        out.levels.push_back(chain_curves({open_copy(C.levels[j]), gamma1}));
    // ... then cancel the leftover gamma1-reversed * gamma1 spur along itself
    const size_t q = 8;
    for (size_t k = q - 1; k >= 1; --k) {
        double w = double(k) / q;
        Curve tail = gamma1.subcurve(1.0 - w, 1.0);
        out.levels.push_back(chain_curves({gamma2, tail.reversed(), tail}));
    }
    out.levels.push_back(gamma2);
    measure_continuity(out);
    return out;
}

const Curve& PathFamily::at(double t) const {
    auto it = std::lower_bound(phi.begin(), phi.end(), t);
    size_t j = it - phi.begin();
    if (j == phi.size()) return family.back();
    if (j > 0 && t - phi[j - 1] < phi[j] - t) --j;
    return family[j];
}

PathFamily short_path_family(const Curve& alpha, const ContractionContext& ctx) {
    if (alpha.closed()) throw std::invalid_argument("short_path_family: alpha must be a path");
    const Surface& s = alpha.surface();
    double h = s.mean_edge_length();
    SurfacePoint p = alpha.start();
    int K = std::clamp(int(std::ceil(alpha.length() / (5.0 * h))), 32, 400);

    std::vector<Curve> g;
    g.reserve(K + 1);
    for (int k = 0; k <= K; ++k) g.push_back(geo_curve(s, p, alpha.eval(double(k) / K)));

    std::vector<double> jumps(K);
    for (int k = 0; k < K; ++k) jumps[k] = sup_distance(g[k], g[k + 1], 12);
    std::vector<double> sorted = jumps;
    std::nth_element(sorted.begin(), sorted.begin() + K / 2, sorted.end());
    double thresh = std::max(5.0 * sorted[K / 2], 5.0 * h);

    PathFamily out;
    const int G = 4;
    for (int k = 0; k <= K; ++k) {
        double tk = double(k) / K;
        out.family.push_back(g[k]);
        out.phi.push_back(tk);
        if (k == K || jumps[k] <= thresh) continue;

        // cut-locus jump: walk to the midpoint, fill the digon, walk back
        double tn = double(k + 1) / K, tm = 0.5 * (tk + tn);
        for (int i = 1; i <= G; ++i) {
            double tt = tk + (tm - tk) * i / G;
            out.family.push_back(chain_curves({g[k], alpha.subcurve(tk, tt)}));
            out.phi.push_back(tt);
        }
        Curve c1 = chain_curves({g[k], alpha.subcurve(tk, tm)});
        Curve c2 = chain_curves({g[k + 1], alpha.subcurve(tm, tn).reversed()});
        Curve loop = connecting_loop(c1, c2);
        Homotopy raw = contract_loop_raw(loop, ctx.cal);
        Homotopy via = contract_via_net(loop, raw, *ctx.net, ctx.a, ctx.cal);
        out.W_emp = std::max(out.W_emp, width(via));
        Homotopy C = free_to_based(shorten_levels(via, ctx.eps_len));
        Homotopy fill = path_homotopy(c1, c2, C);
        for (size_t j = 1; j < fill.levels.size(); ++j) {
            out.family.push_back(fill.levels[j]);
            out.phi.push_back(tm);
        }
        for (int i = 1; i < G; ++i) {
            double tt = tm + (tn - tm) * i / G;
            out.family.push_back(chain_curves({g[k + 1], alpha.subcurve(tt, tn).reversed()}));
            out.phi.push_back(tt);
        }
        out.digon_params.push_back(tm);
    }
    return out;
}

IntervalExtension extend_to_interval(const CurveFamily& f, const std::vector<Curve>& left,
                                     const std::vector<Curve>& right, double delta,
                                     const ContractionContext& ctx) {
    size_t X = f.curves.size();
    if (X < 3 || X % 2 == 0)
        throw std::invalid_argument("extend_to_interval: need an odd family grid of size >= 3");
    size_t T = left.size();
    if (T < 2 || right.size() != T)
        throw std::invalid_argument("extend_to_interval: boundary grids must match and have >= 2 entries");
    checked_positive(delta, "extend_to_interval: delta");
    const Surface& s = f.curves.front().surface();
    size_t cx = X / 2;

    // radial trace: the path a fixed-time point sweeps from the center curve
    // out to family index xi
    auto make_trace = [&](size_t xi, double t) {
        std::vector<SurfacePoint> way;
        if (xi >= cx)
            for (size_t k = cx; k <= xi; ++k) way.push_back(f.curves[k].eval(t));
        else
            for (size_t k = cx + 1; k-- > xi;) way.push_back(f.curves[k].eval(t));
        return Curve::from_polyline(s, MarkedPath::through(s, way).pts, false);
    };

    double dmax = 0;
    for (size_t j = 0; j < T; ++j) {
        double t = double(j) / (T - 1);
        dmax = std::max({dmax, make_trace(0, t).length(), make_trace(X - 1, t).length()});
    }
    if (dmax >= delta) {
        std::ostringstream msg;
        msg << "variation-too-large: radial trace " << dmax << " exceeds " << delta;
        throw std::runtime_error(msg.str());
    }

    PathFamily af = short_path_family(f.curves[cx], ctx);

    IntervalExtension out;
    out.delta_measured = dmax;
    out.W_emp = af.W_emp;
    out.grid.assign(X, std::vector<Curve>());
    for (size_t xi = 0; xi < X; ++xi) {
        const std::vector<Curve>& bd = xi < cx ? left : right;
        size_t bx = xi < cx ? 0 : X - 1;
        double xfrac = std::abs(double(xi) - double(cx)) / double(cx);
        for (size_t j = 0; j < T; ++j) {
            double t = double(j) / (T - 1);
            Curve lvl = Curve::point_curve(s, af.family.front().start(), false);
            if (xfrac < 0.25) {
                lvl = chain_curves({af.at(t), make_trace(xi, t)});
            } else if (xfrac <= 0.75) {
                double tp = std::clamp((xfrac - 0.25) / 0.5, 0.0, 1.0);
                double tt = tp * t;
                size_t jb = size_t(std::lround(tt * (T - 1)));
                lvl = chain_curves({bd[jb], make_trace(bx, tt).reversed(), af.at(tt).reversed(),
                                    af.at(t), make_trace(xi, t)});
            } else {
                lvl = chain_curves({bd[j], make_trace(bx, t).reversed(), af.at(t).reversed(),
                                    af.at(t), make_trace(xi, t)});
            }
            out.max_length = std::max(out.max_length, lvl.length());
            out.grid[xi].push_back(std::move(lvl));
        }
    }
    return out;
}

namespace {

Homotopy contract_loop_toward(const Curve& gamma, const Calibration& cal, const SurfacePoint& z) {
    const Surface& s = gamma.surface();
    double r = cal.r_emp;
    double lam = r / 4.0;
    double h = s.mean_edge_length();

    Homotopy H;
    H.kind = Homotopy::Kind::FreeClosed;
    H.levels.push_back(gamma);
    Curve cur = gamma;
    for (int iter = 0; iter < 120; ++iter) {
        int n = std::clamp(int(std::ceil(cur.length() / (0.5 * lam))), 12, 400);
        std::vector<SurfacePoint> pts = cur.samples(n);
        std::vector<SurfacePoint> next;
        next.reserve(n);
        double dmax = 0;
        for (const SurfacePoint& x : pts) {
            Curve ray = geo_curve(s, x, z);
            double d = ray.length();
            dmax = std::max(dmax, d);
            next.push_back(d <= lam ? z : ray.eval(lam / d));
        }
        if (dmax <= 0.8 * r) {
            auto [cone, bc] = contract_in_ball(cur, z, std::max(dmax, 1e-9));
            for (size_t j = 1; j < cone.levels.size(); ++j) H.levels.push_back(cone.levels[j]);
            measure_continuity(H);
            return H;
        }
        Curve nxt = Curve::through(s, next, true);
        double sd = sup_distance(cur, nxt, 32);
        if (sd > lam + 4.0 * h + 0.1 * r)
            throw std::runtime_error("contract_loop_raw: slide lost continuity (loop may cross the target's cut locus)");
        H.levels.push_back(nxt);
        cur = nxt;
    }
    throw std::runtime_error("contract_loop_raw: slide stalled before reaching the ball");
}

}  // namespace

Homotopy contract_loop_raw(const Curve& gamma, const Calibration& cal) {
    if (!gamma.closed()) throw std::invalid_argument("contract_loop_raw: loop must be closed");
    const Surface& s = gamma.surface();
    double r = checked_positive(cal.r_emp, "contract_loop_raw: calibration radius");

    // candidate slide targets: mesh points far from the loop, mutually
    // separated so a retry actually changes the cut locus the slide can hit
    Surface::MultiSourceField msf = s.multi_source_field(gamma.samples(64));
    std::vector<int> order(msf.dist.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return msf.dist[a] > msf.dist[b]; });
    std::vector<SurfacePoint> targets;
    for (int node : order) {
        if (targets.size() >= 6) break;
        SurfacePoint p = s.node_point(node);
        bool apart = true;
        for (const SurfacePoint& t : targets)
            if (s.distance(t, p) < 0.5 * r) {
                apart = false;
                break;
            }
        if (apart) targets.push_back(p);
    }

    std::string last_error;
    for (const SurfacePoint& z : targets) {
        try {
            return contract_loop_toward(gamma, cal, z);
        } catch (const std::runtime_error& e) {
            last_error = e.what();
        }
    }
    throw std::runtime_error(last_error);
}

}  // namespace loopgeo
