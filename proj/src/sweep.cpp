#include "loopgeo/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace loopgeo {

namespace {

Curve geo_curve(const Surface& s, const SurfacePoint& a, const SurfacePoint& b) {
    GeodesicPath g = s.geodesic(a, b);
    return Curve::from_polyline(s, g.points, false);
}

/// Concatenate open pieces, bridging any junction gap with a geodesic.
Curve chain_curves(const std::vector<Curve>& pieces) {
    const Surface& s = pieces.front().surface();
    Curve res = pieces.front();
    for (size_t i = 1; i < pieces.size(); ++i) {
        const Curve& p = pieces[i];
        if (p.empty()) continue;
        double gap = s.in_face_distance(res.end(), p.start());
        if (gap < 0) res = Curve::concat(res, geo_curve(s, res.end(), p.start()));
        res = Curve::concat(res, p);
    }
    return res;
}

SurfacePoint farthest_vertex(const Surface& s, const SurfacePoint& from) {
    std::vector<double> fld = s.distance_field(from);
    int best = 0;
    for (int v = 1; v < s.vertex_count(); ++v)
        if (fld[v] > fld[best]) best = v;
    return s.vertex_point(best);
}

}  // namespace

namespace {

/// One replacement pass: breakpoints every `w` of arc length, staggered by
/// half a window on odd passes, sub-arcs replaced by minimizing geodesics.
Curve replacement_pass(const Curve& cur, double w, int parity) {
    const Surface& s = cur.surface();
    double len = cur.length();
    int nw = std::max(2, int(std::ceil(len / w)));
    double off = parity ? 0.5 / nw : 0.0;
    std::vector<SurfacePoint> bks;
    bks.push_back(cur.start());
    for (int i = 0; i < nw; ++i) {
        double t = off + double(i) / nw;
        if (t > 0 && t < 1) bks.push_back(cur.eval(t));
    }
    bks.push_back(cur.end());
    return Curve::through(s, bks, false);
}

/// Mesh-scale shortening only: stays on saddle-type critical curves instead
/// of sliding down their unstable directions, so near-critical seeds polish
/// into discrete geodesics without collapsing a winding.
Curve polish_fine(const Curve& gamma, int max_iters, double tol) {
    const Surface& s = gamma.surface();
    double w = 4.0 * s.mean_edge_length();
    Curve cur = gamma;
    for (int pass = 0; pass < max_iters; ++pass) {
        if (cur.length() <= w) return geo_curve(s, cur.start(), cur.end());
        Curve nxt = replacement_pass(cur, w, pass % 2);
        double drop = cur.length() - nxt.length();
        if (nxt.length() <= cur.length()) cur = nxt;
        if (drop < tol * cur.length()) break;
    }
    return cur;
}

}  // namespace

ShortenResult birkhoff_shorten(const Curve& gamma, int max_iters, double tol) {
    if (gamma.closed()) throw std::invalid_argument("birkhoff_shorten: expects an open path");
    if (max_iters < 1) throw std::invalid_argument("birkhoff_shorten: need max_iters >= 1");
    const Surface& s = gamma.surface();
    double h = s.mean_edge_length();
    // window cap below the diameter so no single replacement can take the
    // "wrong side" between its endpoints
    double cap = std::max(4.0 * h, 0.45 * s.invariants(6, 1).diameter_est);

    ShortenResult res;
    Curve cur = gamma;
    int stall = 0;
    for (int pass = 0; pass < max_iters; ++pass) {
        double len = cur.length();
        res.passes = pass + 1;
        if (len <= 2.0 * h) {
            cur = geo_curve(s, cur.start(), cur.end());
            res.converged = true;
            break;
        }
        // cycle through window scales: mesh-level wrinkles and long bows
        // stall at each other's scale
        double w;
        switch (pass % 4) {
            case 0: w = 4.0 * h; break;
            case 1: w = len / 8.0; break;
            case 2: w = len / 4.0; break;
            default: w = len / 2.0; break;
        }
        w = std::clamp(w, 4.0 * h, cap);
        Curve nxt = replacement_pass(cur, w, pass % 2);
        double drop = cur.length() - nxt.length();
        // trust region: a legitimate replacement moves points by less than a
        // window; larger jumps would change what the curve winds around
        bool ok = nxt.length() <= cur.length() && sup_distance(cur, nxt, 32) <= 0.5 * w;
        if (ok) cur = nxt;
        if (!ok || drop < tol * len) {
            if (++stall >= 4) {  // every scale in the cycle stalled
                res.converged = true;
                break;
            }
        } else {
            stall = 0;
        }
    }
    res.curve = cur;
    return res;
}

std::vector<Curve> find_geodesics(const Surface& s, const SurfacePoint& p, const SurfacePoint& q,
                                  int m) {
    if (m < 1) throw std::invalid_argument("find_geodesics: need m >= 1");
    double h = s.mean_edge_length();

    Curve g0 = birkhoff_shorten(geo_curve(s, p, q)).curve;
    if (m == 1) return {g0};

    // the far side of the direct connection: opposite its midpoint; the
    // long-way connection through it is a saddle, so polish at mesh scale
    SurfacePoint a = farthest_vertex(s, g0.eval(0.5));
    Curve back = polish_fine(chain_curves({geo_curve(s, p, a), geo_curve(s, a, q)}), 120, 1e-4);

    // closed detours at q that continue each connection's arrival direction,
    // so winding concatenations have no corner to cancel at the junction
    Curve around_fwd = chain_curves({geo_curve(s, q, a), geo_curve(s, a, p), g0});
    Curve around_back = chain_curves({g0.reversed(), back});

    std::vector<Curve> seeds = {g0, back};
    for (int k = 1; k <= m && int(seeds.size()) < 2 * m + 2; ++k) {
        std::vector<Curve> wf = {g0}, wb = {back};
        for (int i = 0; i < k; ++i) {
            wf.push_back(around_fwd);
            wb.push_back(around_back);
        }
        seeds.push_back(chain_curves(wf));
        seeds.push_back(chain_curves(wb));
    }

    std::mt19937 rng{2025};
    std::uniform_int_distribution<int> pickv(0, s.vertex_count() - 1);

    std::vector<Curve> critical;
    // winding seeds sit on saddles: mesh-scale polishing keeps them there
    for (const Curve& seed : seeds) critical.push_back(polish_fine(seed, 120, 1e-4));
    for (int round = 0; round <= 8; ++round) {
        std::sort(critical.begin(), critical.end(),
                  [](const Curve& x, const Curve& y) { return x.length() < y.length(); });
        std::vector<Curve> distinct;
        for (const Curve& c : critical) {
            bool fresh = true;
            for (const Curve& d : distinct)
                if (sup_distance(c, d, 64) <= 3.0 * h) {
                    fresh = false;
                    break;
                }
            if (fresh) distinct.push_back(c);
        }
        if (int(distinct.size()) >= m) {
            distinct.resize(m);
            return distinct;
        }
        if (round == 8) {
            std::ostringstream msg;
            msg << "insufficient-distinct-geodesics: " << distinct.size() << " of " << m
                << " after the perturbation budget";
            throw std::runtime_error(msg.str());
        }
        // perturbation round: a random detour may reach a missed critical curve
        SurfacePoint z = s.vertex_point(pickv(rng));
        critical.push_back(
            birkhoff_shorten(chain_curves({geo_curve(s, p, z), geo_curve(s, z, q)})).curve);
    }
    return critical;  // unreachable
}

CompressedSweepout compress_family(const Sweepout& f, const ContractionContext& ctx,
                                   double delta) {
    size_t N = f.family.size();
    if (N < 5 || N % 4 != 1)
        throw std::invalid_argument("compress_family: family size must be 4k + 1, k >= 1");
    const Surface& s = f.family.front().surface();
    SurfacePoint p = f.family.front().start(), q = f.family.front().end();
    double tol = 1e-6 * (1.0 + f.family.front().length());
    for (const Curve& c : f.family) {
        if (c.closed()) throw std::invalid_argument("compress_family: members must be open paths");
        if (s.distance(c.start(), p) > tol || s.distance(c.end(), q) > tol)
            throw std::invalid_argument("compress_family: members must share endpoints");
    }
    if (sup_distance(f.family.front(), f.family.back(), 32) > tol)
        throw std::invalid_argument("compress_family: parameter circle must close up");

    const size_t T = 9;
    CompressedSweepout res;
    res.out.degree = f.degree;
    res.out.family.resize(N);
    res.audit.resize(N);

    // boundary assignments at the subdivision vertices (every 4th member)
    std::vector<std::vector<Curve>> vert_cols(N);
    for (size_t v = 0; v < N; v += 4) {
        if (v == N - 1) {
            vert_cols[v] = vert_cols[0];  // same member, same assignment
            break;
        }
        PathFamily fam = short_path_family(f.family[v], ctx);
        res.W_emp = std::max(res.W_emp, fam.W_emp);
        for (size_t j = 0; j < T; ++j) vert_cols[v].push_back(fam.at(double(j) / (T - 1)));
    }

    for (size_t v = 0; v + 4 < N; v += 4) {
        CurveFamily cf;
        for (size_t xi = 0; xi < 5; ++xi) cf.curves.push_back(f.family[v + xi]);
        IntervalExtension ext = extend_to_interval(cf, vert_cols[v], vert_cols[v + 4], delta, ctx);
        res.W_emp = std::max(res.W_emp, ext.W_emp);
        res.delta_measured = std::max(res.delta_measured, ext.delta_measured);

        size_t last = (v + 4 + 4 < N) ? 3 : 4;  // shared vertex owned by the next edge
        for (size_t xi = 0; xi <= last; ++xi) {
            size_t idx = v + xi;
            res.out.family[idx] = ext.grid[xi][T - 1];
            // audit: slide the replacement point along the member back to q
            Homotopy A;
            A.kind = Homotopy::Kind::FixedEndpoints;
            for (size_t j = 0; j < T; ++j) {
                double t = double(j) / (T - 1);
                Curve tail = f.family[idx].subcurve(t, 1.0);
                A.levels.push_back(tail.length() > 0 ? chain_curves({ext.grid[xi][j], tail})
                                                     : ext.grid[xi][j]);
            }
            measure_continuity(A);
            res.audit[idx] = std::move(A);
        }
    }
    // the closed-circle invariant: both ends are the same parameter point
    res.out.family[N - 1] = res.out.family[0];
    res.audit[N - 1] = res.audit[0];
    return res;
}

}  // namespace loopgeo
