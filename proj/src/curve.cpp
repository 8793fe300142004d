#include "loopgeo/curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace loopgeo {

void Curve::finish() {
    if (pts_.empty()) throw std::invalid_argument("Curve: empty polyline");
    cum_.assign(pts_.size(), 0.0);
    for (size_t i = 1; i < pts_.size(); ++i) {
        double d = s_->in_face_distance(pts_[i - 1], pts_[i]);
        if (d < 0) throw std::runtime_error("Curve: consecutive points do not share a face");
        cum_[i] = cum_[i - 1] + d;
    }
}

Curve Curve::from_polyline(const Surface& s, std::vector<SurfacePoint> pts, bool closed) {
    Curve c;
    c.s_ = &s;
    c.pts_ = std::move(pts);
    c.closed_ = closed;
    if (closed && !c.pts_.empty()) {
        double gap = s.in_face_distance(c.pts_.back(), c.pts_.front());
        if (gap < 0)
            throw std::runtime_error("Curve: closed polyline endpoints do not share a face");
        if (gap > 1e-12) c.pts_.push_back(c.pts_.front());
        else c.pts_.back() = c.pts_.front();
    }
    c.finish();
    return c;
}

Curve Curve::point_curve(const Surface& s, const SurfacePoint& p, bool closed) {
    Curve c;
    c.s_ = &s;
    c.pts_ = {p, p};
    c.closed_ = closed;
    c.finish();
    return c;
}

Curve Curve::through(const Surface& s, const std::vector<SurfacePoint>& breakpoints, bool closed) {
    if (breakpoints.empty()) throw std::invalid_argument("Curve::through: no breakpoints");
    std::vector<SurfacePoint> pts;
    pts.push_back(breakpoints.front());
    size_t n = breakpoints.size();
    size_t segs = closed ? n : n - 1;
    for (size_t i = 0; i < segs; ++i) {
        const SurfacePoint& a = breakpoints[i];
        const SurfacePoint& b = breakpoints[(i + 1) % n];
        GeodesicPath g = s.geodesic(a, b);
        for (size_t j = 1; j < g.points.size(); ++j) pts.push_back(g.points[j]);
    }
    if (breakpoints.size() == 1) pts.push_back(breakpoints.front());
    return from_polyline(s, std::move(pts), closed);
}

SurfacePoint Curve::eval(double t) const {
    double L = length();
    if (closed_) {
        t -= std::floor(t);
    } else {
        t = std::clamp(t, 0.0, 1.0);
    }
    if (L <= 0) return pts_.front();
    double target = t * L;
    auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
    size_t i = std::min(size_t(it - cum_.begin()), cum_.size() - 1);
    // segment [i-1, i]
    size_t a = i - 1;
    double seg = cum_[i] - cum_[a];
    if (seg <= 0) return pts_[a];
    double u = (target - cum_[a]) / seg;
    int f = s_->common_face(pts_[a], pts_[i]);
    Vec2 ca = s_->layout_coords(f, pts_[a]);
    Vec2 cb = s_->layout_coords(f, pts_[i]);
    return s_->point_from_layout(f, ca + (cb - ca) * u);
}

std::vector<SurfacePoint> Curve::samples(int count) const {
    std::vector<SurfacePoint> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        double t = closed_ ? double(i) / count : double(i) / std::max(count - 1, 1);
        out.push_back(eval(t));
    }
    return out;
}

Curve Curve::reversed() const {
    Curve c;
    c.s_ = s_;
    c.pts_.assign(pts_.rbegin(), pts_.rend());
    c.closed_ = closed_;
    c.finish();
    return c;
}

Curve Curve::rotated(double t0) const {
    if (!closed_) throw std::logic_error("Curve::rotated: curve must be closed");
    t0 -= std::floor(t0);
    if (t0 == 0.0) return *this;
    double L = length();
    double target = t0 * L;
    SurfacePoint cut = eval(t0);
    std::vector<SurfacePoint> pts;
    pts.push_back(cut);
    auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
    size_t i = std::min(size_t(it - cum_.begin()), cum_.size() - 1);
    for (size_t k = i; k + 1 < pts_.size(); ++k) pts.push_back(pts_[k]);
    for (size_t k = 0; k < i; ++k) pts.push_back(pts_[k]);
    return from_polyline(*s_, std::move(pts), true);
}

Curve Curve::subcurve(double t0, double t1) const {
    double L = length();
    if (closed_) {
        t0 -= std::floor(t0);
        t1 -= std::floor(t1);
        if (t1 < t0) t1 += 1.0;
    } else {
        t0 = std::clamp(t0, 0.0, 1.0);
        t1 = std::clamp(t1, 0.0, 1.0);
        if (t1 < t0) throw std::invalid_argument("Curve::subcurve: t1 < t0 on an open curve");
    }
    std::vector<SurfacePoint> pts;
    pts.push_back(eval(t0));
    if (L > 0) {
        double a = t0 * L, b = t1 * L;
        size_t n = pts_.size();
        for (double off = 0; off <= b + 1e-18; off += L) {
            for (size_t k = 1; k + 1 < n + (closed_ ? 1 : 0) && k < n; ++k) {
                double c = cum_[k] + off;
                if (c > a + 1e-15 && c < b - 1e-15) pts.push_back(pts_[k]);
            }
            if (!closed_) break;
        }
        pts.push_back(eval(t1));
    }
    return from_polyline(*s_, std::move(pts), false);
}

Curve Curve::concat(const Curve& a, const Curve& b) {
    if (a.closed_ || b.closed_) throw std::logic_error("Curve::concat: operands must be open");
    if (&a.surface() != &b.surface())
        throw std::logic_error("Curve::concat: operands on different surfaces");
    std::vector<SurfacePoint> pts = a.pts_;
    double gap = a.s_->in_face_distance(a.pts_.back(), b.pts_.front());
    if (gap < 0) throw std::runtime_error("Curve::concat: endpoints do not share a face");
    size_t start = gap <= 1e-12 ? 1 : 0;
    for (size_t i = start; i < b.pts_.size(); ++i) pts.push_back(b.pts_[i]);
    return from_polyline(*a.s_, std::move(pts), false);
}

Curve Curve::close_loop(const Curve& a) {
    if (a.closed_) return a;
    return from_polyline(*a.s_, a.pts_, true);
}

std::vector<Curve> iso_contours(const Surface& s, const std::vector<double>& node_values,
                                double level) {
    int V = s.vertex_count(), F = s.face_count();
    if (int(node_values.size()) < V)
        throw std::invalid_argument("iso_contours: field shorter than vertex count");
    // nudge the level off exact vertex hits so every crossing is transversal
    double lo = node_values[0], hi = node_values[0];
    for (int v = 1; v < V; ++v) {
        lo = std::min(lo, node_values[v]);
        hi = std::max(hi, node_values[v]);
    }
    double step = std::max(1e-12, 1e-9 * (hi - lo));
    for (int guard = 0; guard < 16; ++guard) {
        bool hit = false;
        for (int v = 0; v < V && !hit; ++v)
            if (std::abs(node_values[v] - level) < step * 0.5) hit = true;
        if (!hit) break;
        level += step;
    }

    const auto& faces = s.faces();
    std::vector<std::array<int, 2>> face_cross(F, {-1, -1});
    std::vector<SurfacePoint> edge_pt(s.edges().size());
    std::vector<char> edge_has(s.edges().size(), 0);
    for (int f = 0; f < F; ++f) {
        int cnt = 0;
        for (int k = 0; k < 3; ++k) {
            int a = faces[f][k], b = faces[f][(k + 1) % 3];
            if ((node_values[a] - level) * (node_values[b] - level) >= 0) continue;
            int e = s.edge_between(a, b);
            if (!edge_has[e]) {
                const Surface::Edge& ed = s.edges()[e];
                double t = (level - node_values[ed.v0]) / (node_values[ed.v1] - node_values[ed.v0]);
                edge_pt[e] = s.edge_point(e, std::clamp(t, 1e-9, 1.0 - 1e-9));
                edge_has[e] = 1;
            }
            if (cnt < 2) face_cross[f][cnt] = e;
            ++cnt;
        }
        if (cnt != 2) face_cross[f] = {-1, -1};  // degenerate; chains skip it
    }

    std::vector<Curve> out;
    std::vector<char> used(F, 0);
    for (int f0 = 0; f0 < F; ++f0) {
        if (used[f0] || face_cross[f0][0] < 0) continue;
        std::vector<SurfacePoint> pts;
        int cur = f0, e_in = face_cross[f0][0];
        pts.push_back(edge_pt[e_in]);
        bool ok = true;
        while (true) {
            used[cur] = 1;
            int e_out = face_cross[cur][0] == e_in ? face_cross[cur][1] : face_cross[cur][0];
            pts.push_back(edge_pt[e_out]);
            const Surface::Edge& ed = s.edges()[e_out];
            int next = ed.face[0] == cur ? ed.face[1] : ed.face[0];
            if (next == f0) break;
            if (face_cross[next][0] < 0 || used[next]) {
                ok = false;  // broken chain through a degenerate face
                break;
            }
            e_in = e_out;
            cur = next;
        }
        if (ok && pts.size() >= 4) out.push_back(Curve::from_polyline(s, std::move(pts), true));
    }
    std::sort(out.begin(), out.end(),
              [](const Curve& a, const Curve& b) { return a.length() > b.length(); });
    return out;
}

double sup_distance(const Curve& a, const Curve& b, int samples) {
    if (&a.surface() != &b.surface())
        throw std::logic_error("sup_distance: curves on different surfaces");
    if (a.closed() != b.closed())
        throw std::logic_error("sup_distance: cannot compare open with closed");
    const Surface& s = a.surface();
    double best = 0;
    int n = a.closed() ? samples : samples + 1;
    for (int i = 0; i < n; ++i) {
        double t = a.closed() ? double(i) / samples : double(i) / samples;
        best = std::max(best, s.distance(a.eval(t), b.eval(t)));
    }
    return best;
}

}  // namespace loopgeo
