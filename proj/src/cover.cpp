#include "loopgeo/cover.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace loopgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// circumcenter of face f in layout coordinates, clamped into the face
SurfacePoint face_circumcenter(const Surface& s, int f) {
    Vec2 A = s.layout_coords(f, s.face_point(f, 1, 0, 0));
    Vec2 B = s.layout_coords(f, s.face_point(f, 0, 1, 0));
    Vec2 C = s.layout_coords(f, s.face_point(f, 0, 0, 1));
    double d = 2.0 * ((B.x - A.x) * (C.y - A.y) - (B.y - A.y) * (C.x - A.x));
    double a2 = A.dot(A), b2 = B.dot(B), c2 = C.dot(C);
    Vec2 u{(a2 * (B.y - C.y) + b2 * (C.y - A.y) + c2 * (A.y - B.y)) / d,
           (a2 * (C.x - B.x) + b2 * (A.x - C.x) + c2 * (B.x - A.x)) / d};
    SurfacePoint p = s.point_from_layout(f, u);  // canonicalize clamps outside points
    return p;
}

}  // namespace

Cover build_cover(const Surface& s, double eps, size_t max_centers) {
    if (!(eps > 0)) throw std::invalid_argument("build_cover: eps must be positive");

    Cover c;
    c.surface = &s;
    c.eps = eps;
    c.pack_radius = eps / 12.0;
    c.cover_radius = eps / 6.0;

    int V = s.vertex_count();
    int nn = s.graph_node_count();
    std::vector<double> nearest(nn, kInf);
    std::vector<int> label(nn, -1);

    auto add_center = [&](int v, double limit) {
        int idx = int(c.centers.size());
        c.center_vertices.push_back(v);
        c.centers.push_back(s.vertex_point(v));
        std::vector<double> fld = s.distance_field(s.vertex_point(v), limit);
        for (int u = 0; u < nn; ++u) {
            if (fld[u] < nearest[u]) {
                nearest[u] = fld[u];
                label[u] = idx;
            }
        }
    };

    add_center(0, kInf);
    for (;;) {
        // farthest uncovered vertex drives the next insertion
        double far = 0;
        int arg = -1;
        for (int v = 0; v < V; ++v)
            if (nearest[v] > far) {
                far = nearest[v];
                arg = v;
            }
        if (far <= c.cover_radius || arg < 0) break;
        if (c.centers.size() >= max_centers)
            throw std::runtime_error("build_cover: eps too small, center cap exceeded");
        // updates beyond the current farthest value cannot matter
        add_center(arg, far);
    }

    c.field.dist = std::move(nearest);
    c.field.label = std::move(label);
    c.nerve_edges = compute_nerve(s, c.centers, eps / 2.0);
    return c;
}

std::vector<NerveEdge> compute_nerve(const Surface& s, const std::vector<SurfacePoint>& centers,
                                     double threshold) {
    int n = int(centers.size());
    std::vector<NerveEdge> edges;
    if (n <= 40) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double d = s.distance(centers[i], centers[j]);
                if (d <= threshold) edges.push_back({i, j, d});
            }
        return edges;
    }
    // prefilter with truncated graph fields (graph metric >= true metric),
    // then confirm with the straightened solver
    double limit = threshold * 1.1 + 2.0 * s.mean_edge_length();
    for (int i = 0; i < n; ++i) {
        std::vector<double> fld = s.distance_field(centers[i], limit);
        for (int j = i + 1; j < n; ++j) {
            if (s.field_distance(fld, centers[j]) > limit) continue;
            double d = s.distance(centers[i], centers[j]);
            if (d <= threshold) edges.push_back({i, j, d});
        }
    }
    return edges;
}

bool cover_is_valid(const Cover& c, double slack) {
    const Surface& s = *c.surface;
    for (int v = 0; v < s.vertex_count(); ++v)
        if (c.field.dist[v] > c.cover_radius + slack) return false;
    for (int f = 0; f < s.face_count(); ++f) {
        SurfacePoint cc = face_circumcenter(s, f);
        if (s.field_distance(c.field.dist, cc) > c.cover_radius + slack) return false;
    }
    return true;
}

Curve nerve_geodesic(const Cover& c, int edge_index) {
    const NerveEdge& e = c.nerve_edges.at(edge_index);
    return Curve::through(*c.surface, {c.centers[e.i], c.centers[e.j]}, false);
}

}  // namespace loopgeo
