#include "loopgeo/fixtures.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace loopgeo {

namespace {

Vec3 normalized(const Vec3& v) {
    double n = v.norm();
    return v * (1.0 / n);
}

void icosahedron(std::vector<Vec3>& pos, std::vector<std::array<int, 3>>& faces) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    pos = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
           {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    for (Vec3& p : pos) p = normalized(p);
    faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
}

}  // namespace

Surface make_icosphere(int subdiv, double radius, double tol_geo, int steiner) {
    if (subdiv < 0 || subdiv > 7) throw std::invalid_argument("make_icosphere: subdiv out of range");
    std::vector<Vec3> pos;
    std::vector<std::array<int, 3>> faces;
    icosahedron(pos, faces);
    for (int s = 0; s < subdiv; ++s) {
        std::map<std::pair<int, int>, int> mid;
        auto midpoint = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = mid.find(key);
            if (it != mid.end()) return it->second;
            int id = int(pos.size());
            pos.push_back(normalized(pos[a] + pos[b]));
            mid[key] = id;
            return id;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            int ab = midpoint(f[0], f[1]), bc = midpoint(f[1], f[2]), ca = midpoint(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces.swap(next);
    }
    for (Vec3& p : pos) p = p * radius;
    return Surface(std::move(pos), std::move(faces), tol_geo, steiner);
}

Surface make_ellipsoid(int subdiv, double ax, double ay, double az, double tol_geo, int steiner) {
    Surface sphere = make_icosphere(subdiv, 1.0, tol_geo, steiner);
    std::vector<Vec3> pos = sphere.positions();
    for (Vec3& p : pos) {
        p.x *= ax;
        p.y *= ay;
        p.z *= az;
    }
    return Surface(std::move(pos), sphere.faces(), tol_geo, steiner);
}

std::vector<std::array<double, 3>> flat_torus_edge_lengths(int n) {
    if (n < 3) throw std::invalid_argument("flat torus grid needs n >= 3");
    double h = 1.0 / n;
    auto vid = [&](int i, int j) { return double(((i % n + n) % n) * n + ((j % n + n) % n)); };
    std::vector<std::array<double, 3>> rows;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            rows.push_back({vid(i, j), vid(i + 1, j), h});
            rows.push_back({vid(i, j), vid(i, j + 1), h});
            rows.push_back({vid(i, j), vid(i + 1, j + 1), h * std::sqrt(2.0)});
        }
    return rows;
}

Surface make_flat_torus(int n, double tol_geo, int steiner) {
    if (n < 3) throw std::invalid_argument("flat torus grid needs n >= 3");
    std::vector<Vec3> pos(n * n);
    const double R = 1.0, r = 0.35;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double th = 2.0 * M_PI * i / n, ph = 2.0 * M_PI * j / n;
            pos[i * n + j] = {(R + r * std::cos(ph)) * std::cos(th),
                             (R + r * std::cos(ph)) * std::sin(th), r * std::sin(ph)};
        }
    auto vid = [&](int i, int j) { return ((i % n + n) % n) * n + ((j % n + n) % n); };
    std::vector<std::array<int, 3>> faces;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
            faces.push_back({a, b, c});
            faces.push_back({a, c, d});
        }
    Surface s(std::move(pos), std::move(faces), tol_geo, steiner);
    for (const auto& row : flat_torus_edge_lengths(n))
        s.override_edge_length(int(row[0]), int(row[1]), row[2]);
    s.rebuild();
    return s;
}

SurfacePoint random_surface_point(const Surface& s, std::mt19937& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double target = uni(rng) * s.total_area();
    int f = 0;
    double acc = 0;
    for (; f < s.face_count() - 1; ++f) {
        acc += s.face_area(f);
        if (acc >= target) break;
    }
    double r1 = std::sqrt(uni(rng)), r2 = uni(rng);
    return s.face_point(f, 1.0 - r1, r1 * (1.0 - r2), r1 * r2);
}

Curve random_closed_curve(const Surface& s, double max_len, int k, std::mt19937& rng) {
    if (k < 2 || !(max_len > 0)) throw std::invalid_argument("random_closed_curve: bad inputs");
    std::uniform_int_distribution<int> pickv(0, s.vertex_count() - 1);
    double radius = max_len / (2.0 * k);
    for (int attempt = 0; attempt < 16; ++attempt) {
        int c = pickv(rng);
        std::vector<double> fld = s.distance_field(s.vertex_point(c), radius);
        std::vector<int> inside;
        for (int v = 0; v < s.vertex_count(); ++v)
            if (fld[v] <= radius) inside.push_back(v);
        if (int(inside.size()) < 3) {
            radius *= 1.5;  // mesh too coarse at this scale; widen, length re-checked below
            continue;
        }
        std::uniform_int_distribution<size_t> pick(0, inside.size() - 1);
        std::vector<SurfacePoint> bps;
        for (int i = 0; i < k; ++i) {
            int v = inside[pick(rng)];
            if (!bps.empty() && s.in_face_distance(bps.back(), s.vertex_point(v)) == 0.0) continue;
            bps.push_back(s.vertex_point(v));
        }
        if (bps.size() < 2) continue;
        Curve curve = Curve::through(s, bps, true);
        if (curve.length() <= max_len && curve.length() > 0) return curve;
        radius *= 0.7;
    }
    throw std::runtime_error("random_closed_curve: failed to hit the length budget");
}

}  // namespace loopgeo
