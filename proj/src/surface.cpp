#include "loopgeo/surface.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace loopgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBaryEps = 1e-9;

double cross2(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (uint64_t(a) << 32) | uint64_t(b);
}

}  // namespace

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }
double Vec2::norm() const { return std::sqrt(x * x + y * y); }

bool SurfacePoint::valid() const {
    if (face < 0) return false;
    double s = 0;
    for (double b : bary) {
        if (!(b >= -1e-9)) return false;
        s += b;
    }
    return std::fabs(s - 1.0) <= 1e-9;
}

void SurfacePoint::canonicalize() {
    double s = 0;
    for (double& b : bary) {
        if (b < 0) b = 0;
        s += b;
    }
    if (s <= 0) throw std::invalid_argument("SurfacePoint: degenerate barycentrics");
    for (double& b : bary) b /= s;
}

Surface::Surface(std::vector<Vec3> positions, std::vector<std::array<int, 3>> faces,
                 double tol_geo, int steiner_per_edge)
    : positions_(std::move(positions)),
      faces_(std::move(faces)),
      tol_geo_(tol_geo),
      steiner_k_(steiner_per_edge) {
    if (tol_geo_ <= 0) throw std::invalid_argument("Surface: tol_geo must be positive");
    if (steiner_k_ < 0) throw std::invalid_argument("Surface: steiner_per_edge must be >= 0");
    build_topology();
    build_layouts();
    validate();
    build_graph();
}

void Surface::build_topology() {
    int V = vertex_count();
    edges_.clear();
    face_edge_.assign(faces_.size(), {-1, -1, -1});
    vertex_faces_.assign(V, {});
    std::unordered_map<uint64_t, int> edge_of;
    std::unordered_map<uint64_t, int> directed;  // orientability check

    for (int f = 0; f < face_count(); ++f) {
        const auto& F = faces_[f];
        for (int k = 0; k < 3; ++k) {
            int a = F[k], b = F[(k + 1) % 3];
            if (a < 0 || a >= V || b < 0 || b >= V || a == b)
                throw std::runtime_error("Surface: invalid face vertex indices");
            uint64_t dk = (uint64_t(a) << 32) | uint64_t(b);
            if (directed.count(dk))
                throw std::runtime_error("Surface: repeated directed edge (non-orientable or non-manifold)");
            directed[dk] = f;

            uint64_t key = edge_key(a, b);
            auto it = edge_of.find(key);
            int e;
            if (it == edge_of.end()) {
                e = int(edges_.size());
                Edge ed;
                ed.v0 = std::min(a, b);
                ed.v1 = std::max(a, b);
                ed.face[0] = f;
                ed.len = (positions_[a] - positions_[b]).norm();
                edges_.push_back(ed);
                edge_of[key] = e;
            } else {
                e = it->second;
                if (edges_[e].face[1] != -1)
                    throw std::runtime_error("Surface: edge shared by more than two faces");
                edges_[e].face[1] = f;
            }
            face_edge_[f][k] = e;
        }
        for (int k = 0; k < 3; ++k) vertex_faces_[F[k]].push_back(f);
    }
    for (const Edge& e : edges_) {
        if (e.face[1] == -1) throw std::runtime_error("Surface: boundary edge found (surface must be closed)");
        if (!(e.len > 0)) throw std::runtime_error("Surface: zero-length edge");
    }

    // connectivity over the face adjacency graph
    if (!faces_.empty()) {
        std::vector<char> seen(faces_.size(), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        size_t reached = 1;
        while (!stack.empty()) {
            int f = stack.back();
            stack.pop_back();
            for (int k = 0; k < 3; ++k) {
                const Edge& e = edges_[face_edge_[f][k]];
                int g = e.face[0] == f ? e.face[1] : e.face[0];
                if (!seen[g]) {
                    seen[g] = 1;
                    ++reached;
                    stack.push_back(g);
                }
            }
        }
        if (reached != faces_.size()) throw std::runtime_error("Surface: mesh is not connected");
    }
}

void Surface::build_layouts() {
    layout_.assign(faces_.size(), {});
    for (int f = 0; f < face_count(); ++f) {
        double l0 = edges_[face_edge_[f][0]].len;  // v0-v1
        double l1 = edges_[face_edge_[f][1]].len;  // v1-v2
        double l2 = edges_[face_edge_[f][2]].len;  // v2-v0
        double x = (l0 * l0 + l2 * l2 - l1 * l1) / (2.0 * l0);
        double y2 = l2 * l2 - x * x;
        if (!(y2 > 0))
            throw std::runtime_error("Surface: face violates the strict triangle inequality");
        layout_[f] = {Vec2{0, 0}, Vec2{l0, 0}, Vec2{x, std::sqrt(y2)}};
    }
}

void Surface::validate() const {
    // topology/metric checks run during construction; nothing extra yet
}

void Surface::override_edge_length(int v0, int v1, double len) {
    int e = edge_between(v0, v1);
    if (e < 0) throw std::invalid_argument("Surface: no such edge to override");
    if (!(len > 0)) throw std::invalid_argument("Surface: edge length must be positive");
    edges_[e].len = len;
    positions_consistent_ = false;
}

void Surface::override_edge_lengths(const std::vector<std::array<double, 3>>& triples) {
    for (const auto& t : triples) override_edge_length(int(t[0]), int(t[1]), t[2]);
}

void Surface::rebuild() {
    build_layouts();
    build_graph();
}

int Surface::edge_between(int v0, int v1) const {
    // scan the smaller vertex ring; edges_ has no hash map retained
    if (v0 < 0 || v0 >= vertex_count() || v1 < 0 || v1 >= vertex_count()) return -1;
    for (int f : vertex_faces_[v0])
        for (int k = 0; k < 3; ++k) {
            const Edge& e = edges_[face_edge_[f][k]];
            if ((e.v0 == std::min(v0, v1)) && (e.v1 == std::max(v0, v1))) return face_edge_[f][k];
        }
    return -1;
}

double Surface::face_area(int f) const {
    const auto& L = layout_[f];
    return 0.5 * std::fabs(cross2(L[1] - L[0], L[2] - L[0]));
}

double Surface::total_area() const {
    double a = 0;
    for (int f = 0; f < face_count(); ++f) a += face_area(f);
    return a;
}

double Surface::mean_edge_length() const {
    double s = 0;
    for (const Edge& e : edges_) s += e.len;
    return s / double(edges_.size());
}

Vec3 Surface::position(const SurfacePoint& p) const {
    const auto& F = faces_[p.face];
    return positions_[F[0]] * p.bary[0] + positions_[F[1]] * p.bary[1] + positions_[F[2]] * p.bary[2];
}

SurfacePoint Surface::vertex_point(int v) const {
    if (v < 0 || v >= vertex_count()) throw std::out_of_range("Surface: vertex index");
    int f = vertex_faces_[v][0];
    SurfacePoint p;
    p.face = f;
    p.bary = {0, 0, 0};
    for (int k = 0; k < 3; ++k)
        if (faces_[f][k] == v) p.bary[k] = 1.0;
    return p;
}

SurfacePoint Surface::edge_point(int e, double t) const {
    const Edge& ed = edges_[e];
    t = std::clamp(t, 0.0, 1.0);
    int f = ed.face[0];
    SurfacePoint p;
    p.face = f;
    p.bary = {0, 0, 0};
    for (int k = 0; k < 3; ++k) {
        if (faces_[f][k] == ed.v0) p.bary[k] += 1.0 - t;
        if (faces_[f][k] == ed.v1) p.bary[k] += t;
    }
    return p;
}

SurfacePoint Surface::face_point(int f, double b0, double b1, double b2) const {
    SurfacePoint p;
    p.face = f;
    p.bary = {b0, b1, b2};
    p.canonicalize();
    return p;
}

std::vector<int> Surface::faces_of(const SurfacePoint& p) const {
    const auto& F = faces_[p.face];
    for (int k = 0; k < 3; ++k) {
        if (p.bary[k] >= 1.0 - kBaryEps) return vertex_faces_[F[k]];
    }
    for (int k = 0; k < 3; ++k) {
        if (p.bary[k] <= kBaryEps) {
            // on the edge opposite corner k, i.e. between corners k+1, k+2
            int e = face_edge_[p.face][(k + 1) % 3];
            const Edge& ed = edges_[e];
            return {ed.face[0], ed.face[1]};
        }
    }
    return {p.face};
}

int Surface::common_face(const SurfacePoint& a, const SurfacePoint& b) const {
    std::vector<int> fa = faces_of(a), fb = faces_of(b);
    for (int f : fa)
        for (int g : fb)
            if (f == g) return f;
    return -1;
}

Vec2 Surface::layout_coords(int f, const SurfacePoint& p) const {
    if (p.face == f) {
        const auto& L = layout_[f];
        return L[0] * p.bary[0] + L[1] * p.bary[1] + L[2] * p.bary[2];
    }
    // p lies on a vertex or edge of f but is expressed in another face:
    // re-express through shared vertices
    const auto& Fp = faces_[p.face];
    const auto& Ff = faces_[f];
    // vertex case
    for (int k = 0; k < 3; ++k)
        if (p.bary[k] >= 1.0 - kBaryEps) {
            for (int j = 0; j < 3; ++j)
                if (Ff[j] == Fp[k]) return layout_[f][j];
        }
    // edge case: weights on the two shared vertices
    Vec2 out{0, 0};
    double covered = 0;
    for (int k = 0; k < 3; ++k) {
        if (p.bary[k] <= kBaryEps) continue;
        bool found = false;
        for (int j = 0; j < 3; ++j)
            if (Ff[j] == Fp[k]) {
                out = out + layout_[f][j] * p.bary[k];
                covered += p.bary[k];
                found = true;
            }
        if (!found) throw std::invalid_argument("Surface: point does not lie in requested face");
    }
    return out * (1.0 / covered);
}

SurfacePoint Surface::point_from_layout(int f, const Vec2& c) const {
    const auto& L = layout_[f];
    double det = cross2(L[1] - L[0], L[2] - L[0]);
    double b1 = cross2(c - L[0], L[2] - L[0]) / det;
    double b2 = cross2(L[1] - L[0], c - L[0]) / det;
    SurfacePoint p;
    p.face = f;
    p.bary = {1.0 - b1 - b2, b1, b2};
    p.canonicalize();
    return p;
}

double Surface::in_face_distance(const SurfacePoint& a, const SurfacePoint& b) const {
    int f = common_face(a, b);
    if (f < 0) return -1.0;
    return (layout_coords(f, a) - layout_coords(f, b)).norm();
}

double Surface::polyline_length(const std::vector<SurfacePoint>& pts) const {
    double len = 0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        double d = in_face_distance(pts[i], pts[i + 1]);
        if (d < 0)
            throw std::runtime_error("Surface: polyline has consecutive points in disjoint faces");
        len += d;
    }
    return len;
}

// ---------------------------------------------------------------- graph

void Surface::build_graph() {
    int V = vertex_count();
    int K = steiner_k_;
    int nn = V + K * int(edges_.size());
    node_pos_.assign(nn, {});
    node_edge_.assign(nn, -1);
    node_frac_.assign(nn, 0.0);
    for (int v = 0; v < V; ++v) node_pos_[v] = positions_[v];
    for (int e = 0; e < int(edges_.size()); ++e) {
        const Edge& ed = edges_[e];
        for (int j = 0; j < K; ++j) {
            int id = V + e * K + j;
            double t = double(j + 1) / double(K + 1);
            node_edge_[id] = e;
            node_frac_[id] = t;
            node_pos_[id] = positions_[ed.v0] * (1.0 - t) + positions_[ed.v1] * t;
        }
    }

    face_nodes_.assign(faces_.size(), {});
    std::vector<int> tag;  // bitmask of face edges a boundary node lies on
    std::vector<std::vector<std::pair<int, double>>> adj(nn);
    auto add_arc = [&](int a, int b, double w) {
        adj[a].push_back({b, w});
        adj[b].push_back({a, w});
    };

    // chains along each edge (added once globally)
    for (int e = 0; e < int(edges_.size()); ++e) {
        const Edge& ed = edges_[e];
        double step = ed.len / double(K + 1);
        int prev = ed.v0;
        for (int j = 0; j < K; ++j) {
            int id = V + e * K + j;
            add_arc(prev, id, step);
            prev = id;
        }
        add_arc(prev, ed.v1, step);
    }

    for (int f = 0; f < face_count(); ++f) {
        auto& fn = face_nodes_[f];
        tag.clear();
        for (int k = 0; k < 3; ++k) {
            fn.push_back({faces_[f][k], layout_[f][k]});
            tag.push_back((1 << k) | (1 << ((k + 2) % 3)));
        }
        for (int k = 0; k < 3; ++k) {
            int e = face_edge_[f][k];
            bool fwd = faces_[f][k] == edges_[e].v0;
            Vec2 A = layout_[f][k], B = layout_[f][(k + 1) % 3];
            for (int j = 0; j < K; ++j) {
                int id = V + e * K + j;
                double t = node_frac_[id];            // along v0 -> v1
                double tf = fwd ? t : 1.0 - t;        // along face direction
                fn.push_back({id, A + (B - A) * tf});
                tag.push_back(1 << k);
            }
        }
        // cross-face arcs between boundary nodes on distinct edges
        for (size_t i = 0; i < fn.size(); ++i)
            for (size_t j = i + 1; j < fn.size(); ++j) {
                if (tag[i] & tag[j]) continue;
                add_arc(fn[i].node, fn[j].node, (fn[i].coord - fn[j].coord).norm());
            }
    }

    adj_off_.assign(nn + 1, 0);
    for (int i = 0; i < nn; ++i) adj_off_[i + 1] = adj_off_[i] + int(adj[i].size());
    adj_to_.resize(adj_off_[nn]);
    adj_w_.resize(adj_off_[nn]);
    for (int i = 0; i < nn; ++i) {
        int o = adj_off_[i];
        for (const auto& [to, w] : adj[i]) {
            adj_to_[o] = to;
            adj_w_[o] = w;
            ++o;
        }
    }
}

struct Surface::Scratch {
    std::vector<double> dist;
    std::vector<int> prev;
    std::vector<int> label;
    std::vector<uint32_t> stamp;
    uint32_t cur = 0;
};

Surface::Scratch& Surface::scratch() const {
    static thread_local std::unordered_map<const Surface*, Scratch> pool;
    Scratch& sc = pool[this];
    if (sc.dist.size() != node_pos_.size()) {
        sc.dist.assign(node_pos_.size(), kInf);
        sc.prev.assign(node_pos_.size(), -1);
        sc.label.assign(node_pos_.size(), -1);
        sc.stamp.assign(node_pos_.size(), 0);
        sc.cur = 0;
    }
    if (++sc.cur == 0) {
        std::fill(sc.stamp.begin(), sc.stamp.end(), 0u);
        sc.cur = 1;
    }
    return sc;
}

namespace {
using HeapItem = std::pair<double, int>;
using MinHeap = std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>>;
}  // namespace

double Surface::search(const SurfacePoint& p, const SurfacePoint& q,
                       std::vector<int>* node_path) const {
    Scratch& sc = scratch();
    MinHeap heap;
    auto relax = [&](int node, double d, int from) {
        if (sc.stamp[node] != sc.cur || d < sc.dist[node]) {
            sc.stamp[node] = sc.cur;
            sc.dist[node] = d;
            sc.prev[node] = from;
            return true;
        }
        return false;
    };

    bool use_astar = positions_consistent_;
    Vec3 qpos = position(q);
    auto h = [&](int node) { return use_astar ? (node_pos_[node] - qpos).norm() : 0.0; };

    double best = kInf;
    int best_exit = -1;
    // direct in-face segment (triangles are convex, so it stays inside)
    {
        double d = in_face_distance(p, q);
        if (d >= 0) best = d;
    }
    std::unordered_map<int, double> exit_cost;
    for (int f : faces_of(q)) {
        Vec2 qc = layout_coords(f, q);
        for (const FaceNode& fn : face_nodes_[f]) {
            double c = (fn.coord - qc).norm();
            auto it = exit_cost.find(fn.node);
            if (it == exit_cost.end() || c < it->second) exit_cost[fn.node] = c;
        }
    }
    for (int f : faces_of(p)) {
        Vec2 pc = layout_coords(f, p);
        for (const FaceNode& fn : face_nodes_[f]) {
            double d = (fn.coord - pc).norm();
            if (relax(fn.node, d, -1)) heap.push({d + h(fn.node), fn.node});
        }
    }

    std::vector<char> settled;  // lazy-deletion guard via dist comparison instead
    while (!heap.empty()) {
        auto [key, u] = heap.top();
        heap.pop();
        if (key >= best - 1e-15) break;
        double du = sc.dist[u];
        if (sc.stamp[u] != sc.cur || key > du + h(u) + 1e-12) continue;  // stale entry
        auto it = exit_cost.find(u);
        if (it != exit_cost.end() && du + it->second < best) {
            best = du + it->second;
            best_exit = u;
        }
        for (int o = adj_off_[u]; o < adj_off_[u + 1]; ++o) {
            int v = adj_to_[o];
            double dv = du + adj_w_[o];
            if (relax(v, dv, u)) heap.push({dv + h(v), v});
        }
    }

    if (node_path) {
        node_path->clear();
        for (int u = best_exit; u != -1; u = sc.prev[u]) node_path->push_back(u);
        std::reverse(node_path->begin(), node_path->end());
    }
    return best;
}

SurfacePoint Surface::node_point(int node) const {
    if (node < vertex_count()) return vertex_point(node);
    return edge_point(node_edge_[node], node_frac_[node]);
}

GeodesicPath Surface::geodesic(const SurfacePoint& p, const SurfacePoint& q) const {
    std::vector<int> nodes;
    search(p, q, &nodes);
    GeodesicPath path;
    path.points.push_back(p);
    for (int n : nodes) path.points.push_back(node_point(n));
    path.points.push_back(q);
    straighten(path);
    return path;
}

double Surface::distance(const SurfacePoint& p, const SurfacePoint& q) const {
    return geodesic(p, q).length;
}

bool Surface::shortcut_around_vertex(const SurfacePoint& a, const SurfacePoint& x,
                                     const SurfacePoint& b,
                                     std::vector<SurfacePoint>& out) const {
    int vk = -1;
    for (int k = 0; k < 3; ++k)
        if (x.bary[k] >= 1.0 - kBaryEps) vk = k;
    if (vk < 0) return false;
    int v = faces_[x.face][vk];
    int f0 = common_face(a, x), fm = common_face(x, b);
    if (f0 < 0 || fm < 0 || f0 == fm) return false;

    auto corner = [&](int f, int w) -> Vec2 {
        for (int k = 0; k < 3; ++k)
            if (faces_[f][k] == w) return layout_[f][k];
        return {};
    };
    auto edges_at_v = [&](int f, int (&es)[2]) {
        int c = 0;
        for (int j = 0; j < 3 && c < 2; ++j) {
            int e = face_edge_[f][j];
            if (edges_[e].v0 == v || edges_[e].v1 == v) es[c++] = e;
        }
        return c == 2;
    };
    auto far_end = [&](int e) { return edges_[e].v0 == v ? edges_[e].v1 : edges_[e].v0; };
    auto angle = [](const Vec2& u, const Vec2& w) {
        double d = u.dot(w) / (u.norm() * w.norm());
        return std::acos(std::clamp(d, -1.0, 1.0));
    };

    Vec2 va = layout_coords(f0, a) - corner(f0, v);
    Vec2 vb = layout_coords(fm, b) - corner(fm, v);
    double ra = va.norm(), rb = vb.norm();
    if (ra < 1e-12 || rb < 1e-12) return false;

    int e0s[2];
    if (!edges_at_v(f0, e0s)) return false;
    size_t ring = vertex_faces_[v].size();
    double best_gain = 1e-12;
    bool found = false;

    // unfold the star flat on either side of v; a total turning angle below
    // pi means the straight chord from a to b undercuts the corner at v
    for (int dir = 0; dir < 2; ++dir) {
        int e = e0s[dir];
        double theta = angle(va, corner(f0, far_end(e)) - corner(f0, v));
        std::vector<std::pair<int, double>> cross = {{e, theta}};
        int f = edges_[e].face[0] == f0 ? edges_[e].face[1] : edges_[e].face[0];
        bool ok = theta < M_PI;
        while (ok && f != fm && cross.size() <= ring) {
            int es[2];
            if (!edges_at_v(f, es)) {
                ok = false;
                break;
            }
            int en = es[0] == e ? es[1] : es[0];
            theta += angle(corner(f, far_end(e)) - corner(f, v),
                           corner(f, far_end(en)) - corner(f, v));
            if (theta >= M_PI) {
                ok = false;
                break;
            }
            cross.push_back({en, theta});
            e = en;
            f = edges_[e].face[0] == f ? edges_[e].face[1] : edges_[e].face[0];
        }
        if (!ok || f != fm || cross.size() > ring) continue;
        double theta_b = theta + angle(corner(fm, far_end(e)) - corner(fm, v), vb);
        if (theta_b >= M_PI - 1e-9) continue;
        double chord =
            std::sqrt(std::max(0.0, ra * ra + rb * rb - 2.0 * ra * rb * std::cos(theta_b)));
        double gain = ra + rb - chord;
        if (gain <= best_gain) continue;
        // where the chord crosses each star edge, in polar coordinates at v
        std::vector<SurfacePoint> chain;
        bool fits = true;
        for (auto [ce, th] : cross) {
            double denom = ra * std::sin(th) + rb * std::sin(theta_b - th);
            if (denom <= 1e-300) {
                fits = false;
                break;
            }
            double r = ra * rb * std::sin(theta_b) / denom;
            const Edge& ed = edges_[ce];
            if (!(r > 1e-9 && r < ed.len * (1.0 - 1e-9))) {
                fits = false;
                break;
            }
            double t = ed.v0 == v ? r / ed.len : 1.0 - r / ed.len;
            chain.push_back(edge_point(ce, t));
        }
        if (!fits) continue;
        best_gain = gain;
        out = std::move(chain);
        found = true;
    }
    return found;
}

void Surface::straighten(GeodesicPath& path, int max_sweeps) const {
    auto& pts = path.points;
    // drop consecutive duplicates
    auto dedup = [&]() {
        std::vector<SurfacePoint> out;
        for (const SurfacePoint& sp : pts) {
            if (!out.empty()) {
                double d = in_face_distance(out.back(), sp);
                if (d >= 0 && d < 1e-12) continue;
            }
            out.push_back(sp);
        }
        pts.swap(out);
    };
    dedup();
    double len = polyline_length(pts);
    for (int sweep = 0; sweep < max_sweeps && pts.size() > 2; ++sweep) {
        // removal pass: a point whose neighbors share one of its faces is redundant
        {
            std::vector<SurfacePoint> out;
            out.push_back(pts.front());
            for (size_t i = 1; i + 1 < pts.size(); ++i) {
                int f1 = common_face(out.back(), pts[i]);
                int f2 = common_face(pts[i], pts[i + 1]);
                if (f1 >= 0 && f1 == f2) continue;
                // neighbors may directly share a face even when f1 != f2
                if (in_face_distance(out.back(), pts[i + 1]) >= 0) continue;
                out.push_back(pts[i]);
            }
            out.push_back(pts.back());
            pts.swap(out);
        }
        // reposition pass: slide interior edge points within their unfolded quads
        for (size_t i = 1; i + 1 < pts.size(); ++i) {
            SurfacePoint& x = pts[i];
            // locate the edge x lies on (skip vertices and interior points)
            int zero = -1, nzero = 0;
            for (int k = 0; k < 3; ++k) {
                if (x.bary[k] <= kBaryEps) {
                    zero = k;
                    ++nzero;
                }
            }
            if (nzero != 1) continue;
            int e = face_edge_[x.face][(zero + 1) % 3];
            const Edge& ed = edges_[e];
            int f1 = common_face(pts[i - 1], x);
            int f2 = common_face(x, pts[i + 1]);
            if (f1 < 0 || f2 < 0 || f1 == f2) continue;
            if ((f1 != ed.face[0] && f1 != ed.face[1]) || (f2 != ed.face[0] && f2 != ed.face[1]))
                continue;
            // edge endpoints in each face frame
            SurfacePoint sv0 = vertex_point(ed.v0), sv1 = vertex_point(ed.v1);
            Vec2 Q0 = layout_coords(f1, sv0), Q1 = layout_coords(f1, sv1);
            Vec2 P0 = layout_coords(f2, sv0), P1 = layout_coords(f2, sv1);
            Vec2 u1 = (Q1 - Q0) * (1.0 / ed.len), u2 = (P1 - P0) * (1.0 / ed.len);
            Vec2 n1{-u1.y, u1.x};
            // unfold f2 across e into the f1 frame, flipping sides
            Vec2 a2 = layout_coords(f1, pts[i - 1]);
            Vec2 braw = layout_coords(f2, pts[i + 1]) - P0;
            double s = braw.dot(u2), tp = cross2(u2, braw);
            // third corners must land on opposite sides of the edge line
            Vec2 c1 = {0, 0}, c2raw = {0, 0};
            for (int k = 0; k < 3; ++k) c1 = c1 + layout_[f1][k];
            for (int k = 0; k < 3; ++k) c2raw = c2raw + layout_[f2][k];
            double side1 = cross2(u1, c1 * (1.0 / 3.0) - Q0);
            double side2raw = cross2(u2, c2raw * (1.0 / 3.0) - P0);
            double sign = (side1 * side2raw > 0) ? -1.0 : 1.0;
            Vec2 b2 = Q0 + u1 * s + n1 * (sign * tp);
            double ca = cross2(u1, a2 - Q0), cb = cross2(u1, b2 - Q0);
            if (std::fabs(ca - cb) < 1e-15) continue;
            double sseg = ca / (ca - cb);
            Vec2 X = a2 + (b2 - a2) * sseg;
            double t_raw = (X - Q0).dot(u1) / ed.len;
            double t = std::clamp(t_raw, 1e-9, 1.0 - 1e-9);
            Vec2 Xc = Q0 + u1 * (t * ed.len);
            double old_local = (a2 - layout_coords(f1, x)).norm() +
                               (layout_coords(f1, x) - b2).norm();
            double new_local = (a2 - Xc).norm() + (Xc - b2).norm();
            if (new_local < old_local) x = edge_point(e, t);
            if (t_raw < 0.0 || t_raw > 1.0) {
                // the optimum lies past an edge endpoint: land on the vertex
                // so the vertex pass below can route around it
                Vec2 Xv = t_raw < 0.0 ? Q0 : Q1;
                if ((a2 - Xv).norm() + (Xv - b2).norm() < new_local)
                    x = vertex_point(t_raw < 0.0 ? ed.v0 : ed.v1);
            }
        }
        // vertex pass: a path pinned to a mesh vertex may shortcut around it
        // through the cheaper side of the vertex star
        for (size_t i = 1; i + 1 < pts.size(); ++i) {
            std::vector<SurfacePoint> detour;
            if (shortcut_around_vertex(pts[i - 1], pts[i], pts[i + 1], detour)) {
                pts.erase(pts.begin() + i);
                pts.insert(pts.begin() + i, detour.begin(), detour.end());
                i += detour.size() - 1;
            }
        }
        double nlen = polyline_length(pts);
        if (len - nlen < 1e-9 * std::max(len, 1.0)) {
            len = nlen;
            break;
        }
        len = nlen;
    }
    dedup();
    path.length = polyline_length(pts);
}

std::vector<double> Surface::distance_field(const SurfacePoint& p, double limit) const {
    Scratch& sc = scratch();
    MinHeap heap;
    auto relax = [&](int node, double d) {
        if (sc.stamp[node] != sc.cur || d < sc.dist[node]) {
            sc.stamp[node] = sc.cur;
            sc.dist[node] = d;
            return true;
        }
        return false;
    };
    for (int f : faces_of(p)) {
        Vec2 pc = layout_coords(f, p);
        for (const FaceNode& fn : face_nodes_[f]) {
            double d = (fn.coord - pc).norm();
            if (relax(fn.node, d)) heap.push({d, fn.node});
        }
    }
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > sc.dist[u] + 1e-15) continue;
        if (d > limit) continue;
        for (int o = adj_off_[u]; o < adj_off_[u + 1]; ++o) {
            double dv = d + adj_w_[o];
            if (dv <= limit && relax(adj_to_[o], dv)) heap.push({dv, adj_to_[o]});
        }
    }
    std::vector<double> out(node_pos_.size(), kInf);
    for (size_t i = 0; i < out.size(); ++i)
        if (sc.stamp[i] == sc.cur) out[i] = sc.dist[i];
    return out;
}

Surface::MultiSourceField Surface::multi_source_field(
    const std::vector<SurfacePoint>& sources) const {
    Scratch& sc = scratch();
    MinHeap heap;
    auto relax = [&](int node, double d, int lab) {
        if (sc.stamp[node] != sc.cur || d < sc.dist[node] ||
            (d == sc.dist[node] && lab < sc.label[node])) {
            sc.stamp[node] = sc.cur;
            sc.dist[node] = d;
            sc.label[node] = lab;
            return true;
        }
        return false;
    };
    for (int i = 0; i < int(sources.size()); ++i) {
        for (int f : faces_of(sources[i])) {
            Vec2 pc = layout_coords(f, sources[i]);
            for (const FaceNode& fn : face_nodes_[f]) {
                double d = (fn.coord - pc).norm();
                if (relax(fn.node, d, i)) heap.push({d, fn.node});
            }
        }
    }
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > sc.dist[u] + 1e-15) continue;
        int lab = sc.label[u];
        for (int o = adj_off_[u]; o < adj_off_[u + 1]; ++o) {
            double dv = d + adj_w_[o];
            if (relax(adj_to_[o], dv, lab)) heap.push({dv, adj_to_[o]});
        }
    }
    MultiSourceField out;
    out.dist.assign(node_pos_.size(), kInf);
    out.label.assign(node_pos_.size(), -1);
    for (size_t i = 0; i < out.dist.size(); ++i)
        if (sc.stamp[i] == sc.cur) {
            out.dist[i] = sc.dist[i];
            out.label[i] = sc.label[i];
        }
    return out;
}

double Surface::field_distance(const std::vector<double>& node_dist, const SurfacePoint& p) const {
    double best = kInf;
    for (int f : faces_of(p)) {
        Vec2 pc = layout_coords(f, p);
        for (const FaceNode& fn : face_nodes_[f])
            best = std::min(best, node_dist[fn.node] + (fn.coord - pc).norm());
    }
    return best;
}

std::pair<double, int> Surface::field_nearest(const MultiSourceField& fld,
                                              const SurfacePoint& p) const {
    double best = kInf;
    int lab = -1;
    for (int f : faces_of(p)) {
        Vec2 pc = layout_coords(f, p);
        for (const FaceNode& fn : face_nodes_[f]) {
            double d = fld.dist[fn.node] + (fn.coord - pc).norm();
            if (d < best || (d == best && fld.label[fn.node] < lab)) {
                best = d;
                lab = fld.label[fn.node];
            }
        }
    }
    return {best, lab};
}

SurfaceInvariants Surface::invariants(int sample_count, uint64_t seed) const {
    SurfaceInvariants inv;
    inv.area = total_area();

    // curvature lower estimate from angle defects
    std::vector<double> angle_sum(vertex_count(), 0.0);
    std::vector<double> area_share(vertex_count(), 0.0);
    for (int f = 0; f < face_count(); ++f) {
        double af = face_area(f);
        for (int k = 0; k < 3; ++k) {
            Vec2 a = layout_[f][(k + 1) % 3] - layout_[f][k];
            Vec2 b = layout_[f][(k + 2) % 3] - layout_[f][k];
            double c = std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0);
            angle_sum[faces_[f][k]] += std::acos(c);
            area_share[faces_[f][k]] += af / 3.0;
        }
    }
    double kmin = kInf;
    for (int v = 0; v < vertex_count(); ++v) {
        double defect = 2.0 * M_PI - angle_sum[v];
        kmin = std::min(kmin, defect / area_share[v]);
    }
    inv.curv_lower_est = kmin;

    // diameter: farthest-point sweeps plus random sampled sources
    std::mt19937 rng(seed);
    auto sweep_from = [&](int v) {
        std::vector<double> fld = distance_field(vertex_point(v));
        double mx = 0;
        int arg = v;
        for (int u = 0; u < vertex_count(); ++u)
            if (fld[u] > mx) {
                mx = fld[u];
                arg = u;
            }
        return std::pair<double, int>{mx, arg};
    };
    double diam = 0;
    int v = 0;
    for (int i = 0; i < 4; ++i) {
        auto [mx, arg] = sweep_from(v);
        diam = std::max(diam, mx);
        if (arg == v) break;
        v = arg;
    }
    std::uniform_int_distribution<int> pick(0, vertex_count() - 1);
    for (int i = 0; i < sample_count; ++i) {
        auto [mx, arg] = sweep_from(pick(rng));
        diam = std::max(diam, mx);
    }
    inv.diameter_est = diam;
    return inv;
}

// ---------------------------------------------------------------- IO

namespace {

std::vector<std::string> tokens_of(std::istream& in) {
    std::vector<std::string> toks;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string t;
        while (ls >> t) toks.push_back(t);
    }
    return toks;
}

}  // namespace

Surface load_off(const std::string& path, double tol_geo, int steiner) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open OFF file: " + path);
    std::vector<std::string> toks = tokens_of(in);
    size_t i = 0;
    if (i >= toks.size() || toks[i] != "OFF") throw std::runtime_error("not an OFF file: " + path);
    ++i;
    auto next = [&]() -> const std::string& {
        if (i >= toks.size()) throw std::runtime_error("truncated OFF file: " + path);
        return toks[i++];
    };
    int nv = std::stoi(next()), nf = std::stoi(next());
    next();  // edge count, ignored
    std::vector<Vec3> pos(nv);
    for (int v = 0; v < nv; ++v) {
        pos[v].x = std::stod(next());
        pos[v].y = std::stod(next());
        pos[v].z = std::stod(next());
    }
    std::vector<std::array<int, 3>> faces(nf);
    for (int f = 0; f < nf; ++f) {
        int cnt = std::stoi(next());
        if (cnt != 3) throw std::runtime_error("OFF file has a non-triangular face: " + path);
        for (int k = 0; k < 3; ++k) faces[f][k] = std::stoi(next());
    }
    return Surface(std::move(pos), std::move(faces), tol_geo, steiner);
}

Surface load_obj(const std::string& path, double tol_geo, int steiner) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open OBJ file: " + path);
    std::vector<Vec3> pos;
    std::vector<std::array<int, 3>> faces;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "v") {
            Vec3 p;
            ls >> p.x >> p.y >> p.z;
            pos.push_back(p);
        } else if (head == "f") {
            std::array<int, 3> fc;
            std::string tok;
            int k = 0;
            while (ls >> tok) {
                if (k >= 3) throw std::runtime_error("OBJ file has a non-triangular face: " + path);
                fc[k++] = std::stoi(tok.substr(0, tok.find('/'))) - 1;
            }
            if (k != 3) throw std::runtime_error("OBJ face with fewer than 3 vertices: " + path);
            faces.push_back(fc);
        }
    }
    return Surface(std::move(pos), std::move(faces), tol_geo, steiner);
}

void apply_length_sidecar(Surface& s, const std::string& json_path) {
    std::ifstream in(json_path);
    if (!in) throw std::runtime_error("cannot open sidecar: " + json_path);
    nlohmann::json j;
    in >> j;
    if (!j.contains("edge_lengths")) throw std::runtime_error("sidecar missing edge_lengths");
    for (const auto& row : j["edge_lengths"]) {
        s.override_edge_length(row.at(0).get<int>(), row.at(1).get<int>(),
                               row.at(2).get<double>());
    }
    s.rebuild();
}

void write_off(const Surface& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write OFF file: " + path);
    out << "OFF\n" << s.vertex_count() << " " << s.face_count() << " " << s.edges().size() << "\n";
    out.precision(17);
    for (const Vec3& p : s.positions()) out << p.x << " " << p.y << " " << p.z << "\n";
    for (const auto& f : s.faces()) out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
}

}  // namespace loopgeo
