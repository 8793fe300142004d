#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace loopgeo {

struct Vec3 {
    double x = 0, y = 0, z = 0;
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const;
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
};

struct Vec2 {
    double x = 0, y = 0;
    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const;
};

/// A point on a surface: face index plus barycentric coordinates
/// (nonnegative, summing to 1 within 1e-12).
struct SurfacePoint {
    int face = -1;
    std::array<double, 3> bary{1.0, 0.0, 0.0};

    bool valid() const;
    void canonicalize();
};

/// A piecewise-straight intrinsic path; consecutive points always share a face.
struct GeodesicPath {
    std::vector<SurfacePoint> points;
    double length = 0.0;
};

struct SurfaceInvariants {
    double diameter_est = 0.0;
    double area = 0.0;
    double curv_lower_est = 0.0;
};

/// Immutable triangulated surface with an intrinsic metric (edge lengths).
/// Distance and geodesic queries run on a Steiner-point graph refined per
/// face and are read-only, so they may be issued concurrently.
class Surface {
public:
    struct Edge {
        int v0 = -1, v1 = -1;    // v0 < v1
        int face[2] = {-1, -1};
        double len = 0.0;
    };

    /// Build from an embedded mesh; edge lengths derived from positions.
    Surface(std::vector<Vec3> positions, std::vector<std::array<int, 3>> faces,
            double tol_geo = 0.01, int steiner_per_edge = 2);

    /// Override intrinsic edge lengths (abstract metric); the embedding is
    /// kept for export only and no longer used to guide searches.
    void override_edge_lengths(const std::vector<std::array<double, 3>>& per_face_lengths);
    void override_edge_length(int v0, int v1, double len);
    /// Recompute layouts/graph after length overrides.
    void rebuild();

    // --- topology / geometry ---
    int vertex_count() const { return int(positions_.size()); }
    int face_count() const { return int(faces_.size()); }
    const std::vector<Vec3>& positions() const { return positions_; }
    const std::vector<std::array<int, 3>>& faces() const { return faces_; }
    const std::vector<Edge>& edges() const { return edges_; }
    int edge_between(int v0, int v1) const;  // -1 if absent
    double face_area(int f) const;
    double total_area() const;
    double mean_edge_length() const;
    double tol_geo() const { return tol_geo_; }

    Vec3 position(const SurfacePoint& p) const;
    SurfacePoint vertex_point(int v) const;
    SurfacePoint edge_point(int e, double t) const;  // t from v0 to v1
    SurfacePoint face_point(int f, double b0, double b1, double b2) const;
    /// Faces a point belongs to (1 for interior, 2 for edge, ring for vertex).
    std::vector<int> faces_of(const SurfacePoint& p) const;
    int common_face(const SurfacePoint& a, const SurfacePoint& b) const;
    /// 2D layout coordinates of a point inside face f.
    Vec2 layout_coords(int f, const SurfacePoint& p) const;
    /// Inverse of layout_coords: barycentrics from 2D face coordinates.
    SurfacePoint point_from_layout(int f, const Vec2& c) const;
    /// SurfacePoint for a Steiner-graph node.
    SurfacePoint node_point(int node) const;
    /// Straight-line intrinsic distance inside a shared face; -1 if none shared.
    double in_face_distance(const SurfacePoint& a, const SurfacePoint& b) const;

    // --- metric queries ---
    double distance(const SurfacePoint& p, const SurfacePoint& q) const;
    GeodesicPath geodesic(const SurfacePoint& p, const SurfacePoint& q) const;
    /// Improve an existing polyline in place (replaces interior edge points).
    void straighten(GeodesicPath& path, int max_sweeps = 30) const;
    /// Length of a polyline whose consecutive points share faces.
    double polyline_length(const std::vector<SurfacePoint>& pts) const;

    /// Distances from p to every graph node (graph metric, no straightening).
    /// Nodes beyond `limit` are left at infinity.
    std::vector<double> distance_field(const SurfacePoint& p,
                                       double limit = std::numeric_limits<double>::infinity()) const;
    /// Distances from a set of sources; label = index of nearest source
    /// (ties broken by smallest index).
    struct MultiSourceField {
        std::vector<double> dist;   // per graph node
        std::vector<int> label;     // per graph node
    };
    MultiSourceField multi_source_field(const std::vector<SurfacePoint>& sources) const;
    /// Distance from a field to an arbitrary point.
    double field_distance(const std::vector<double>& node_dist, const SurfacePoint& p) const;
    /// (distance, nearest-source label) at an arbitrary point.
    std::pair<double, int> field_nearest(const MultiSourceField& f, const SurfacePoint& p) const;
    double vertex_field(const std::vector<double>& node_dist, int v) const { return node_dist[v]; }
    int graph_node_count() const { return int(node_pos_.size()); }

    SurfaceInvariants invariants(int sample_count, uint64_t seed = 1) const;

private:
    void build_topology();
    void build_layouts();
    void build_graph();
    void validate() const;

    struct FaceNode {
        int node;
        Vec2 coord;
    };
    const std::vector<FaceNode>& face_nodes(int f) const { return face_nodes_[f]; }

    struct Scratch;
    Scratch& scratch() const;

    /// If x sits on a mesh vertex, try to reroute a-x-b around the cheaper
    /// side of the vertex star; the replacement chain crosses the star edges.
    bool shortcut_around_vertex(const SurfacePoint& a, const SurfacePoint& x,
                                const SurfacePoint& b, std::vector<SurfacePoint>& out) const;

    double search(const SurfacePoint& p, const SurfacePoint& q, std::vector<int>* node_path) const;

    std::vector<Vec3> positions_;
    std::vector<std::array<int, 3>> faces_;
    std::vector<Edge> edges_;
    std::vector<std::array<int, 3>> face_edge_;   // edge id for (vk, vk+1)
    std::vector<std::vector<int>> vertex_faces_;
    std::vector<std::array<Vec2, 3>> layout_;
    double tol_geo_;
    int steiner_k_;
    bool positions_consistent_ = true;

    // Steiner graph
    std::vector<Vec3> node_pos_;
    std::vector<int> node_edge_;      // -1 for vertex nodes
    std::vector<double> node_frac_;
    std::vector<std::vector<FaceNode>> face_nodes_;
    std::vector<int> adj_off_;
    std::vector<int> adj_to_;
    std::vector<double> adj_w_;
};

// --- mesh ingestion (triangles only) ---
Surface load_off(const std::string& path, double tol_geo = 0.01, int steiner = 2);
Surface load_obj(const std::string& path, double tol_geo = 0.01, int steiner = 2);
/// Optional JSON sidecar: {"edge_lengths": [[v0, v1, len], ...]}
void apply_length_sidecar(Surface& s, const std::string& json_path);
void write_off(const Surface& s, const std::string& path);

}  // namespace loopgeo
