#pragma once

#include <vector>

#include "loopgeo/curve.hpp"
#include "loopgeo/surface.hpp"

namespace loopgeo {

struct NerveEdge {
    int i = -1, j = -1;  // i < j
    double dist = 0.0;
};

/// A greedy maximal packing of a surface at radius eps/12 together with the
/// induced cover at radius eps/6 and its nerve at threshold eps/2.
struct Cover {
    const Surface* surface = nullptr;
    double eps = 0.0;
    double pack_radius = 0.0;    // eps/12
    double cover_radius = 0.0;   // eps/6
    std::vector<SurfacePoint> centers;
    std::vector<int> center_vertices;       // centers are mesh vertices
    std::vector<NerveEdge> nerve_edges;
    /// Nearest-center distances and labels over the surface's graph nodes.
    Surface::MultiSourceField field;
};

/// Greedy farthest-point packing seeded at vertex 0. Throws when the center
/// count would exceed `max_centers`.
Cover build_cover(const Surface& s, double eps, size_t max_centers = 1000000);

/// All center pairs at distance <= threshold (straightened geodesic metric).
std::vector<NerveEdge> compute_nerve(const Surface& s, const std::vector<SurfacePoint>& centers,
                                     double threshold);

/// Exhaustive cover check over mesh vertices and face circumcenters.
bool cover_is_valid(const Cover& c, double slack = 0.0);

/// Minimizing geodesic annotating one nerve edge.
Curve nerve_geodesic(const Cover& c, int edge_index);

}  // namespace loopgeo
