#pragma once

#include <random>

#include "loopgeo/curve.hpp"
#include "loopgeo/surface.hpp"

namespace loopgeo {

/// Unit sphere as a subdivided icosahedron; `subdiv` = 4 gives 5120 faces,
/// 5 gives 20480 faces.
Surface make_icosphere(int subdiv, double radius = 1.0, double tol_geo = 0.01, int steiner = 2);

/// Axis-aligned ellipsoid built from the icosphere.
Surface make_ellipsoid(int subdiv, double ax, double ay, double az, double tol_geo = 0.01,
                       int steiner = 2);

/// Flat square torus [0,1)^2 as an n x n grid with intrinsic (unwrapped)
/// edge lengths; the stored 3D positions are a display embedding only.
Surface make_flat_torus(int n, double tol_geo = 0.01, int steiner = 2);

/// Intrinsic edge-length sidecar rows for the flat torus, suitable for the
/// JSON sidecar format.
std::vector<std::array<double, 3>> flat_torus_edge_lengths(int n);

/// Uniform random point on a surface (area-weighted face, uniform bary).
SurfacePoint random_surface_point(const Surface& s, std::mt19937& rng);

/// Random closed broken geodesic through `k` points drawn from a metric ball,
/// shrunk until its total length is at most `max_len`.
Curve random_closed_curve(const Surface& s, double max_len, int k, std::mt19937& rng);

}  // namespace loopgeo
