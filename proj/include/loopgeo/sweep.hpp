#pragma once

#include <vector>

#include "loopgeo/curve.hpp"
#include "loopgeo/homotopy.hpp"
#include "loopgeo/surface.hpp"

namespace loopgeo {

/// A 1-parameter family of paths sharing endpoints p, q, indexed over a
/// closed parameter circle: family.front() == family.back().
struct Sweepout {
    std::vector<Curve> family;
    int degree = 0;  // winding count of the generating loop, for bookkeeping
};

struct ShortenResult {
    Curve curve;
    int passes = 0;
    bool converged = false;  // false: hit max_iters first (best iterate kept)
};

/// Birkhoff curve shortening for open paths: replace sub-arcs between
/// staggered subdivision points by minimizing geodesics until the per-pass
/// length decrease drops below tol * length. Length never increases.
ShortenResult birkhoff_shorten(const Curve& gamma, int max_iters = 240, double tol = 1e-4);

/// m locally unshortenable curves from p to q, pairwise separated by more
/// than 3 mean edge lengths and sorted by length. Candidate seeds wind
/// around the far side of the surface with increasing degree; random detours
/// are added if the deduplicated harvest falls short, and
/// insufficient-distinct-geodesics is thrown once that budget is exhausted.
std::vector<Curve> find_geodesics(const Surface& s, const SurfacePoint& p, const SurfacePoint& q,
                                  int m);

struct CompressedSweepout {
    Sweepout out;
    double W_emp = 0.0;           // widest digon contraction encountered
    double delta_measured = 0.0;  // longest radial trace across an edge
    /// Per input member: a fixed-endpoint homotopy from the input curve to
    /// its replacement, for auditing the compression.
    std::vector<Homotopy> audit;
};

/// Replace every member of a sweepout by a short path: subdivision vertices
/// receive short path families toward their member, edges are filled by
/// extend_to_interval, and each member's replacement is the filled
/// assignment at t = 1. Output lengths are bounded by the calibration and
/// the diameter, independent of the input lengths. Requires
/// family.size() == 4k + 1 (closed circle split into width-5 edges).
CompressedSweepout compress_family(const Sweepout& f, const ContractionContext& ctx, double delta);

}  // namespace loopgeo
