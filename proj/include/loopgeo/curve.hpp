#pragma once

#include <vector>

#include "loopgeo/surface.hpp"

namespace loopgeo {

/// A piecewise-geodesic curve on a surface, stored as a dense polyline whose
/// consecutive points share a face. Evaluation is by constant-speed
/// (arc-length) parameter t in [0,1]. Closed curves store an explicit
/// closing copy of the first point at the back.
class Curve {
public:
    Curve() = default;

    /// Geodesic interpolation through the given breakpoints.
    static Curve through(const Surface& s, const std::vector<SurfacePoint>& breakpoints,
                         bool closed);
    /// Adopt an existing dense polyline (consecutive points must share faces).
    static Curve from_polyline(const Surface& s, std::vector<SurfacePoint> pts, bool closed);
    /// Constant curve at a point.
    static Curve point_curve(const Surface& s, const SurfacePoint& p, bool closed);

    bool empty() const { return pts_.empty(); }
    bool closed() const { return closed_; }
    double length() const { return cum_.empty() ? 0.0 : cum_.back(); }
    const Surface& surface() const { return *s_; }
    const std::vector<SurfacePoint>& polyline() const { return pts_; }

    SurfacePoint eval(double t) const;
    SurfacePoint start() const { return pts_.front(); }
    SurfacePoint end() const { return pts_.back(); }
    std::vector<SurfacePoint> samples(int count) const;

    Curve reversed() const;
    /// Reparametrize a closed curve to start at parameter t0.
    Curve rotated(double t0) const;
    /// Open sub-arc from t0 to t1; on closed curves t1 < t0 wraps around.
    Curve subcurve(double t0, double t1) const;
    /// Join two open curves; the gap between a's end and b's start must lie
    /// within one face (it is bridged by a straight segment).
    static Curve concat(const Curve& a, const Curve& b);
    /// Mark an open curve closed; its endpoints must lie in a common face.
    static Curve close_loop(const Curve& a);

private:
    void finish();

    const Surface* s_ = nullptr;
    std::vector<SurfacePoint> pts_;
    std::vector<double> cum_;
    bool closed_ = false;
};

/// Max over matched constant-speed samples of the pointwise distance.
double sup_distance(const Curve& a, const Curve& b, int samples = 64);

/// Closed level curves of a scalar field given at mesh vertices (values taken
/// from a graph-node array, vertex entries first), extracted per face by
/// linear interpolation. Faces the level passes through a vertex of are
/// handled by nudging the level. Returned curves are sorted by decreasing
/// length.
std::vector<Curve> iso_contours(const Surface& s, const std::vector<double>& node_values,
                                double level);

}  // namespace loopgeo
