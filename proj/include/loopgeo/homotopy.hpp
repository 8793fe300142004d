#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "loopgeo/curve.hpp"
#include "loopgeo/net.hpp"
#include "loopgeo/surface.hpp"

namespace loopgeo {

/// A homotopy as a discrete grid of curves (index = discrete time).
/// Continuity between consecutive levels is a measured budget, not an exact
/// property. Constructions that reparameterize their input record an explicit
/// trajectory grid; width is then measured on that correspondence instead of
/// matched constant-speed samples.
struct Homotopy {
    enum class Kind { FreeClosed, BasedLoop, FixedEndpoints };

    Kind kind = Kind::FreeClosed;
    std::vector<Curve> levels;
    int t_samples = 64;
    /// Measured max sup distance between consecutive levels.
    double continuity_budget = 0.0;
    /// Optional explicit point correspondence: trajectories[k][j] is the
    /// position of the k-th tracked point at level j. Empty means levels are
    /// matched by constant-speed parameter.
    std::vector<std::vector<SurfacePoint>> trajectories;

    const Surface& surface() const { return levels.front().surface(); }
    double max_level_length() const;
    bool is_contraction(double tol = 1e-6) const;  // last level is a point curve
};

/// Max over tracked points of the polyline length of its trajectory.
double width(const Homotopy& H);

/// Measure and record the max consecutive sup distance.
double measure_continuity(Homotopy& H);

/// Endpoint/basepoint invariants for the homotopy's kind.
bool kind_invariant_ok(const Homotopy& H, double tol);

/// Join two homotopies sharing a boundary level (the duplicate is dropped).
Homotopy concat_homotopies(const Homotopy& a, const Homotopy& b);

struct BallContraction {
    SurfacePoint center;
    double radius = 0.0;
    double measured_R = 1.0;  // max(containment radius, width) / radius
};

/// Contract a loop to the ball center by geodesic coning: every sample point
/// slides along its minimizing geodesic to the center. Throws on cone failure
/// (neighboring cone geodesics diverging, i.e. the ball is too large).
std::pair<Homotopy, BallContraction> contract_in_ball(const Curve& loop,
                                                      const SurfacePoint& center, double radius);

/// Per-mesh empirical contraction scale: the radius at which geodesic circles
/// around random centers cone down without ambiguity, and the worst
/// containment/width ratio observed while doing so.
struct Calibration {
    double r_emp = 0.0;
    double R_emp = 1.0;
    int probes = 0;
};

Calibration calibrate_contraction(const Surface& s, int probes = 20, uint64_t seed = 7,
                                  double init_radius = 0.0);

/// Free homotopy between two uniformly close closed curves: subdivide both,
/// connect matching subdivision points by minimizing geodesics and slide the
/// curve along the connectors. Requires sup_distance(alpha, gamma) < r_emp/a,
/// a > 2. First and last levels are alpha and gamma exactly.
Homotopy homotope_close_curves(const Curve& alpha, const Curve& gamma, double a,
                               const Calibration& cal);

/// Given a contraction H of its level-0 curve, rebuild it so that every level
/// is short: arcs of the original curve are swept to the final point one at a
/// time along the trajectories of H. Level lengths are at most
/// len(gamma) + 3*width(H) + eps; the width does not increase.
Homotopy shorten_levels(const Homotopy& H, double eps);

/// Turn a free contraction into a based one by conjugating every level with
/// the basepoint trajectory. Level lengths grow by at most twice the width.
Homotopy free_to_based(const Homotopy& H);

/// Push a raw contraction through the net: refine its time grid, project
/// every level to a net element, discard repeated elements forward, and chain
/// close-curve homotopies between the survivors (plus entry and exit).
Homotopy contract_via_net(const Curve& gamma, const Homotopy& H_raw, Net& net, double a,
                          const Calibration& cal);

/// contract_via_net, then shorten_levels, then free_to_based: a based
/// contraction of gamma through loops of length at most
/// 2*diameter + 5*W_measured + eps.
Homotopy contract_based_short(const Curve& gamma, const Homotopy& H_raw, Net& net, double a,
                              const Calibration& cal, double eps);

/// Fixed-endpoint homotopy between two paths sharing endpoints p, q, given a
/// based contraction C at p of the loop made of gamma2 followed by gamma1
/// reversed. Level lengths are at most
/// max-level(C) + min(len(gamma1), len(gamma2)).
Homotopy path_homotopy(const Curve& gamma1, const Curve& gamma2, const Homotopy& C);

/// The closed loop whose based contraction path_homotopy consumes.
Curve connecting_loop(const Curve& gamma1, const Curve& gamma2);

/// Shared machinery handed to the cut-locus constructions: the net and
/// calibration of the ambient surface plus the slack budgets.
struct ContractionContext {
    const Surface* s = nullptr;
    Net* net = nullptr;
    Calibration cal;
    double a = 4.0;
    double eps_len = 0.0;   // length slack fed to shorten_levels
    double diameter = 0.0;  // diameter estimate of the surface
};

/// A 1-parameter family of short paths from a fixed start point to points
/// along a target curve, with the (non-decreasing, surjective onto the sample
/// grid) parameter map phi.
struct PathFamily {
    std::vector<Curve> family;
    std::vector<double> phi;
    std::vector<double> digon_params;  // alpha-parameters where jumps were filled
    double W_emp = 0.0;                // widest net contraction used by a digon fill

    /// Family member whose endpoint parameter is closest to t.
    const Curve& at(double t) const;
};

/// Connect alpha(0) to every point of alpha by minimizing geodesics; where
/// consecutive geodesics jump (cut locus), fill the digon through a based
/// contraction and a fixed-endpoint homotopy, inserting the filling levels as
/// constant-parameter members.
PathFamily short_path_family(const Curve& alpha, const ContractionContext& ctx);

/// A family of paths in Omega_{p,q} over a uniform parameter grid.
struct CurveFamily {
    std::vector<Curve> curves;
};

struct IntervalExtension {
    /// grid[x][t]: path from p to f_x(t).
    std::vector<std::vector<Curve>> grid;
    double max_length = 0.0;
    double delta_measured = 0.0;  // longest radial trace encountered
    double W_emp = 0.0;           // from the center path family
};

/// Extend boundary assignments over an interval family: given for each x a
/// path f_x from p to q, and at the two interval ends full assignments
/// t -> (path from p to f_x(t)), produce assignments for every interior x via
/// the three-zone schedule (center family near x = 0, boundary assignment
/// pulled back through radial traces further out). Radial traces must stay
/// shorter than delta.
IntervalExtension extend_to_interval(const CurveFamily& f, const std::vector<Curve>& left,
                                     const std::vector<Curve>& right, double delta,
                                     const ContractionContext& ctx);

/// Generic raw contraction of a contractible loop: slide every point toward
/// the mesh point farthest from the loop until the loop fits in a calibrated
/// ball, then cone. Throws if the slide loses continuity or stalls.
Homotopy contract_loop_raw(const Curve& gamma, const Calibration& cal);

}  // namespace loopgeo
