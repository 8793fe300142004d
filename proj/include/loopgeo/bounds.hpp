#pragma once

#include "loopgeo/logscalar.hpp"

namespace loopgeo {

/// Geometric hypotheses the bound functions are evaluated under.
/// All ordering/positivity constraints are checked on construction
/// via validate().
struct GeometryParams {
    int n = 2;           // dimension, >= 2
    double k = -1.0;     // curvature lower bound, <= 0
    double v = 1.0;      // volume lower bound, > 0
    double D = 1.0;      // diameter upper bound, > 0
    double d = 1.0;      // actual diameter, 0 < d <= D
    double c = 2.0;      // contraction constant, > 0
    double a = 4.0;      // free parameter, > 2
    double delta = 1e-3; // slack, >= 0 (defaults to 1e-3 * D)
    int l = 1;           // sphere dimension, >= 1

    void validate() const;
    static GeometryParams make(int n, double v, double D, double c);
};

struct WidthBound {
    LogScalar W;         // level-2 width bound
    LogScalar envelope;  // exp(c * exp(G))
    LogScalar G;         // the exponent function G
    LogScalar r, R;      // contractibility radii used
    LogScalar N;         // ball count bound at eps = r/(4a)
    LogScalar Ntilde;    // net size bound
};

struct BoundReport {
    LogScalar r, R;
    LogScalar N_bound;
    LogScalar net_size_bound;
    LogScalar W_bound;
    LogScalar G_value;
    LogScalar envelope;
    LogScalar L_bound;
    GeometryParams inputs;
    double constants_c1 = 1.0;
    double constants_c2 = 1.0;
};

/// 12^n * n * e^{D(n-1)} / (2^{n-1} (n-1) eps^n)
LogScalar ball_count_bound(double eps, double D, int n);
LogScalar ball_count_bound(const LogScalar& eps, double D, int n);

/// r = c1 * v*min{1,v} / (D e^{(n-1)D}),  R = c2 * e^{(n-1)D} / v
struct ContractibilityParams {
    LogScalar r, R;
};
ContractibilityParams contractibility_params(int n, double v, double D, double c1, double c2);

/// N^{18L/eps + 1}, stored at level >= 1.
LogScalar net_size_bound(double N, double L, double eps);
LogScalar net_size_bound(const LogScalar& N, double L, const LogScalar& eps);

/// W = 2(Ntilde+1)(2R+1)(r/a) with eps = r/(4a), Ntilde = net_size_bound(N, c*D, eps).
/// Also evaluates the envelope exp(c*exp(G)) and checks W <= envelope.
WidthBound width_bound(const GeometryParams& p, double c1, double c2);

/// L = 2l(5W + 3D) + D + delta
LogScalar length_bound(const GeometryParams& p, const LogScalar& W);

/// Metric rescaling to curvature lower bound -1: v' = v|k|^n, D' = |k|D, d' = |k|d.
struct RescaledParams {
    double v, D, d;
};
RescaledParams rescale(double k, double v, double D, double d, int n);

BoundReport compute_bound_report(const GeometryParams& p, double c1, double c2);

}  // namespace loopgeo
