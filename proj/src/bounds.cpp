#include "loopgeo/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace loopgeo {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void GeometryParams::validate() const {
    require(n >= 2, "GeometryParams: n must be >= 2");
    require(k <= 0.0, "GeometryParams: k must be <= 0");
    require(v > 0.0, "GeometryParams: v must be > 0");
    require(D > 0.0, "GeometryParams: D must be > 0");
    require(d > 0.0 && d <= D, "GeometryParams: need 0 < d <= D");
    require(c > 0.0, "GeometryParams: c must be > 0");
    require(a > 2.0, "GeometryParams: a must be > 2");
    require(delta >= 0.0, "GeometryParams: delta must be >= 0");
    require(l >= 1, "GeometryParams: l must be >= 1");
}

GeometryParams GeometryParams::make(int n, double v, double D, double c) {
    GeometryParams p;
    p.n = n;
    p.v = v;
    p.D = D;
    p.d = D;
    p.c = c;
    p.delta = 1e-3 * D;
    p.validate();
    return p;
}

LogScalar ball_count_bound(double eps, double D, int n) {
    require(eps > 0.0, "ball_count_bound: eps must be > 0");
    return ball_count_bound(LogScalar::from_value(eps), D, n);
}

LogScalar ball_count_bound(const LogScalar& eps, double D, int n) {
    require(!eps.is_zero(), "ball_count_bound: eps must be > 0");
    require(D > 0.0, "ball_count_bound: D must be > 0");
    require(n >= 2, "ball_count_bound: n must be >= 2");
    LogScalar num = LogScalar::from_value(12.0).pow(n) * LogScalar::from_value(double(n)) *
                    LogScalar::from_log(D * (n - 1));
    LogScalar den = LogScalar::from_value(2.0).pow(n - 1) * LogScalar::from_value(double(n - 1)) *
                    eps.pow(n);
    return num * den.recip();
}

ContractibilityParams contractibility_params(int n, double v, double D, double c1, double c2) {
    require(n >= 2, "contractibility_params: n must be >= 2");
    require(v > 0.0, "contractibility_params: v must be > 0");
    require(D > 0.0, "contractibility_params: D must be > 0");
    require(c1 > 0.0 && c2 > 0.0, "contractibility_params: c1, c2 must be > 0");
    LogScalar expD = LogScalar::from_log(double(n - 1) * D);
    LogScalar vmin = LogScalar::from_value(v) * LogScalar::from_value(std::min(1.0, v));
    ContractibilityParams out;
    out.r = LogScalar::from_value(c1) * vmin * (LogScalar::from_value(D) * expD).recip();
    out.R = LogScalar::from_value(c2) * expD * LogScalar::from_value(v).recip();
    return out;
}

LogScalar net_size_bound(double N, double L, double eps) {
    require(N >= 1.0, "net_size_bound: N must be >= 1");
    require(L > 0.0, "net_size_bound: L must be > 0");
    require(eps > 0.0, "net_size_bound: eps must be > 0");
    return net_size_bound(LogScalar::from_value(N), L, LogScalar::from_value(eps));
}

LogScalar net_size_bound(const LogScalar& N, double L, const LogScalar& eps) {
    require(!N.is_zero(), "net_size_bound: N must be >= 1");
    require(L > 0.0, "net_size_bound: L must be > 0");
    require(!eps.is_zero(), "net_size_bound: eps must be > 0");
    double inv_eps = eps.recip().log_value();  // log(1/eps)
    double exponent = 18.0 * L * std::exp(inv_eps) + 1.0;
    if (!std::isfinite(exponent)) throw std::domain_error("net_size_bound: exponent overflow");
    LogScalar out = N.pow(exponent);
    // stored at level >= 1 by construction of pow(); keep it that way
    return out.level() >= 1 ? out : out.at_level(1);
}

WidthBound width_bound(const GeometryParams& p, double c1, double c2) {
    p.validate();
    auto cp = contractibility_params(p.n, p.v, p.D, c1, c2);
    WidthBound wb;
    wb.r = cp.r;
    wb.R = cp.R;
    LogScalar eps = cp.r * LogScalar::from_value(4.0 * p.a).recip();
    wb.N = ball_count_bound(eps, p.D, p.n);
    wb.Ntilde = net_size_bound(wb.N, p.c * p.D, eps);
    LogScalar r_over_a = cp.r * LogScalar::from_value(p.a).recip();
    wb.W = LogScalar::from_value(2.0) * (wb.Ntilde + LogScalar::one()) *
           (cp.R * LogScalar::from_value(2.0) + LogScalar::one()) * r_over_a;
    if (wb.W.level() < 2) wb.W = wb.W.at_level(2);

    // Envelope exp(c * exp(G)) with G independent of c, valid for c >= 1:
    //   log W <= (18cD/eps + 1) log N + log(4 (2R+1) r/a)
    //         <= c * [ 19 (D/eps) log N + max(K, 0) ]      (when cD/eps >= 1)
    double log_eps = eps.log_value();
    double log_N = wb.N.log_value();
    double K = std::log(4.0) + (cp.R * LogScalar::from_value(2.0) + LogScalar::one()).log_value() +
               r_over_a.log_value();
    double eG = 19.0 * p.D * std::exp(-log_eps) * std::max(log_N, 1.0) + std::max(K, 0.0) + 1.0;
    if (!std::isfinite(eG)) throw std::domain_error("width_bound: envelope exponent overflow");
    wb.G = LogScalar::from_value(std::log(eG));
    wb.envelope = LogScalar::exp_of(LogScalar::from_value(p.c) * LogScalar::from_value(eG));
    if (p.c >= 1.0 && LogScalar::compare(wb.envelope, wb.W) == Ordering::Less) {
        throw std::logic_error("width_bound: envelope smaller than W");
    }
    return wb;
}

LogScalar length_bound(const GeometryParams& p, const LogScalar& W) {
    p.validate();
    LogScalar inner = W * LogScalar::from_value(5.0) + LogScalar::from_value(3.0 * p.D);
    LogScalar out = LogScalar::from_value(2.0 * p.l) * inner + LogScalar::from_value(p.D);
    if (p.delta > 0.0) out = out + LogScalar::from_value(p.delta);
    return out;
}

RescaledParams rescale(double k, double v, double D, double d, int n) {
    require(k < 0.0, "rescale: k must be < 0");
    require(v > 0.0 && D > 0.0 && d > 0.0, "rescale: v, D, d must be > 0");
    require(n >= 2, "rescale: n must be >= 2");
    double ak = std::fabs(k);
    return {v * std::pow(ak, n), ak * D, ak * d};
}

BoundReport compute_bound_report(const GeometryParams& p, double c1, double c2) {
    p.validate();
    BoundReport rep;
    rep.inputs = p;
    rep.constants_c1 = c1;
    rep.constants_c2 = c2;
    WidthBound wb = width_bound(p, c1, c2);
    rep.r = wb.r;
    rep.R = wb.R;
    rep.N_bound = wb.N;
    rep.net_size_bound = wb.Ntilde;
    rep.W_bound = wb.W;
    rep.G_value = wb.G;
    rep.envelope = wb.envelope;
    rep.L_bound = length_bound(p, wb.W);
    return rep;
}

}  // namespace loopgeo
