#include "loopgeo/logscalar.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace loopgeo {

namespace {

constexpr double kPromote = 1e300;           // mantissa threshold for level promotion
const double kLogPromote = std::log(kPromote);
constexpr double kInf = std::numeric_limits<double>::infinity();

// log-domain widening: absolute floor matches double log precision
double widen_lo(double x) { return x - 4e-16 * std::max(1.0, std::fabs(x)); }
double widen_hi(double x) { return x + 4e-16 * std::max(1.0, std::fabs(x)); }
// value-domain (level 0) widening: purely relative
double widen_val_lo(double x) { return x * (1.0 - 4e-16); }
double widen_val_hi(double x) { return x * (1.0 + 4e-16); }

double logsumexp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

// Internal representation of the natural log of a value:
//   m == 1 : log(value) = [lo, hi]
//   m == 2 : log(value) = exp([lo, hi])
struct LogRep {
    int m;
    double lo, hi;
};

LogRep canonical(LogRep r) {
    if (r.m == 2 && r.hi <= kLogPromote) {
        return {1, std::exp(r.lo), std::exp(r.hi)};
    }
    return r;
}

// log(exp(a) + t) for a possibly huge exponent-form end and a plain
// double offset t (any sign, |t| << exp(a) assumed when a is huge).
double exp_plus(double a, double t) {
    if (a > 700.0) {
        // correction underflows entirely
        return a;
    }
    double e = std::exp(a);
    double s = e + t;
    if (s <= 0) throw std::domain_error("LogScalar: nonpositive intermediate");
    return std::log(s);
}

}  // namespace

LogScalar LogScalar::from_value(double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("LogScalar: value must be finite and >= 0");
    if (x == 0.0) return LogScalar();
    LogScalar s(0, x, x);
    s.normalize();
    return s;
}

LogScalar LogScalar::from_log(double lx) {
    if (!std::isfinite(lx)) throw std::invalid_argument("LogScalar: log must be finite");
    LogScalar s(1, lx, lx);
    s.normalize();
    return s;
}

LogScalar LogScalar::from_loglog(double llx) {
    if (!std::isfinite(llx)) throw std::invalid_argument("LogScalar: loglog must be finite");
    return LogScalar(2, llx, llx);
}

void LogScalar::normalize() {
    if (zero_) return;
    if (level_ == 0 && hi_ > kPromote) {
        lo_ = std::log(lo_);
        hi_ = std::log(hi_);
        level_ = 1;
    }
    if (level_ == 1 && hi_ > kPromote) {
        lo_ = std::log(lo_);
        hi_ = std::log(hi_);
        level_ = 2;
    }
}

double LogScalar::to_double() const {
    if (zero_) return 0.0;
    double mid = 0.5 * (lo_ + hi_);
    if (level_ == 0) return mid;
    if (level_ == 1) return mid < 709.0 ? std::exp(mid) : kInf;
    double l = mid < 6.5 ? std::exp(mid) : kInf;
    return l < 709.0 ? std::exp(l) : kInf;
}

double LogScalar::log_value() const {
    if (zero_) return -kInf;
    double mid = 0.5 * (lo_ + hi_);
    if (level_ == 0) return std::log(mid);
    if (level_ == 1) return mid;
    return mid < 709.0 ? std::exp(mid) : kInf;
}

double LogScalar::loglog_value() const {
    if (level_ == 2) return 0.5 * (lo_ + hi_);
    double l = log_value();
    return l > 0 ? std::log(l) : std::numeric_limits<double>::quiet_NaN();
}

LogScalar LogScalar::at_level(int level) const {
    if (zero_ || level == level_) return *this;
    LogScalar s = *this;
    while (s.level_ < level) {
        if (s.lo_ <= 0.0) throw std::domain_error("LogScalar: cannot raise level of value <= 1 interval");
        s.lo_ = std::log(s.lo_);
        s.hi_ = std::log(s.hi_);
        s.level_++;
    }
    while (s.level_ > level) {
        if (s.hi_ > kLogPromote) throw std::domain_error("LogScalar: value too large for requested level");
        s.lo_ = std::exp(s.lo_);
        s.hi_ = std::exp(s.hi_);
        s.level_--;
    }
    return s;
}

namespace {

LogRep rep_of(const LogScalar& s) {
    if (s.level() == 0) {
        double lo = s.lo() > 0 ? std::log(s.lo()) : -kInf;
        return {1, lo, std::log(s.hi())};
    }
    if (s.level() == 1) return {1, s.lo(), s.hi()};
    return canonical({2, s.lo(), s.hi()});
}

}  // namespace

LogScalar LogScalar::operator*(const LogScalar& rhs) const {
    if (zero_ || rhs.zero_) return LogScalar();
    if (level_ == 0 && rhs.level_ == 0 && hi_ < 1e150 && rhs.hi_ < 1e150) {
        LogScalar s(0, widen_val_lo(lo_ * rhs.lo_), widen_val_hi(hi_ * rhs.hi_));
        s.normalize();
        return s;
    }
    LogRep a = rep_of(*this), b = rep_of(rhs);
    if (a.m == 1 && b.m == 1) {
        LogScalar s(1, widen_lo(a.lo + b.lo), widen_hi(a.hi + b.hi));
        s.normalize();
        return s;
    }
    if (a.m == 2 && b.m == 2) {
        return LogScalar(2, widen_lo(logsumexp(a.lo, b.lo)), widen_hi(logsumexp(a.hi, b.hi)));
    }
    const LogRep& big = a.m == 2 ? a : b;
    const LogRep& small = a.m == 2 ? b : a;
    // log result = exp(big) + small_log, with small_log a plain double
    return LogScalar(2, widen_lo(exp_plus(big.lo, small.lo)), widen_hi(exp_plus(big.hi, small.hi)));
}

LogScalar LogScalar::operator+(const LogScalar& rhs) const {
    if (zero_) return rhs;
    if (rhs.zero_) return *this;
    if (level_ == 0 && rhs.level_ == 0) {
        LogScalar s(0, widen_val_lo(lo_ + rhs.lo_), widen_val_hi(hi_ + rhs.hi_));
        s.normalize();
        return s;
    }
    LogRep a = rep_of(*this), b = rep_of(rhs);
    if (a.m == 1 && b.m == 1) {
        LogScalar s(1, widen_lo(logsumexp(a.lo, b.lo)), widen_hi(logsumexp(a.hi, b.hi)));
        s.normalize();
        return s;
    }
    if (a.m == 2 && b.m == 2) {
        // value = exp(exp(a)) + exp(exp(b)); the larger term dominates
        // beyond double precision unless the exponents are equal.
        double lo = std::max(a.lo, b.lo);
        double hi = std::max(a.hi, b.hi);
        // log(value) <= exp(hi) + log 2, so loglog <= hi + log1p(log2*exp(-hi))
        return LogScalar(2, widen_lo(lo), widen_hi(exp_plus(hi, std::log(2.0)) ));
    }
    const LogRep& big = a.m == 2 ? a : b;
    const LogRep& small = a.m == 2 ? b : a;
    // exp(exp(big)) + exp(small) with exp(big) > kLogPromote >> small:
    // the small term is invisible at double precision.
    (void)small;
    return LogScalar(2, widen_lo(big.lo), widen_hi(big.hi));
}

LogScalar LogScalar::pow(double p) const {
    if (!(p >= 0.0)) throw std::invalid_argument("LogScalar::pow: exponent must be >= 0");
    if (p == 0.0) return one();
    if (zero_) return LogScalar();
    LogRep a = rep_of(*this);
    if (a.m == 1) {
        double x = a.lo * p, y = a.hi * p;
        LogScalar s(1, widen_lo(std::min(x, y)), widen_hi(std::max(x, y)));
        s.normalize();
        return s;
    }
    double lp = std::log(p);
    return LogScalar(2, widen_lo(a.lo + lp), widen_hi(a.hi + lp));
}

LogScalar LogScalar::exp_of(const LogScalar& x) {
    if (x.is_zero()) return one();
    if (x.level_ == 0) {
        LogScalar s(1, widen_lo(x.lo_), widen_hi(x.hi_));
        s.normalize();
        return s;
    }
    if (x.level_ == 1) return LogScalar(2, widen_lo(x.lo_), widen_hi(x.hi_));
    throw std::domain_error("LogScalar::exp_of: argument exceeds level-2 range");
}

LogScalar LogScalar::recip() const {
    if (zero_) throw std::domain_error("LogScalar::recip: division by zero");
    LogRep a = rep_of(*this);
    if (a.m == 2) throw std::domain_error("LogScalar::recip: value too large to invert");
    LogScalar s(1, widen_lo(-a.hi), widen_hi(-a.lo));
    s.normalize();
    return s;
}

Ordering LogScalar::compare(const LogScalar& a, const LogScalar& b) {
    if (a.zero_ && b.zero_) return Ordering::Equal;
    if (a.zero_) return Ordering::Less;
    if (b.zero_) return Ordering::Greater;
    LogRep ra = rep_of(a), rb = rep_of(b);
    auto as_m2 = [](const LogRep& r) {
        // both ends mapped to loglog scale; safe since canonical m=1 reps
        // have |log| <= 1e300 -> loglog <= ~691 and m=2 reps have lo > 0
        if (r.m == 2) return r;
        LogRep out{2, r.lo > 0 ? std::log(r.lo) : -kInf, r.hi > 0 ? std::log(r.hi) : -kInf};
        return out;
    };
    if (ra.m == 1 && rb.m == 1) {
        if (ra.hi < rb.lo) return Ordering::Less;
        if (ra.lo > rb.hi) return Ordering::Greater;
        if (ra.lo == rb.lo && ra.hi == rb.hi && ra.lo == ra.hi) return Ordering::Equal;
        return Ordering::Indistinguishable;
    }
    LogRep xa = as_m2(ra), xb = as_m2(rb);
    if (xa.hi < xb.lo) return Ordering::Less;
    if (xa.lo > xb.hi) return Ordering::Greater;
    if (xa.lo == xb.lo && xa.hi == xb.hi && xa.lo == xa.hi) return Ordering::Equal;
    return Ordering::Indistinguishable;
}

std::string LogScalar::str() const {
    std::ostringstream os;
    if (zero_) {
        os << "0";
    } else {
        os << "L" << level_ << "[" << lo_ << ", " << hi_ << "]";
    }
    return os.str();
}

}  // namespace loopgeo
