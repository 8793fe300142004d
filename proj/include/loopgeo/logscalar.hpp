#pragma once

#include <cstdint>
#include <string>

namespace loopgeo {

/// Outcome of an interval comparison.
enum class Ordering { Less, Equal, Greater, Indistinguishable };

/// A nonnegative scalar stored at one of three magnitude levels, with
/// interval bounds on the stored mantissa:
///
///   level 0: value in [lo, hi]
///   level 1: value = exp([lo, hi])
///   level 2: value = exp(exp([lo, hi]))
///
/// Values up to doubly-exponential magnitude are representable without
/// overflow. All arithmetic keeps lo <= hi and widens the interval
/// slightly at each step so that the true value always stays inside.
class LogScalar {
public:
    LogScalar() = default;  // zero

    static LogScalar from_value(double x);    // x >= 0
    static LogScalar from_log(double lx);     // value = exp(lx)
    static LogScalar from_loglog(double llx); // value = exp(exp(llx))
    static LogScalar zero() { return LogScalar(); }
    static LogScalar one() { return from_value(1.0); }

    int level() const { return level_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    bool is_zero() const { return zero_; }

    /// Midpoint value as a plain double; +inf when out of range.
    double to_double() const;
    /// Natural log of the midpoint value; -inf for zero, +inf if the log
    /// itself exceeds double range.
    double log_value() const;
    /// log(log(value)) of the midpoint; NaN when value <= 1.
    double loglog_value() const;

    /// Re-store the value at the requested level when representable there.
    LogScalar at_level(int level) const;

    LogScalar operator*(const LogScalar& rhs) const;
    LogScalar operator+(const LogScalar& rhs) const;
    /// value^p for p >= 0.
    LogScalar pow(double p) const;
    /// exp(value); result is one level up.
    static LogScalar exp_of(const LogScalar& x);
    /// 1/value; defined while log(value) fits in a double.
    LogScalar recip() const;

    static Ordering compare(const LogScalar& a, const LogScalar& b);
    bool operator<(const LogScalar& rhs) const { return compare(*this, rhs) == Ordering::Less; }
    bool operator<=(const LogScalar& rhs) const {
        auto c = compare(*this, rhs);
        return c == Ordering::Less || c == Ordering::Equal || c == Ordering::Indistinguishable;
    }

    std::string str() const;

private:
    LogScalar(int level, double lo, double hi) : zero_(false), level_(level), lo_(lo), hi_(hi) {}
    void normalize();

    bool zero_ = true;
    int level_ = 0;
    double lo_ = 0.0;
    double hi_ = 0.0;
};

}  // namespace loopgeo
