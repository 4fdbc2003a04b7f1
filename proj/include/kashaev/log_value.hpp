#ifndef KASHAEV_LOG_VALUE_HPP
#define KASHAEV_LOG_VALUE_HPP

#include "kashaev/double_double.hpp"

#include <cmath>
#include <limits>

namespace kashaev {

enum class Precision { Double, DoubleDouble };

/// A non-negative magnitude stored as its natural log; exact zero is flagged.
struct LogValue {
    double log_mag = 0.0;
    bool zero = false;

    static LogValue one() { return {}; }
    static LogValue zero_value() { return {0.0, true}; }
    static LogValue from_log(double l) { return {l, false}; }

    double value() const { return zero ? 0.0 : std::exp(log_mag); }

    friend LogValue operator*(const LogValue& a, const LogValue& b) {
        if (a.zero || b.zero) return zero_value();
        return from_log(a.log_mag + b.log_mag);
    }
    friend LogValue operator/(const LogValue& a, const LogValue& b) {
        if (b.zero) return {std::numeric_limits<double>::infinity(), false};
        if (a.zero) return zero_value();
        return from_log(a.log_mag - b.log_mag);
    }
    LogValue& operator*=(const LogValue& o) { return *this = *this * o; }
};

namespace detail {
inline double real_exp(double x) { return std::exp(x); }
inline double real_log(double x) { return std::log(x); }
inline DoubleDouble real_exp(const DoubleDouble& x) { return dd::exp(x); }
inline DoubleDouble real_log(const DoubleDouble& x) { return dd::log(x); }
inline double to_double(double x) { return x; }
inline double to_double(const DoubleDouble& x) { return x.to_double(); }
} // namespace detail

/// Neumaier-compensated running sum.  For DoubleDouble the native addition
/// already carries the low word, so the compensation term stays zero.
template <class Real>
class CompensatedSum {
public:
    void add(const Real& x) {
        if constexpr (std::is_same_v<Real, double>) {
            const double t = sum_ + x;
            if (std::abs(sum_) >= std::abs(x)) {
                comp_ += (sum_ - t) + x;
            } else {
                comp_ += (x - t) + sum_;
            }
            sum_ = t;
        } else {
            sum_ += x;
        }
    }
    Real value() const {
        if constexpr (std::is_same_v<Real, double>) {
            return sum_ + comp_;
        } else {
            return sum_;
        }
    }

private:
    Real sum_{};
    Real comp_{};
};

/// Overflow-free log(sum exp(term_i)).  Keeps the running maximum and a
/// compensated sum of exp(term - max); merge() combines partial sums.
template <class Real = double>
class LogSum {
public:
    void add(const Real& term) {
        if (empty_) {
            max_ = term;
            sum_ = CompensatedSum<Real>();
            sum_.add(Real(1.0));
            empty_ = false;
            return;
        }
        if (max_ < term) {
            rescale(term);
        }
        sum_.add(detail::real_exp(term - max_));
    }
    void add(const LogValue& v) {
        if (!v.zero) add(Real(v.log_mag));
    }

    void merge(const LogSum& other) {
        if (other.empty_) return;
        if (empty_) {
            *this = other;
            return;
        }
        if (max_ < other.max_) rescale(other.max_);
        sum_.add(other.sum_.value() * detail::real_exp(other.max_ - max_));
    }

    bool empty() const { return empty_; }

    /// log of the accumulated sum; an empty sum is an exact zero.
    Real log_value() const {
        if (empty_) return Real(-std::numeric_limits<double>::infinity());
        return max_ + detail::real_log(sum_.value());
    }
    LogValue result() const {
        if (empty_) return LogValue::zero_value();
        return LogValue::from_log(detail::to_double(log_value()));
    }

private:
    void rescale(const Real& new_max) {
        const Real factor = detail::real_exp(max_ - new_max);
        CompensatedSum<Real> scaled;
        scaled.add(sum_.value() * factor);
        sum_ = scaled;
        max_ = new_max;
    }

    bool empty_ = true;
    Real max_{};
    CompensatedSum<Real> sum_;
};

} // namespace kashaev

#endif
