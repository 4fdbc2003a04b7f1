#ifndef KASHAEV_DOUBLE_DOUBLE_HPP
#define KASHAEV_DOUBLE_DOUBLE_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <type_traits>

namespace kashaev {

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2, about 106 significant bits.
/// Only what the log-domain kernels need: + - * /, exp, log and sin(pi u).
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double h) : hi(h), lo(0.0) {} // NOLINT(google-explicit-constructor)
    constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

    /// Exact for |v| < 2^106.
    template <class I, std::enable_if_t<std::is_integral_v<I> || std::is_same_v<I, __int128>, int> = 0>
    static DoubleDouble from_int(I v) {
        const double h = static_cast<double>(v);
        const double l = static_cast<double>(v - static_cast<I>(h));
        return quick_two_sum(h, l);
    }

    static constexpr DoubleDouble quick_two_sum(double a, double b) {
        const double s = a + b;
        return {s, b - (s - a)};
    }
    static constexpr DoubleDouble two_sum(double a, double b) {
        const double s = a + b;
        const double bb = s - a;
        return {s, (a - (s - bb)) + (b - bb)};
    }
    static DoubleDouble two_prod(double a, double b) {
        const double p = a * b;
        return {p, std::fma(a, b, -p)};
    }

    double to_double() const { return hi + lo; }

    friend DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) {
        DoubleDouble s = two_sum(a.hi, b.hi);
        DoubleDouble t = two_sum(a.lo, b.lo);
        s.lo += t.hi;
        s = quick_two_sum(s.hi, s.lo);
        s.lo += t.lo;
        return quick_two_sum(s.hi, s.lo);
    }
    friend DoubleDouble operator-(const DoubleDouble& a) { return {-a.hi, -a.lo}; }
    friend DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) { return a + (-b); }
    friend DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) {
        DoubleDouble p = two_prod(a.hi, b.hi);
        p.lo += a.hi * b.lo + a.lo * b.hi;
        return quick_two_sum(p.hi, p.lo);
    }
    friend DoubleDouble operator/(const DoubleDouble& a, const DoubleDouble& b) {
        const double q1 = a.hi / b.hi;
        DoubleDouble r = a - b * DoubleDouble(q1);
        const double q2 = r.hi / b.hi;
        r = r - b * DoubleDouble(q2);
        const double q3 = r.hi / b.hi;
        DoubleDouble q = quick_two_sum(q1, q2);
        return q + DoubleDouble(q3);
    }
    DoubleDouble& operator+=(const DoubleDouble& o) { return *this = *this + o; }
    DoubleDouble& operator-=(const DoubleDouble& o) { return *this = *this - o; }
    DoubleDouble& operator*=(const DoubleDouble& o) { return *this = *this * o; }

    friend bool operator<(const DoubleDouble& a, const DoubleDouble& b) {
        return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
    }
    friend bool operator>(const DoubleDouble& a, const DoubleDouble& b) { return b < a; }
    friend bool operator<=(const DoubleDouble& a, const DoubleDouble& b) { return !(b < a); }
    friend bool operator==(const DoubleDouble& a, const DoubleDouble& b) { return a.hi == b.hi && a.lo == b.lo; }
};

namespace dd {

inline constexpr DoubleDouble pi{3.141592653589793116e+00, 1.224646799147353207e-16};
inline constexpr DoubleDouble ln2{6.931471805599452862e-01, 2.319046813846299558e-17};

inline DoubleDouble ldexp(const DoubleDouble& a, int e) { return {std::ldexp(a.hi, e), std::ldexp(a.lo, e)}; }

inline DoubleDouble exp(const DoubleDouble& a) {
    if (a.hi > 709.0) return {std::numeric_limits<double>::infinity(), 0.0};
    if (a.hi < -745.0) return {0.0, 0.0};
    const double k = std::nearbyint(a.hi / ln2.hi);
    DoubleDouble r = a - ln2 * DoubleDouble(k);
    r = ldexp(r, -10);
    // expm1 of the reduced argument by Taylor series, then undo the scaling by
    // squaring: (1 + s)^2 - 1 = 2s + s^2.
    DoubleDouble s = r;
    DoubleDouble term = r;
    for (int n = 2; n < 30; ++n) {
        term = term * r / DoubleDouble(static_cast<double>(n));
        s += term;
        if (std::abs(term.hi) < 1e-36) break;
    }
    for (int i = 0; i < 10; ++i) s = ldexp(s, 1) + s * s;
    return ldexp(s + DoubleDouble(1.0), static_cast<int>(k));
}

inline DoubleDouble log(const DoubleDouble& a) {
    if (a.hi <= 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
    DoubleDouble y(std::log(a.hi));
    for (int i = 0; i < 2; ++i) y = y + a * exp(-y) - DoubleDouble(1.0);
    return y;
}

namespace detail {
// sin and cos by Taylor series for |x| <= pi/4.
inline DoubleDouble sin_taylor(const DoubleDouble& x) {
    const DoubleDouble x2 = x * x;
    DoubleDouble term = x;
    DoubleDouble s = x;
    for (int k = 1; k < 30; ++k) {
        term = -(term * x2) / DoubleDouble(static_cast<double>((2 * k) * (2 * k + 1)));
        s += term;
        if (std::abs(term.hi) < 1e-36) break;
    }
    return s;
}
inline DoubleDouble cos_taylor(const DoubleDouble& x) {
    const DoubleDouble x2 = x * x;
    DoubleDouble term(1.0);
    DoubleDouble s(1.0);
    for (int k = 1; k < 30; ++k) {
        term = -(term * x2) / DoubleDouble(static_cast<double>((2 * k - 1) * (2 * k)));
        s += term;
        if (std::abs(term.hi) < 1e-36) break;
    }
    return s;
}
} // namespace detail

/// sin(pi u) for u in [0, 1/2].
inline DoubleDouble sin_pi(const DoubleDouble& u) {
    if (u.hi <= 0.25) return detail::sin_taylor(pi * u);
    return detail::cos_taylor(pi * (DoubleDouble(0.5) - u));
}

} // namespace dd
} // namespace kashaev

#endif
