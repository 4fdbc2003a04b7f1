#ifndef KASHAEV_RATIONAL_HPP
#define KASHAEV_RATIONAL_HPP

#include "kashaev/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>

namespace kashaev {

using BigInt = boost::multiprecision::cpp_int;
using Int128 = __int128;

namespace detail {

template <class Int>
inline constexpr bool is_builtin_int_v =
    std::is_integral_v<Int> || std::is_same_v<Int, __int128>;

template <class Int>
Int checked_add(const Int& a, const Int& b) {
    if constexpr (is_builtin_int_v<Int>) {
        Int r;
        if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
        return r;
    } else {
        return a + b;
    }
}

template <class Int>
Int checked_sub(const Int& a, const Int& b) {
    if constexpr (is_builtin_int_v<Int>) {
        Int r;
        if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in subtraction");
        return r;
    } else {
        return a - b;
    }
}

template <class Int>
Int checked_mul(const Int& a, const Int& b) {
    if constexpr (is_builtin_int_v<Int>) {
        Int r;
        if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
        return r;
    } else {
        return a * b;
    }
}

template <class Int>
Int abs_int(const Int& a) {
    if constexpr (is_builtin_int_v<Int>) {
        return a < 0 ? checked_sub(Int(0), a) : a;
    } else {
        return boost::multiprecision::abs(a);
    }
}

template <class Int>
Int gcd_int(Int a, Int b) {
    if constexpr (is_builtin_int_v<Int>) {
        a = abs_int(a);
        b = abs_int(b);
        while (b != 0) {
            Int t = a % b;
            a = b;
            b = t;
        }
        return a;
    } else {
        return boost::multiprecision::gcd(a, b);
    }
}

/// Floor division for a positive divisor.
template <class Int>
Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b != 0) && (a < 0)) q -= 1;
    return q;
}

/// Non-negative remainder for a positive modulus.
template <class Int>
Int floor_mod(const Int& a, const Int& b) {
    Int r = a % b;
    if (r < 0) r += b;
    return r;
}

template <class Int>
std::string int_to_string(Int v) {
    if constexpr (std::is_same_v<Int, __int128>) {
        if (v == 0) return "0";
        const bool neg = v < 0;
        unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                                  : static_cast<unsigned __int128>(v);
        std::string s;
        while (u != 0) {
            s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
            u /= 10;
        }
        if (neg) s.push_back('-');
        std::reverse(s.begin(), s.end());
        return s;
    } else if constexpr (is_builtin_int_v<Int>) {
        return std::to_string(v);
    } else {
        return v.str();
    }
}

template <class Int>
long double to_long_double(const Int& v) {
    if constexpr (is_builtin_int_v<Int>) {
        return static_cast<long double>(v);
    } else {
        return v.template convert_to<long double>();
    }
}

/// Correctly-rounded when both operands fit in 53 bits; within one ulp otherwise.
template <class Int>
double ratio_to_double(const Int& num, const Int& den) {
    constexpr std::int64_t exact = std::int64_t{1} << 53;
    if (abs_int(num) < Int(exact) && den < Int(exact)) {
        return static_cast<double>(static_cast<std::int64_t>(num)) /
               static_cast<double>(static_cast<std::int64_t>(den));
    }
    return static_cast<double>(to_long_double(num) / to_long_double(den));
}

/// Narrowing conversion between integer representations; throws on overflow.
template <class To, class From>
To narrow_int(const From& v) {
    if constexpr (std::is_same_v<To, From>) {
        return v;
    } else if constexpr (!is_builtin_int_v<To>) {
        if constexpr (std::is_same_v<From, __int128>) {
            return To(int_to_string(v));
        } else {
            return To(v);
        }
    } else if constexpr (is_builtin_int_v<From>) {
        To r;
        if (__builtin_add_overflow(v, 0, &r)) throw OverflowError("integer does not fit target type");
        return r;
    } else {
        // From is BigInt.
        const BigInt hi = std::is_same_v<To, __int128> ? (BigInt(1) << 127) - 1
                                                        : BigInt(std::numeric_limits<To>::max());
        if (boost::multiprecision::abs(v) > hi) throw OverflowError("integer does not fit target type");
        if constexpr (std::is_same_v<To, __int128>) {
            const bool neg = v < 0;
            BigInt a = boost::multiprecision::abs(v);
            const auto lo = static_cast<unsigned __int128>(static_cast<std::uint64_t>(a & 0xFFFFFFFFFFFFFFFFull));
            const auto up = static_cast<unsigned __int128>(static_cast<std::uint64_t>(a >> 64));
            const auto mag = static_cast<__int128>((up << 64) | lo);
            return neg ? -mag : mag;
        } else {
            return v.template convert_to<To>();
        }
    }
}

} // namespace detail

/// Reduced fraction num/den with den >= 1.  Arithmetic is exact; for
/// fixed-width integer types every operation is overflow-checked.
template <class Int>
class BasicRational {
public:
    using integer_type = Int;

    BasicRational() : num_(0), den_(1) {}
    BasicRational(Int n) : num_(std::move(n)), den_(1) {} // NOLINT(google-explicit-constructor)
    BasicRational(Int n, Int d) : num_(std::move(n)), den_(std::move(d)) {
        if (den_ == 0) throw DomainError("rational with zero denominator");
        normalize();
    }

    const Int& num() const { return num_; }
    const Int& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ < 0 ? -1 : (num_ > 0 ? 1 : 0); }

    Int floor() const { return detail::floor_div(num_, den_); }
    /// x - floor(x), always in [0, 1).
    BasicRational frac() const { return make_reduced(detail::floor_mod(num_, den_), den_); }

    double to_double() const { return detail::ratio_to_double(num_, den_); }
    std::string str() const { return detail::int_to_string(num_) + "/" + detail::int_to_string(den_); }

    BasicRational operator-() const { return make_reduced(detail::checked_sub(Int(0), num_), den_); }

    friend BasicRational operator+(const BasicRational& a, const BasicRational& b) {
        if (a.den_ == b.den_) return BasicRational(detail::checked_add(a.num_, b.num_), a.den_);
        const Int g = detail::gcd_int(a.den_, b.den_);
        const Int ad = a.den_ / g;
        const Int bd = b.den_ / g;
        Int n = detail::checked_add(detail::checked_mul(a.num_, bd), detail::checked_mul(b.num_, ad));
        Int d = detail::checked_mul(a.den_, bd);
        return BasicRational(std::move(n), std::move(d));
    }
    friend BasicRational operator-(const BasicRational& a, const BasicRational& b) { return a + (-b); }
    friend BasicRational operator*(const BasicRational& a, const BasicRational& b) {
        const Int g1 = detail::gcd_int(a.num_, b.den_);
        const Int g2 = detail::gcd_int(b.num_, a.den_);
        const Int n1 = g1 == 0 ? a.num_ : a.num_ / g1;
        const Int d2 = g1 == 0 ? b.den_ : b.den_ / g1;
        const Int n2 = g2 == 0 ? b.num_ : b.num_ / g2;
        const Int d1 = g2 == 0 ? a.den_ : a.den_ / g2;
        return make_reduced(detail::checked_mul(n1, n2), detail::checked_mul(d1, d2));
    }
    friend BasicRational operator/(const BasicRational& a, const BasicRational& b) {
        if (b.num_ == 0) throw DomainError("division of rational by zero");
        BasicRational inv;
        inv.num_ = b.den_;
        inv.den_ = b.num_;
        if (inv.den_ < 0) {
            inv.num_ = -inv.num_;
            inv.den_ = -inv.den_;
        }
        return a * inv;
    }
    BasicRational& operator+=(const BasicRational& o) { return *this = *this + o; }
    BasicRational& operator-=(const BasicRational& o) { return *this = *this - o; }
    BasicRational& operator*=(const BasicRational& o) { return *this = *this * o; }
    BasicRational& operator/=(const BasicRational& o) { return *this = *this / o; }

    friend bool operator==(const BasicRational& a, const BasicRational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const BasicRational& a, const BasicRational& b) {
        const Int lhs = detail::checked_mul(a.num_, b.den_);
        const Int rhs = detail::checked_mul(b.num_, a.den_);
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    static BasicRational make_reduced(Int n, Int d) {
        BasicRational r;
        r.num_ = std::move(n);
        r.den_ = std::move(d);
        return r;
    }

    void normalize() {
        if (den_ < 0) {
            num_ = detail::checked_sub(Int(0), num_);
            den_ = detail::checked_sub(Int(0), den_);
        }
        const Int g = detail::gcd_int(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    Int num_;
    Int den_;
};

using Rational = BasicRational<BigInt>;

template <class To, class From>
BasicRational<To> rational_cast(const BasicRational<From>& r) {
    return BasicRational<To>(detail::narrow_int<To>(r.num()), detail::narrow_int<To>(r.den()));
}

/// Parses "p/q" or "p" into a reduced rational.
inline Rational parse_rational(std::string_view text) {
    auto parse_int = [](std::string_view s) -> BigInt {
        std::size_t i = 0;
        if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
        if (i == s.size()) throw DomainError("malformed rational: '" + std::string(s) + "'");
        for (std::size_t k = i; k < s.size(); ++k) {
            if (s[k] < '0' || s[k] > '9') throw DomainError("malformed rational: '" + std::string(s) + "'");
        }
        return BigInt(std::string(s[0] == '+' ? s.substr(1) : s));
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    const BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw DomainError("rational with zero denominator");
    return Rational(parse_int(text.substr(0, slash)), den);
}

} // namespace kashaev

#endif
