#ifndef KASHAEV_CF_HPP
#define KASHAEV_CF_HPP

#include "kashaev/errors.hpp"
#include "kashaev/rational.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace kashaev {

/// Finite continued fraction [c_0; c_1, ..., c_L].
template <class Int>
struct BasicContinuedFraction {
    std::vector<Int> quotients;

    /// Length L (number of partial quotients after c_0).
    std::size_t length() const { return quotients.empty() ? 0 : quotients.size() - 1; }
    const Int& operator[](std::size_t i) const { return quotients[i]; }

    bool is_canonical() const {
        if (quotients.empty()) return false;
        for (std::size_t i = 1; i < quotients.size(); ++i) {
            if (quotients[i] < 1) return false;
        }
        return length() == 0 || quotients.back() >= 2;
    }

    std::string str() const {
        std::string s = "[";
        for (std::size_t i = 0; i < quotients.size(); ++i) {
            s += detail::int_to_string(quotients[i]);
            s += (i == 0) ? ";" : (i + 1 < quotients.size() ? "," : "");
        }
        return s + "]";
    }

    friend bool operator==(const BasicContinuedFraction&, const BasicContinuedFraction&) = default;
};

using ContinuedFraction = BasicContinuedFraction<BigInt>;

/// Canonical short expansion of r in [0, 1); c_0 = 0 and c_L >= 2 when L >= 1.
template <class Int>
BasicContinuedFraction<Int> cf_expand(const BasicRational<Int>& r) {
    if (r.sign() < 0 || r.num() >= r.den()) {
        throw DomainError("cf_expand: argument " + r.str() + " outside [0,1)");
    }
    BasicContinuedFraction<Int> cf;
    cf.quotients.push_back(Int(0));
    Int n = r.num();
    Int d = r.den();
    // Euclid on 1/x = d/n; the last quotient is >= 2 automatically since gcd = 1.
    while (n != 0) {
        Int c = d / n;
        Int rem = d - c * n;
        cf.quotients.push_back(std::move(c));
        d = std::move(n);
        n = std::move(rem);
    }
    return cf;
}

/// Exact value of a continued fraction, via the convergent recurrence.
template <class Int>
BasicRational<Int> cf_value(const BasicContinuedFraction<Int>& cf) {
    if (cf.quotients.empty()) throw DomainError("cf_value: empty continued fraction");
    Int p_prev(1), q_prev(0);
    Int p = cf.quotients[0], q(1);
    for (std::size_t i = 1; i < cf.quotients.size(); ++i) {
        const Int& c = cf.quotients[i];
        if (c < 1) throw DomainError("cf_value: partial quotient c_" + std::to_string(i) + " < 1");
        Int pn = detail::checked_add(detail::checked_mul(c, p), p_prev);
        Int qn = detail::checked_add(detail::checked_mul(c, q), q_prev);
        p_prev = std::move(p);
        q_prev = std::move(q);
        p = std::move(pn);
        q = std::move(qn);
    }
    // Consecutive convergents are coprime, the constructor reduction is a no-op.
    return BasicRational<Int>(std::move(p), std::move(q));
}

/// The Gauss map r -> {1/r} = [0; c_2, ..., c_L].
template <class Int>
BasicRational<Int> gauss_shift(const BasicRational<Int>& r) {
    if (r.sign() <= 0 || r.num() >= r.den()) {
        throw DomainError("gauss_shift: argument " + r.str() + " outside (0,1)");
    }
    return BasicRational<Int>(r.den() % r.num(), r.num());
}

/// Convergents and Diophantine quantities of a finite expansion, all exact.
///
/// Index conventions: p(l), q(l), delta(l) are defined for -1 <= l <= L;
/// lambda(l) for 0 <= l <= L; rev(l) = [0; c_l, ..., c_1] for 0 <= l <= L
/// (rev(0) = 0); alpha_tail(l) = [c_l; c_{l+1}, ..., c_L] for 0 <= l <= L.
/// delta(l) = (-1)^l (q_l x - p_l) = |q_l x - p_l|.
template <class Int>
class BasicCfContext {
public:
    using integer_type = Int;
    using rational_type = BasicRational<Int>;

    explicit BasicCfContext(BasicContinuedFraction<Int> cf) : cf_(std::move(cf)) {
        if (cf_.quotients.empty()) throw DomainError("cf_context: empty continued fraction");
        const std::size_t L = cf_.length();
        p_.reserve(L + 2);
        q_.reserve(L + 2);
        p_.push_back(Int(1));
        q_.push_back(Int(0));
        p_.push_back(cf_.quotients[0]);
        q_.push_back(Int(1));
        for (std::size_t i = 1; i <= L; ++i) {
            const Int& c = cf_.quotients[i];
            if (c < 1) throw DomainError("cf_context: partial quotient c_" + std::to_string(i) + " < 1");
            p_.push_back(detail::checked_add(detail::checked_mul(c, p_[i]), p_[i - 1]));
            q_.push_back(detail::checked_add(detail::checked_mul(c, q_[i]), q_[i - 1]));
        }
        value_ = rational_type(p_.back(), q_.back());

        delta_.reserve(L + 2);
        for (std::size_t i = 0; i <= L + 1; ++i) {
            rational_type d = rational_type(q_[i]) * value_ - rational_type(p_[i]);
            delta_.push_back(d.sign() < 0 ? -d : d);
        }
        lambda_.reserve(L + 1);
        for (std::size_t l = 0; l <= L; ++l) lambda_.push_back(rational_type(q_[l + 1]) * delta_[l + 1]);

        rev_.reserve(L + 1);
        rev_.push_back(rational_type(0));
        for (std::size_t l = 1; l <= L; ++l) {
            rev_.push_back(rational_type(1) / (rational_type(cf_.quotients[l]) + rev_[l - 1]));
        }

        alpha_.assign(L + 1, rational_type(0));
        alpha_[L] = rational_type(cf_.quotients[L]);
        for (std::size_t l = L; l-- > 0;) {
            alpha_[l] = rational_type(cf_.quotients[l]) + rational_type(1) / alpha_[l + 1];
        }
    }

    const BasicContinuedFraction<Int>& cf() const { return cf_; }
    std::size_t length() const { return cf_.length(); }
    const Int& c(std::size_t i) const { return cf_.quotients[i]; }
    const rational_type& value() const { return value_; }

    const Int& p(long l) const { return p_[static_cast<std::size_t>(l + 1)]; }
    const Int& q(long l) const { return q_[static_cast<std::size_t>(l + 1)]; }
    const rational_type& delta(long l) const { return delta_[static_cast<std::size_t>(l + 1)]; }
    const rational_type& lambda(std::size_t l) const { return lambda_[l]; }
    /// lambda_{i,j} = q_i delta_{i+j}.
    rational_type lambda(std::size_t i, std::size_t j) const {
        return rational_type(q(static_cast<long>(i))) * delta(static_cast<long>(i + j));
    }
    const rational_type& rev(std::size_t l) const { return rev_[l]; }
    const rational_type& alpha_tail(std::size_t l) const { return alpha_[l]; }

private:
    BasicContinuedFraction<Int> cf_;
    rational_type value_;
    std::vector<Int> p_, q_;
    std::vector<rational_type> delta_;
    std::vector<rational_type> lambda_;
    std::vector<rational_type> rev_;
    std::vector<rational_type> alpha_;
};

using CfContext = BasicCfContext<BigInt>;

template <class Int>
BasicCfContext<Int> cf_context(BasicContinuedFraction<Int> cf) {
    return BasicCfContext<Int>(std::move(cf));
}

template <class Int>
BasicCfContext<Int> cf_context(const BasicRational<Int>& r) {
    return BasicCfContext<Int>(cf_expand(r));
}

/// [0; a_1, ..., a_n] built from a prefix of partial quotients (a_1 first).
template <class Int>
BasicContinuedFraction<Int> cf_from_prefix(const std::vector<Int>& prefix, std::size_t n) {
    if (n > prefix.size()) throw DomainError("prefix shorter than requested depth");
    BasicContinuedFraction<Int> cf;
    cf.quotients.reserve(n + 1);
    cf.quotients.push_back(Int(0));
    for (std::size_t i = 0; i < n; ++i) cf.quotients.push_back(prefix[i]);
    return cf;
}

} // namespace kashaev

#endif
