#ifndef KASHAEV_OSTROWSKI_HPP
#define KASHAEV_OSTROWSKI_HPP

#include "kashaev/cf.hpp"
#include "kashaev/errors.hpp"
#include "kashaev/rational.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kashaev {

/// Digit vector (b_0, ..., b_{K-1}) relative to the convergent denominators
/// of a context.  The context must outlive the digits.
template <class Int>
struct BasicOstrowskiDigits {
    std::vector<Int> digits;
    const BasicCfContext<Int>* context = nullptr;

    std::size_t size() const { return digits.size(); }
    const Int& operator[](std::size_t i) const { return digits[i]; }

    friend bool operator==(const BasicOstrowskiDigits& a, const BasicOstrowskiDigits& b) {
        return a.digits == b.digits && a.context == b.context;
    }
};

using OstrowskiDigits = BasicOstrowskiDigits<BigInt>;

/// Largest value digit i may take: c_1 - 1 for i = 0, c_{i+1} otherwise.
template <class Int>
Int digit_cap(const BasicCfContext<Int>& ctx, std::size_t i) {
    return i == 0 ? Int(ctx.c(1) - 1) : ctx.c(i + 1);
}

template <class Int>
bool is_admissible(std::span<const Int> digits, const BasicCfContext<Int>& ctx) {
    if (digits.size() > ctx.length()) return false;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] < 0 || digits[i] > digit_cap(ctx, i)) return false;
        if (i >= 1 && digits[i] == ctx.c(i + 1) && digits[i - 1] != 0) return false;
    }
    return true;
}

template <class Int>
bool is_admissible(const BasicOstrowskiDigits<Int>& d) {
    return d.context != nullptr && is_admissible(std::span<const Int>(d.digits), *d.context);
}

/// Greedy expansion N = sum b_i q_i over the first K denominators.
template <class Int>
BasicOstrowskiDigits<Int> ostrowski_encode(const Int& N, const BasicCfContext<Int>& ctx, std::size_t K) {
    if (K > ctx.length()) {
        throw DomainError("ostrowski_encode: K = " + std::to_string(K) + " exceeds L = " +
                          std::to_string(ctx.length()));
    }
    if (N < 0 || N >= ctx.q(static_cast<long>(K))) {
        throw RangeError("ostrowski_encode: N = " + detail::int_to_string(N) + " outside [0, q_K)");
    }
    BasicOstrowskiDigits<Int> out;
    out.context = &ctx;
    out.digits.assign(K, Int(0));
    Int rem = N;
    for (std::size_t i = K; i-- > 0;) {
        const Int& qi = ctx.q(static_cast<long>(i));
        Int b = rem / qi;
        const Int cap = digit_cap(ctx, i);
        if (b > cap) b = cap;
        rem -= b * qi;
        out.digits[i] = std::move(b);
    }
    if (rem != 0) throw ValidationError("ostrowski_encode: greedy expansion left a remainder");
    return out;
}

template <class Int>
Int ostrowski_decode(const BasicOstrowskiDigits<Int>& d) {
    if (!is_admissible(d)) throw ValidationError("ostrowski_decode: digits are not admissible");
    Int n(0);
    for (std::size_t i = 0; i < d.digits.size(); ++i) {
        n = detail::checked_add(n, detail::checked_mul(d.digits[i], d.context->q(static_cast<long>(i))));
    }
    return n;
}

/// All admissible K-tuples in increasing order of their value (a single-pass
/// stream).  Lexicographic order read from the top digit coincides with
/// numeric order, so the successor bumps the lowest digit that may grow and
/// clears everything below it.
template <class Int>
class AdmissibleTuples {
public:
    AdmissibleTuples(const BasicCfContext<Int>& ctx, std::size_t K) : ctx_(&ctx), K_(K) {
        if (K > ctx.length()) {
            throw DomainError("enumerate_admissible: K = " + std::to_string(K) + " exceeds L = " +
                              std::to_string(ctx.length()));
        }
    }

    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = BasicOstrowskiDigits<Int>;
        using difference_type = std::ptrdiff_t;
        using reference = const value_type&;
        using pointer = const value_type*;

        iterator() = default;
        explicit iterator(const AdmissibleTuples* owner) : owner_(owner) {
            current_.context = owner->ctx_;
            current_.digits.assign(owner->K_, Int(0));
        }

        reference operator*() const { return current_; }
        pointer operator->() const { return &current_; }
        iterator& operator++() {
            if (!advance()) owner_ = nullptr;
            return *this;
        }
        void operator++(int) { ++*this; }
        friend bool operator==(const iterator& a, const iterator& b) { return a.owner_ == b.owner_; }

    private:
        bool advance() {
            const auto& ctx = *owner_->ctx_;
            auto& b = current_.digits;
            for (std::size_t i = 0; i < b.size(); ++i) {
                const Int next = b[i] + 1;
                if (next > digit_cap(ctx, i)) continue;
                // The digit above pins this one to zero when it is maximal.
                if (i + 1 < b.size() && b[i + 1] == ctx.c(i + 2)) continue;
                for (std::size_t k = 0; k < i; ++k) b[k] = 0;
                b[i] = next;
                return true;
            }
            return false;
        }

        const AdmissibleTuples* owner_ = nullptr;
        value_type current_;
    };

    iterator begin() const { return iterator(this); }
    iterator end() const { return iterator(); }

private:
    const BasicCfContext<Int>* ctx_;
    std::size_t K_;
};

template <class Int>
AdmissibleTuples<Int> enumerate_admissible(const BasicCfContext<Int>& ctx, std::size_t K) {
    return AdmissibleTuples<Int>(ctx, K);
}

/// S(N) = sum_{i>=1} b_i(N) q'_i, where q'_i is the denominator of
/// [0; c_2, ..., c_i]; ctx_prime must be the context of gauss_shift(r).
template <class Int>
Int shift_S(const Int& N, const BasicCfContext<Int>& ctx, const BasicCfContext<Int>& ctx_prime) {
    const std::size_t L = ctx.length();
    if (L < 2) throw DomainError("shift_S: needs an expansion of length >= 2");
    if (ctx_prime.length() + 1 != L) throw DomainError("shift_S: context of r' does not match r");
    const auto d = ostrowski_encode(N, ctx, L);
    Int out(0);
    for (std::size_t i = 1; i < L; ++i) out += d.digits[i] * ctx_prime.q(static_cast<long>(i - 1));
    return out;
}

template <class Int>
Int shift_S(const Int& N, const BasicRational<Int>& r) {
    const auto ctx = cf_context(r);
    if (ctx.length() < 2) throw DomainError("shift_S: needs an expansion of length >= 2");
    const auto ctx_prime = cf_context(gauss_shift(r));
    return shift_S(N, ctx, ctx_prime);
}

/// Window geometry for the good/evil split.  Windows are [jm, (j+1)m) for
/// j_lo <= j < j_hi.
struct PartitionParams {
    std::size_t k = 0;
    std::size_t m = 0;
    std::size_t t = 0;
    std::size_t j_lo = 0;
    std::size_t j_hi = 0;

    bool in_range(std::size_t j) const { return j >= j_lo && j < j_hi; }
    std::size_t window_begin(std::size_t j) const { return j * m; }
    std::size_t window_end(std::size_t j) const { return (j + 1) * m; }
    /// One past the largest digit index any window inspects (= t m).
    std::size_t digits_needed() const { return t * m; }
    std::size_t window_count() const { return j_hi - j_lo; }
};

inline PartitionParams make_partition_params(std::size_t k) {
    if (k < 4) throw DomainError("partition parameters need k >= 4, got " + std::to_string(k));
    PartitionParams p;
    p.k = k;
    const double loglog = std::log(std::log(static_cast<double>(k)));
    p.m = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(loglog)));
    p.t = k / p.m;
    p.j_lo = (p.t + 1) / 2;
    p.j_hi = p.t;
    return p;
}

class Classification {
public:
    static Classification good(std::size_t j) { return Classification(false, j); }
    static Classification evil() { return Classification(true, 0); }

    bool is_evil() const { return evil_; }
    bool is_good() const { return !evil_; }
    std::size_t j() const {
        if (evil_) throw DomainError("Classification::j() on an evil integer");
        return j_;
    }
    friend bool operator==(const Classification&, const Classification&) = default;

private:
    Classification(bool evil, std::size_t j) : evil_(evil), j_(j) {}
    bool evil_;
    std::size_t j_;
};

/// Window test on raw digits; digits must cover indices below t m.
template <class D>
bool window_is_zero(std::span<const D> digits, const PartitionParams& params, std::size_t j) {
    for (std::size_t i = params.window_begin(j); i < params.window_end(j); ++i) {
        if (digits[i] != 0) return false;
    }
    return true;
}

template <class D>
Classification classify_digits(std::span<const D> digits, const PartitionParams& params) {
    for (std::size_t j = params.j_lo; j < params.j_hi; ++j) {
        if (window_is_zero(digits, params, j)) return Classification::good(j);
    }
    return Classification::evil();
}

inline void check_partition_fits(const PartitionParams& params, std::size_t L) {
    if (params.digits_needed() > L) {
        throw DomainError("partition with k = " + std::to_string(params.k) + " inspects digit index " +
                          std::to_string(params.digits_needed() - 1) + " but L = " + std::to_string(L));
    }
}

template <class Int>
Classification classify(const Int& N, const BasicCfContext<Int>& ctx, const PartitionParams& params) {
    check_partition_fits(params, ctx.length());
    const auto d = ostrowski_encode(N, ctx, ctx.length());
    return classify_digits(std::span<const Int>(d.digits), params);
}

/// pi_j: zero the digits of window j.
template <class Int>
Int project_pi_j(const Int& N, const BasicCfContext<Int>& ctx, const PartitionParams& params, std::size_t j) {
    if (!params.in_range(j)) {
        throw DomainError("project_pi_j: j = " + std::to_string(j) + " outside [" + std::to_string(params.j_lo) +
                          ", " + std::to_string(params.j_hi) + ")");
    }
    check_partition_fits(params, ctx.length());
    auto d = ostrowski_encode(N, ctx, ctx.length());
    for (std::size_t i = params.window_begin(j); i < params.window_end(j); ++i) d.digits[i] = 0;
    return ostrowski_decode(d);
}

/// Machine-integer view of the first L denominators, for O(q L) sweeps.
class DigitSystem {
public:
    template <class Int>
    explicit DigitSystem(const BasicCfContext<Int>& ctx) : DigitSystem(ctx, ctx.length()) {}

    /// Only the first K digits; valid for N < q_K.
    template <class Int>
    DigitSystem(const BasicCfContext<Int>& ctx, std::size_t K) {
        if (K > ctx.length()) throw DomainError("DigitSystem: K exceeds the expansion length");
        const std::size_t L = K;
        q_.reserve(L + 1);
        cap_.reserve(L);
        for (std::size_t i = 0; i <= L; ++i) {
            q_.push_back(detail::narrow_int<std::int64_t>(ctx.q(static_cast<long>(i))));
        }
        for (std::size_t i = 0; i < L; ++i) cap_.push_back(detail::narrow_int<std::int64_t>(digit_cap(ctx, i)));
    }

    std::size_t length() const { return cap_.size(); }
    std::int64_t q(std::size_t i) const { return q_[i]; }
    std::int64_t cap(std::size_t i) const { return cap_[i]; }

    /// Writes the L digits of N (< q_L) into out.
    void encode(std::int64_t N, std::span<std::int64_t> out) const {
        std::int64_t rem = N;
        for (std::size_t i = cap_.size(); i-- > 0;) {
            std::int64_t b = rem / q_[i];
            if (b > cap_[i]) b = cap_[i];
            rem -= b * q_[i];
            out[i] = b;
        }
    }

private:
    std::vector<std::int64_t> q_;
    std::vector<std::int64_t> cap_;
};

} // namespace kashaev

#endif
