#ifndef KASHAEV_INVARIANT_HPP
#define KASHAEV_INVARIANT_HPP

#include "kashaev/cf.hpp"
#include "kashaev/errors.hpp"
#include "kashaev/log_value.hpp"
#include "kashaev/ostrowski.hpp"
#include "kashaev/rational.hpp"
#include "kashaev/sudler.hpp"

#include <cmath>
#include <cstdio>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

namespace kashaev {

inline constexpr std::int64_t kDefaultEnumerationBudget = 20'000'000;

namespace detail {

template <class Int>
void require_half_open_unit(const BasicRational<Int>& r, const char* who) {
    if (r.sign() < 0 || r.num() >= r.den()) {
        throw DomainError(std::string(who) + ": argument " + r.str() + " outside [0,1)");
    }
}

template <class Int>
void check_budget(const Int& q, std::int64_t budget, const char* who) {
    if (q > Int(budget)) {
        throw ResourceError(std::string(who) + ": q = " + int_to_string(q) + " exceeds enumeration budget " +
                            std::to_string(budget));
    }
}

/// ln P_N(x) for N < count along one residue walk; R is the residue type.
template <class Real, class R>
std::vector<Real> log_prefix_walk(R p, R q, std::int64_t count) {
    std::vector<Real> out;
    out.reserve(static_cast<std::size_t>(count));
    out.push_back(Real(0.0));
    CompensatedSum<Real> run;
    R res = 0;
    for (std::int64_t n = 1; n < count; ++n) {
        res += p;
        if (res >= q) res -= q;
        run.add(log_2sin_pi<Real>(res, q));
        out.push_back(run.value());
    }
    return out;
}

/// Prefix table for arbitrary-size denominators (count must stay small).
template <class Int>
std::vector<double> log_prefix_any(const BasicRational<Int>& x, std::int64_t count) {
    if (count <= 0) return {};
    if (x.den() < Int(std::int64_t{1} << 62)) {
        return log_prefix_walk<double, std::int64_t>(narrow_int<std::int64_t>(x.num()),
                                                     narrow_int<std::int64_t>(x.den()), count);
    }
    if (narrow_int<BigInt>(x.den()) < (BigInt(1) << 125)) {
        return log_prefix_walk<double, __int128>(narrow_int<__int128>(x.num()), narrow_int<__int128>(x.den()), count);
    }
    return log_prefix_walk<double, BigInt>(narrow_int<BigInt>(x.num()), narrow_int<BigInt>(x.den()), count);
}

} // namespace detail

/// ln J(r), J(r) = sum_{N<q} P_N(r)^2, in one O(q) sweep.  J(0) = 1.
template <class Real, class Int>
Real j_log_real(const BasicRational<Int>& r) {
    detail::require_half_open_unit(r, "j_log");
    if (r.is_zero()) return Real(0.0);
    const auto q = detail::narrow_int<std::int64_t>(r.den());
    const auto p = detail::narrow_int<std::int64_t>(r.num());
    LogSum<Real> acc;
    acc.add(Real(0.0));
    CompensatedSum<Real> run;
    std::int64_t res = 0;
    for (std::int64_t n = 1; n < q; ++n) {
        res += p;
        if (res >= q) res -= q;
        run.add(detail::log_2sin_pi<Real>(res, q));
        acc.add(Real(2.0) * run.value());
    }
    return acc.log_value();
}

template <class Int>
LogValue j_log(const BasicRational<Int>& r, Precision precision = Precision::Double) {
    if (precision == Precision::DoubleDouble) return LogValue::from_log(j_log_real<DoubleDouble>(r).to_double());
    return LogValue::from_log(j_log_real<double>(r));
}

/// h(r) = ln J(r) - ln J({1/r}).
template <class Int>
double h_value(const BasicRational<Int>& r, Precision precision = Precision::Double) {
    detail::require_unit_interval(r, "h_value");
    if (precision == Precision::DoubleDouble) {
        return (j_log_real<DoubleDouble>(r) - j_log_real<DoubleDouble>(gauss_shift(r))).to_double();
    }
    return j_log_real<double>(r) - j_log_real<double>(gauss_shift(r));
}

/// ln J(r) summed over admissible digit tuples, each term assembled from
/// shifted Sudler products with exact perturbations.  Digits are fixed from
/// the top down, so the factors of a common upper part are evaluated once.
template <class Int>
LogValue j_log_grouped(const BasicRational<Int>& r) {
    using Q = BasicRational<Int>;
    detail::require_half_open_unit(r, "j_log_grouped");
    if (r.is_zero()) return LogValue::one();
    const auto ctx = cf_context(r);
    const std::size_t L = ctx.length();
    LogSum<double> acc;

    struct Frame {
        const BasicCfContext<Int>& ctx;
        LogSum<double>& acc;
        std::size_t L;
        // level i: digits above i are fixed; upper_tail = sum_{j>i} (-1)^j b_j delta_j.
        void visit(std::size_t i, const Q& upper_tail, double log_prod, bool upper_is_max) {
            const Q base = (i % 2 == 0) ? upper_tail : -upper_tail;
            const Q qi(ctx.q(static_cast<long>(i)));
            const Q& di = ctx.delta(static_cast<long>(i));
            const Int cap = upper_is_max ? Int(0) : digit_cap(ctx, i);
            double lp = log_prod;
            for (Int b(0);; b += 1) {
                const Q tail = (i % 2 == 0) ? upper_tail + Q(b) * di : upper_tail - Q(b) * di;
                const bool is_max = (i >= 1) && b == ctx.c(i + 1);
                if (i == 0) {
                    acc.add(2.0 * lp);
                } else {
                    visit(i - 1, tail, lp, is_max);
                }
                if (b == cap) break;
                // factor s = b joins once the digit reaches b + 1
                const LogValue f = shifted_sudler_log(i, ctx, qi * (Q(b) * di + base));
                if (f.zero) return;
                lp += f.log_mag;
            }
        }
    };
    Frame frame{ctx, acc, L};
    frame.visit(L - 1, Q(0), 0.0, false);
    return acc.result();
}

/// Sums of P_N(r)^2 over the good/evil partition and the split components,
/// together with their images under the digit shift S in r' = {1/r}.
/// Vectors are indexed by j - params.j_lo.
struct RestrictedSums {
    PartitionParams params;
    LogValue total;
    LogValue evil;
    std::vector<LogValue> good;  // G_{j,L}
    std::vector<LogValue> head;  // G^(1)_j, includes N_1 = 0 when it qualifies
    std::vector<LogValue> tail;  // G^(2)_{j,L}
    std::vector<std::int64_t> good_count, head_count, tail_count;
    std::int64_t evil_count = 0;

    bool has_primed = false;
    LogValue total_prime;  // J(r')
    LogValue evil_prime;   // over the image S(E_L)
    std::vector<LogValue> good_prime, head_prime, tail_prime;
    // Unsquared tail sums, summed over j (sum of P_{N_2}, not P_{N_2}^2).
    LogValue tail_plain_sum, tail_plain_sum_prime;

    double evil_mass_ratio() const { return evil.zero ? 0.0 : std::exp(evil.log_mag - total.log_mag); }
    double split_ratio(std::size_t idx) const {
        return std::exp(good[idx].log_mag - head[idx].log_mag - tail[idx].log_mag);
    }
    double split_ratio_prime(std::size_t idx) const {
        return std::exp(good_prime[idx].log_mag - head_prime[idx].log_mag - tail_prime[idx].log_mag);
    }
    /// ln of evil + sum of good buckets, for the partition identity.
    double partition_log() const {
        LogSum<double> s;
        s.add(evil);
        for (const auto& g : good) s.add(g);
        return s.result().log_mag;
    }
    double tail_ratio_squared() const {
        LogSum<double> a, b;
        for (const auto& v : tail) a.add(v);
        for (const auto& v : tail_prime) b.add(v);
        return std::exp(a.result().log_mag - b.result().log_mag);
    }
    double tail_ratio_plain() const { return std::exp(tail_plain_sum.log_mag - tail_plain_sum_prime.log_mag); }
};

template <class Int>
RestrictedSums restricted_sums(const BasicRational<Int>& r, const PartitionParams& params,
                               std::int64_t budget = kDefaultEnumerationBudget) {
    detail::require_unit_interval(r, "restricted_sums");
    detail::check_budget(r.den(), budget, "restricted_sums");
    const auto ctx = cf_context(r);
    const std::size_t L = ctx.length();
    check_partition_fits(params, L);
    const DigitSystem sys(ctx);
    const std::int64_t qL = sys.q(L);
    const std::size_t W = params.window_count();

    RestrictedSums out;
    out.params = params;
    out.good_count.assign(W, 0);
    out.head_count.assign(W, 0);
    out.tail_count.assign(W, 0);

    const std::vector<double> logp = sudler_log_prefix(r, qL);

    out.has_primed = L >= 2;
    std::vector<double> logp_prime;
    std::vector<std::int64_t> qprime;
    if (out.has_primed) {
        const auto rp = gauss_shift(r);
        const auto ctx_p = cf_context(rp);
        for (std::size_t i = 0; i + 1 <= ctx_p.length(); ++i) {
            qprime.push_back(detail::narrow_int<std::int64_t>(ctx_p.q(static_cast<long>(i))));
        }
        logp_prime = sudler_log_prefix(rp, detail::narrow_int<std::int64_t>(rp.den()));
    }
    const std::size_t qp_total = logp_prime.size();

    LogSum<double> total, evil;
    std::vector<LogSum<double>> good(W), head(W), tail(W);
    LogSum<double> evil_p;
    std::vector<LogSum<double>> good_p(W), head_p(W), tail_p(W);
    LogSum<double> tail_plain, tail_plain_p;
    // Image sets under S are deduplicated per bucket.
    std::vector<bool> seen_evil(out.has_primed ? qp_total : 0);
    std::vector<std::vector<bool>> seen_good(W), seen_head(W), seen_tail(W);
    if (out.has_primed) {
        for (std::size_t w = 0; w < W; ++w) {
            seen_good[w].assign(qp_total, false);
            seen_head[w].assign(qp_total, false);
            seen_tail[w].assign(qp_total, false);
        }
    }
    auto mark = [&](std::vector<bool>& seen, std::int64_t np, LogSum<double>& bucket) {
        auto idx = static_cast<std::size_t>(np);
        if (seen[idx]) return false;
        seen[idx] = true;
        bucket.add(2.0 * logp_prime[idx]);
        return true;
    };

    std::vector<std::int64_t> digits(L);
    for (std::int64_t N = 0; N < qL; ++N) {
        sys.encode(N, digits);
        const double term = 2.0 * logp[static_cast<std::size_t>(N)];
        total.add(term);
        std::size_t lowest_nonzero = L;
        for (std::size_t i = 0; i < L; ++i) {
            if (digits[i] != 0) {
                lowest_nonzero = i;
                break;
            }
        }
        std::int64_t np = 0;
        if (out.has_primed) {
            for (std::size_t i = 1; i < L; ++i) np += digits[i] * qprime[i - 1];
        }
        const auto cls = classify_digits(std::span<const std::int64_t>(digits), params);
        if (cls.is_evil()) {
            evil.add(term);
            ++out.evil_count;
            if (out.has_primed) mark(seen_evil, np, evil_p);
        } else {
            const std::size_t w = cls.j() - params.j_lo;
            good[w].add(term);
            ++out.good_count[w];
            if (out.has_primed) mark(seen_good[w], np, good_p[w]);
            if (N < sys.q(params.window_begin(cls.j()))) {
                head[w].add(term);
                ++out.head_count[w];
                if (out.has_primed) mark(seen_head[w], np, head_p[w]);
            }
        }
        for (std::size_t w = 0; w < W; ++w) {
            if (lowest_nonzero < params.window_end(params.j_lo + w)) break;
            tail[w].add(term);
            ++out.tail_count[w];
            tail_plain.add(0.5 * term);
            if (out.has_primed && mark(seen_tail[w], np, tail_p[w])) {
                tail_plain_p.add(logp_prime[static_cast<std::size_t>(np)]);
            }
        }
    }

    out.total = total.result();
    out.evil = evil.result();
    for (std::size_t w = 0; w < W; ++w) {
        out.good.push_back(good[w].result());
        out.head.push_back(head[w].result());
        out.tail.push_back(tail[w].result());
    }
    out.tail_plain_sum = tail_plain.result();
    if (out.has_primed) {
        out.total_prime = j_log(gauss_shift(r));
        out.evil_prime = evil_p.result();
        for (std::size_t w = 0; w < W; ++w) {
            out.good_prime.push_back(good_p[w].result());
            out.head_prime.push_back(head_p[w].result());
            out.tail_prime.push_back(tail_p[w].result());
        }
        out.tail_plain_sum_prime = tail_plain_p.result();
    }
    return out;
}

namespace detail {

/// M_k evaluated at a single proxy depth.
template <class Int>
double m_k_at_depth(const std::vector<Int>& prefix, std::size_t k, std::size_t depth) {
    const auto r = cf_value(cf_from_prefix(prefix, depth));
    require_unit_interval(r, "m_k_alpha");
    const auto ctx = cf_context(r);
    const auto params = make_partition_params(k);
    check_partition_fits(params, ctx.length());
    if (ctx.length() < 2) throw DomainError("m_k_alpha: proxy too shallow");
    const auto rp = gauss_shift(r);
    const auto ctx_p = cf_context(rp);

    const std::size_t max_j = params.j_hi - 1;
    const std::size_t top = params.window_begin(max_j);
    const auto limit = narrow_int<std::int64_t>(ctx.q(static_cast<long>(top)));
    const std::vector<double> logp = log_prefix_any(r, limit);
    std::vector<std::int64_t> qprime;
    for (std::size_t i = 0; i < top; ++i) qprime.push_back(narrow_int<std::int64_t>(ctx_p.q(static_cast<long>(i))));
    const std::vector<double> logp_p = log_prefix_any(rp, qprime.back() + 1);

    LogSum<double> num, den;
    const DigitSystem sys(ctx, params.digits_needed());
    std::vector<std::int64_t> digits(params.digits_needed());
    std::vector<std::set<std::int64_t>> images(params.window_count());
    for (std::int64_t N = 0; N < limit; ++N) {
        sys.encode(N, digits);
        const auto cls = classify_digits(std::span<const std::int64_t>(digits), params);
        if (cls.is_evil() || N >= sys.q(params.window_begin(cls.j()))) continue;
        num.add(2.0 * logp[static_cast<std::size_t>(N)]);
        std::int64_t np = 0;
        for (std::size_t i = 1; i < params.window_begin(cls.j()); ++i) {
            np += digits[i] * qprime[i - 1];
        }
        if (static_cast<std::size_t>(np) >= logp_p.size()) throw DomainError("m_k_alpha: shifted index out of range");
        if (images[cls.j() - params.j_lo].insert(np).second) den.add(2.0 * logp_p[static_cast<std::size_t>(np)]);
    }
    return num.result().log_mag - den.result().log_mag;
}

} // namespace detail

inline constexpr std::size_t kDefaultGuard = 60;
inline constexpr double kGuardTolerance = 1e-8;

/// M_k(alpha) with alpha proxied by its depth k + guard convergent; the value
/// is recomputed at depth k + guard + 10 and must agree to 1e-8.
template <class Int>
double m_k_alpha(const std::vector<Int>& prefix, std::size_t k, std::size_t guard = kDefaultGuard) {
    const std::size_t depth = k + guard;
    if (prefix.size() < depth + 10) {
        throw DomainError("m_k_alpha: prefix of length " + std::to_string(prefix.size()) + " shorter than k + guard + 10 = " +
                          std::to_string(depth + 10));
    }
    const double value = detail::m_k_at_depth(prefix, k, depth);
    const double check = detail::m_k_at_depth(prefix, k, depth + 10);
    if (!(std::abs(value - check) <= kGuardTolerance)) {
        char moved[32];
        std::snprintf(moved, sizeof moved, "%.3e", std::abs(value - check));
        throw PrecisionError(std::string("m_k_alpha: value moved by ") + moved + " when the guard grew by 10");
    }
    return value;
}

} // namespace kashaev

#endif
