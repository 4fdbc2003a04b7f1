#ifndef KASHAEV_SUDLER_HPP
#define KASHAEV_SUDLER_HPP

#include "kashaev/cf.hpp"
#include "kashaev/double_double.hpp"
#include "kashaev/errors.hpp"
#include "kashaev/log_value.hpp"
#include "kashaev/ostrowski.hpp"
#include "kashaev/rational.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace kashaev {

namespace detail {

/// ln(2 sin(pi num/den)) for 0 < num < den, folding num/den into (0, 1/2]
/// before the single transcendental evaluation.
template <class Real, class R>
Real log_2sin_pi(R num, R den) {
    const R folded = (den - num < num) ? den - num : num;
    if constexpr (std::is_same_v<Real, double>) {
        double u;
        if constexpr (std::is_same_v<R, std::int64_t>) {
            u = static_cast<double>(folded) / static_cast<double>(den);
        } else {
            u = static_cast<double>(static_cast<long double>(folded) / static_cast<long double>(den));
        }
        return std::log(2.0 * std::sin(std::numbers::pi * u));
    } else {
        const DoubleDouble u = DoubleDouble::from_int(folded) / DoubleDouble::from_int(den);
        return dd::log(DoubleDouble(2.0) * dd::sin_pi(u));
    }
}

template <class Real>
struct WalkResult {
    Real log{};
    bool zero = false;
};

/// Sum of ln|2 sin(pi r_n/mod)| for r_n = (start + n step) mod mod, n = 1..count.
template <class Real, class R>
WalkResult<Real> residue_walk(R start, R step, R mod, std::int64_t count) {
    CompensatedSum<Real> acc;
    bool zero = false;
    R res = start;
    for (std::int64_t n = 1; n <= count; ++n) {
        res += step;
        if (res >= mod) res -= mod;
        if (res == 0) {
            zero = true;
            continue;
        }
        acc.add(log_2sin_pi<Real>(res, mod));
    }
    return {acc.value(), zero};
}

/// Chooses the narrowest machine integer able to hold 2 * mod.
template <class Real, class Int>
WalkResult<Real> residue_walk_dispatch(const Int& start, const Int& step, const Int& mod, std::int64_t count) {
    if (mod < Int(std::int64_t{1} << 62)) {
        return residue_walk<Real, std::int64_t>(narrow_int<std::int64_t>(start), narrow_int<std::int64_t>(step),
                                                narrow_int<std::int64_t>(mod), count);
    }
    if constexpr (!std::is_same_v<Int, std::int64_t>) {
        const BigInt limit = BigInt(1) << 125;
        if (narrow_int<BigInt>(mod) < limit) {
            return residue_walk<Real, __int128>(narrow_int<__int128>(start), narrow_int<__int128>(step),
                                                narrow_int<__int128>(mod), count);
        }
    }
    throw OverflowError("residue walk: modulus exceeds 125 bits");
}

template <class Int>
void require_unit_interval(const BasicRational<Int>& x, const char* who) {
    if (x.sign() <= 0 || x.num() >= x.den()) {
        throw DomainError(std::string(who) + ": argument " + x.str() + " outside (0,1)");
    }
}

template <class Int>
std::int64_t count_of(const Int& n, const char* who) {
    if (n < 0) throw DomainError(std::string(who) + ": negative count");
    if (n > Int(std::numeric_limits<std::int64_t>::max())) throw ResourceError(std::string(who) + ": count too large");
    return narrow_int<std::int64_t>(n);
}

} // namespace detail

/// ln P_N(x) with P_N(x) = prod_{n=1}^N |2 sin(pi n x)|, in the requested precision.
template <class Real, class Int>
Real sudler_log_P_real(const Int& N, const BasicRational<Int>& x) {
    detail::require_unit_interval(x, "sudler_log_P");
    if (N < 0 || N >= x.den()) {
        throw DomainError("sudler_log_P: N = " + detail::int_to_string(N) + " must satisfy 0 <= N < q = " +
                          detail::int_to_string(x.den()));
    }
    const auto w = detail::residue_walk_dispatch<Real>(Int(0), x.num(), x.den(), detail::count_of(N, "sudler_log_P"));
    return w.log;
}

template <class Int>
LogValue sudler_log_P(const Int& N, const BasicRational<Int>& x, Precision precision = Precision::Double) {
    if (precision == Precision::DoubleDouble) {
        return LogValue::from_log(sudler_log_P_real<DoubleDouble>(N, x).to_double());
    }
    return LogValue::from_log(sudler_log_P_real<double>(N, x));
}

/// ln P_N(x) for N = 0..count-1 by one running product.
template <class Real = double, class Int>
std::vector<Real> sudler_log_prefix(const BasicRational<Int>& x, std::int64_t count) {
    std::vector<Real> out;
    if (count <= 0) return out;
    out.reserve(static_cast<std::size_t>(count));
    out.push_back(Real(0.0));
    if (count == 1) return out;
    detail::require_unit_interval(x, "sudler_log_prefix");
    if (Int(count) > x.den()) throw DomainError("sudler_log_prefix: more than q terms requested");
    const auto q = detail::narrow_int<std::int64_t>(x.den());
    const auto p = detail::narrow_int<std::int64_t>(x.num());
    CompensatedSum<Real> run;
    std::int64_t res = 0;
    for (std::int64_t n = 1; n < count; ++n) {
        res += p;
        if (res >= q) res -= q;
        run.add(detail::log_2sin_pi<Real>(res, q));
        out.push_back(run.value());
    }
    return out;
}

/// eps[i][s] = epsilon_{i,s}(N) for s < b_i(N).
template <class Int>
struct BasicEpsilonTable {
    std::vector<Int> digits;
    std::vector<std::vector<BasicRational<Int>>> eps;
};

using EpsilonTable = BasicEpsilonTable<BigInt>;

template <class Int>
BasicEpsilonTable<Int> epsilon_table(const Int& N, const BasicCfContext<Int>& ctx) {
    using Q = BasicRational<Int>;
    const std::size_t L = ctx.length();
    BasicEpsilonTable<Int> table;
    table.digits = ostrowski_encode(N, ctx, L).digits;
    table.eps.resize(L);
    // tail[k] = sum_{j >= k} (-1)^j b_j delta_j, so the alternating sum in the
    // definition equals (-1)^i tail[i+1].
    std::vector<Q> tail(L + 1, Q(0));
    for (std::size_t j = L; j-- > 0;) {
        Q term = Q(table.digits[j]) * ctx.delta(static_cast<long>(j));
        tail[j] = (j % 2 == 0) ? tail[j + 1] + term : tail[j + 1] - term;
    }
    for (std::size_t i = 0; i < L; ++i) {
        const Int& b = table.digits[i];
        if (b == 0) continue;
        const Q base = (i % 2 == 0) ? tail[i + 1] : -tail[i + 1];
        const Q qi(ctx.q(static_cast<long>(i)));
        const Q& di = ctx.delta(static_cast<long>(i));
        for (Int s(0); s < b; s += 1) table.eps[i].push_back(qi * (Q(s) * di + base));
    }
    return table;
}

/// ln P_{q_i}(x, eps) = sum_{n=1}^{q_i} ln|2 sin(pi(n x + (-1)^i eps/q_i))|.
/// The argument is reduced exactly over the common denominator of x and the shift.
template <class Real, class Int>
detail::WalkResult<Real> shifted_sudler_log_real(std::size_t i, const BasicCfContext<Int>& ctx,
                                                 const BasicRational<Int>& eps) {
    using Q = BasicRational<Int>;
    if (i > ctx.length()) throw DomainError("shifted_sudler_log: index beyond L");
    const Q& x = ctx.value();
    const Int& qi = ctx.q(static_cast<long>(i));
    Q shift = eps / Q(qi);
    if (i % 2 == 1) shift = -shift;
    shift = shift.frac();
    const Int g = detail::gcd_int(x.den(), shift.den());
    const Int D = detail::checked_mul(Int(x.den() / g), shift.den());
    const Int start = detail::checked_mul(shift.num(), Int(D / shift.den()));
    const Int step = detail::floor_mod(detail::checked_mul(x.num(), Int(D / x.den())), D);
    return detail::residue_walk_dispatch<Real>(start, step, D, detail::count_of(qi, "shifted_sudler_log"));
}

template <class Int>
LogValue shifted_sudler_log(std::size_t i, const BasicCfContext<Int>& ctx, const BasicRational<Int>& eps) {
    const auto w = shifted_sudler_log_real<double>(i, ctx, eps);
    return w.zero ? LogValue::zero_value() : LogValue::from_log(w.log);
}

template <class Int>
struct BasicFactor {
    std::size_t i = 0;
    Int s{};
    BasicRational<Int> eps;
    LogValue value;
};

template <class Int>
struct BasicFactorization {
    std::vector<BasicFactor<Int>> factors;
    /// Split mode only: P_{N_2}(x), N_2 being the part of N above the cut.
    std::optional<LogValue> tail;
    Int head_part{};
    Int tail_part{};

    LogValue total() const {
        LogValue v = tail.value_or(LogValue::one());
        for (const auto& f : factors) v *= f.value;
        return v;
    }
};

using Factorization = BasicFactorization<BigInt>;

/// P_N(x) as a product of shifted products over the Ostrowski digits of N.
/// With a cut index c (b_c(N) must vanish), only factors with i < c are
/// returned, each with the full epsilon_{i,s}(N), and P_{N_2}(x) is attached
/// as the tail, N_2 = sum_{i > c} b_i q_i.
template <class Int>
BasicFactorization<Int> factorize(const Int& N, const BasicCfContext<Int>& ctx,
                                  std::optional<std::size_t> cut = std::nullopt) {
    const std::size_t L = ctx.length();
    if (L == 0) throw DomainError("factorize: x = 0 has no Sudler factorization");
    const auto table = epsilon_table(N, ctx);
    if (cut) {
        if (*cut >= L) throw DomainError("factorize: cut index " + std::to_string(*cut) + " >= L");
        if (table.digits[*cut] != 0) {
            throw DomainError("factorize: digit b_" + std::to_string(*cut) + " is nonzero, cannot split");
        }
    }
    const std::size_t top = cut ? *cut : L;
    BasicFactorization<Int> out;
    for (std::size_t i = 0; i < top; ++i) {
        Int s(0);
        for (const auto& e : table.eps[i]) {
            out.factors.push_back({i, s, e, shifted_sudler_log(i, ctx, e)});
            s += 1;
        }
    }
    out.head_part = Int(0);
    out.tail_part = Int(0);
    for (std::size_t i = 0; i < L; ++i) {
        const Int part = table.digits[i] * ctx.q(static_cast<long>(i));
        if (i < top) {
            out.head_part += part;
        } else {
            out.tail_part += part;
        }
    }
    if (cut) out.tail = sudler_log_P(out.tail_part, ctx.value());
    return out;
}

/// Diagnostic record of the positivity statements attached to H_l.
struct HPositivity {
    double eps_plus_lambda = 0.0;
    double min_bracket = 0.0;
    bool holds() const { return eps_plus_lambda > 0.0 && min_bracket > 0.0; }
};

/// ln H_l(r, eps) = ln(2 pi |eps + lambda_l|) + sum_{n <= q_l/2} ln h_{n,l}(eps), with
/// h_{n,l} = |(1 - lambda_l({n rev_l} - 1/2)/n)^2 - (eps + lambda_l/2)^2/n^2|.
template <class Int>
LogValue limit_H(std::size_t l, const BasicCfContext<Int>& ctx, const BasicRational<Int>& eps,
                 HPositivity* positivity = nullptr) {
    using Q = BasicRational<Int>;
    if (l > ctx.length()) throw DomainError("limit_H: index beyond L");
    const Q& lam = ctx.lambda(l);
    const Q shifted = eps + lam;
    const double lambda = lam.to_double();
    const double half_shift = (eps + lam / Q(Int(2))).to_double();
    const auto& rev = ctx.rev(l);
    const auto qn = detail::narrow_int<std::int64_t>(rev.den());
    const auto qp = detail::narrow_int<std::int64_t>(detail::floor_mod(rev.num(), rev.den()));
    const auto qlen = detail::narrow_int<std::int64_t>(ctx.q(static_cast<long>(l)));

    HPositivity pos;
    pos.eps_plus_lambda = shifted.to_double();
    pos.min_bracket = std::numeric_limits<double>::infinity();
    CompensatedSum<double> acc;
    bool zero = shifted.is_zero();
    if (!zero) acc.add(std::log(2.0 * std::numbers::pi * std::abs(pos.eps_plus_lambda)));
    std::int64_t res = 0;
    for (std::int64_t n = 1; n <= qlen / 2; ++n) {
        res += qp;
        if (res >= qn) res -= qn;
        const double frac = static_cast<double>(res) / static_cast<double>(qn);
        const double dn = static_cast<double>(n);
        const double a = 1.0 - lambda * (frac - 0.5) / dn;
        const double b = half_shift / dn;
        const double bracket = (a - b) * (a + b);
        pos.min_bracket = std::min(pos.min_bracket, bracket);
        if (bracket == 0.0) {
            zero = true;
            continue;
        }
        acc.add(std::log(std::abs(bracket)));
    }
    if (positivity) *positivity = pos;
    return zero ? LogValue::zero_value() : LogValue::from_log(acc.value());
}

/// |sum_{u=1}^n (1/2 - {u x})|, evaluated exactly and returned as a double.
template <class Int>
double ostrowski_discrepancy(std::int64_t n, const BasicRational<Int>& x) {
    if (n < 1) throw DomainError("ostrowski_discrepancy: n must be >= 1");
    const BasicRational<Int> xf = x.frac();
    const BigInt q = detail::narrow_int<BigInt>(xf.den());
    const BigInt p = detail::narrow_int<BigInt>(xf.num());
    BigInt residue_sum = 0;
    if (q < (BigInt(1) << 62)) {
        const auto qq = q.convert_to<std::int64_t>();
        const auto pp = p.convert_to<std::int64_t>();
        __int128 sum = 0;
        std::int64_t res = 0;
        for (std::int64_t u = 1; u <= n; ++u) {
            res += pp;
            if (res >= qq) res -= qq;
            sum += res;
        }
        residue_sum = detail::narrow_int<BigInt>(sum);
    } else {
        BigInt res = 0;
        for (std::int64_t u = 1; u <= n; ++u) {
            res += p;
            if (res >= q) res -= q;
            residue_sum += res;
        }
    }
    // sum (1/2 - res_u/q) = (n q - 2 sum res) / (2 q)
    const Rational s(BigInt(n) * q - 2 * residue_sum, 2 * q);
    return std::abs(s.to_double());
}

} // namespace kashaev

#endif
