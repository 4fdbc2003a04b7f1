#ifndef KASHAEV_TESTS_SUPPORT_HPP
#define KASHAEV_TESTS_SUPPORT_HPP

// Independent reference computations shared by the unit and acceptance tests.

#include "kashaev/kashaev.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace kashaev::testing {

using Q64 = BasicRational<std::int64_t>;
using Ctx64 = BasicCfContext<std::int64_t>;

/// Euler phi for 0..n by sieve.
inline std::vector<std::int64_t> totients(std::int64_t n) {
    std::vector<std::int64_t> phi(static_cast<std::size_t>(n + 1));
    for (std::int64_t i = 0; i <= n; ++i) phi[static_cast<std::size_t>(i)] = i;
    for (std::int64_t p = 2; p <= n; ++p) {
        if (phi[static_cast<std::size_t>(p)] != p) continue;
        for (std::int64_t k = p; k <= n; k += p) {
            phi[static_cast<std::size_t>(k)] -= phi[static_cast<std::size_t>(k)] / p;
        }
    }
    return phi;
}

/// log P_N(p/q) by a plain long double product, no folding, no residue walk.
inline long double naive_log_P(std::int64_t N, std::int64_t p, std::int64_t q) {
    long double prod = 1.0L;
    long double acc = 0.0L;
    for (std::int64_t n = 1; n <= N; ++n) {
        const long double arg = std::numbers::pi_v<long double> * static_cast<long double>((n * p) % q) /
                                static_cast<long double>(q);
        prod *= std::fabs(2.0L * std::sin(arg));
        if (prod > 1e300L || prod < 1e-300L) {
            acc += std::log(prod);
            prod = 1.0L;
        }
    }
    return acc + std::log(prod);
}

/// Running log P_N(p/q) for N < q, by the same naive long double product.
inline std::vector<long double> naive_log_prefix(std::int64_t p, std::int64_t q) {
    std::vector<long double> out{0.0L};
    long double prod = 1.0L;
    long double acc = 0.0L;
    for (std::int64_t n = 1; n < q; ++n) {
        prod *= std::fabs(2.0L * std::sin(std::numbers::pi_v<long double> * static_cast<long double>((n * p) % q) /
                                          static_cast<long double>(q)));
        if (prod > 1e300L || prod < 1e-300L) {
            acc += std::log(prod);
            prod = 1.0L;
        }
        out.push_back(acc + std::log(prod));
    }
    return out;
}

/// log J(p/q) by direct summation in long double (fine while log J < 11000).
inline long double naive_log_J(std::int64_t p, std::int64_t q) {
    long double P = 1.0L;
    long double sum = 1.0L;
    for (std::int64_t N = 1; N < q; ++N) {
        P *= std::fabs(2.0L * std::sin(std::numbers::pi_v<long double> * static_cast<long double>((N * p) % q) /
                                       static_cast<long double>(q)));
        sum += P * P;
    }
    return std::log(sum);
}

/// All exact context identities; returns a description of the first failure.
template <class Int>
std::optional<std::string> context_identity_failure(const BasicCfContext<Int>& ctx) {
    using R = BasicRational<Int>;
    const std::size_t L = ctx.length();
    const auto l_ = [](std::size_t l) { return static_cast<long>(l); };
    const R x = ctx.value();
    if (ctx.delta(-1) != R(Int(1))) return "delta_{-1} != 1";
    if (ctx.delta(0) != x.frac()) return "delta_0 != frac(x)";
    for (std::size_t l = 1; l <= L; ++l) {
        if (ctx.q(l_(l)) != ctx.c(l) * ctx.q(l_(l) - 1) + ctx.q(l_(l) - 2)) return "q recurrence at " + std::to_string(l);
        if (ctx.p(l_(l)) != ctx.c(l) * ctx.p(l_(l) - 1) + ctx.p(l_(l) - 2)) return "p recurrence at " + std::to_string(l);
        const Int det = ctx.p(l_(l)) * ctx.q(l_(l) - 1) - ctx.p(l_(l) - 1) * ctx.q(l_(l));
        if (det != ((l % 2 == 1) ? Int(1) : Int(-1))) return "determinant at " + std::to_string(l);
        if (ctx.rev(l) != R(ctx.q(l_(l) - 1), ctx.q(l_(l)))) return "rev at " + std::to_string(l);
    }
    for (std::size_t l = 0; l < L; ++l) {
        const R d = R(ctx.q(l_(l))) * x - R(ctx.p(l_(l)));
        if (ctx.delta(l_(l)) != (d.sign() < 0 ? -d : d)) return "delta definition at " + std::to_string(l);
        if (ctx.lambda(l) != R(ctx.q(l_(l))) * ctx.delta(l_(l))) return "lambda at " + std::to_string(l);
        if (ctx.delta(l_(l) + 1) != ctx.delta(l_(l) - 1) - R(ctx.c(l + 1)) * ctx.delta(l_(l))) {
            return "delta recurrence at " + std::to_string(l);
        }
    }
    if (!ctx.delta(l_(L)).is_zero()) return "delta_L != 0";
    // lambda_l = 1 / (alpha_{l+1} + rev_l)
    for (std::size_t l = 1; l + 1 <= L; ++l) {
        if (ctx.lambda(l) != R(Int(1)) / (ctx.alpha_tail(l + 1) + ctx.rev(l))) {
            return "lambda closed form at " + std::to_string(l);
        }
    }
    // delta_{l+2} < delta_l / 2
    for (std::size_t l = 0; l + 2 <= L; ++l) {
        if (!(R(Int(2)) * ctx.delta(l_(l) + 2) < ctx.delta(l_(l)))) return "delta decay at " + std::to_string(l);
    }
    // Finite telescoping of delta_l, with the boundary term when L - l is odd.
    for (std::size_t l = 0; l <= L; ++l) {
        R sum(Int(0));
        for (std::size_t i = l + 2; i <= L; i += 2) sum = sum + R(ctx.c(i)) * ctx.delta(l_(i) - 1);
        if ((L - l) % 2 == 1) sum = sum + ctx.delta(l_(L) - 1);
        if (sum != ctx.delta(l_(l))) return "delta series at " + std::to_string(l);
    }
    return std::nullopt;
}

inline std::vector<BigInt> repeated(std::int64_t a, std::size_t n) { return std::vector<BigInt>(n, BigInt(a)); }

} // namespace kashaev::testing

#endif
