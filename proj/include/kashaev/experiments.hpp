#ifndef KASHAEV_EXPERIMENTS_HPP
#define KASHAEV_EXPERIMENTS_HPP

#include "kashaev/cf.hpp"
#include "kashaev/errors.hpp"
#include "kashaev/invariant.hpp"
#include "kashaev/log_value.hpp"
#include "kashaev/ostrowski.hpp"
#include "kashaev/rational.hpp"
#include "kashaev/sudler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace kashaev {

/// Runs fn(i) for i in [0, count) on up to `workers` threads.  Each index is
/// processed exactly once; results must be written to disjoint slots.
template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

struct ScanRow {
    std::int64_t p = 0;
    std::int64_t q = 1;
    double x = 0.0;
    double log_j = 0.0;
    double h = 0.0;
};

namespace detail {

inline ScanRow evaluate_row(std::int64_t p, std::int64_t q, Precision precision) {
    const BasicRational<std::int64_t> r(p, q);
    ScanRow row;
    row.p = p;
    row.q = q;
    row.x = r.to_double();
    if (precision == Precision::DoubleDouble) {
        const DoubleDouble lj = j_log_real<DoubleDouble>(r);
        row.log_j = lj.to_double();
        row.h = (lj - j_log_real<DoubleDouble>(gauss_shift(r))).to_double();
    } else {
        const double lj = j_log_real<double>(r);
        row.log_j = lj;
        row.h = lj - j_log_real<double>(gauss_shift(r));
    }
    return row;
}

inline std::vector<ScanRow> evaluate_rows(const std::vector<std::pair<std::int64_t, std::int64_t>>& fractions,
                                          std::size_t workers, Precision precision) {
    std::vector<ScanRow> rows(fractions.size());
    parallel_for(fractions.size(), workers, [&](std::size_t i) {
        rows[i] = evaluate_row(fractions[i].first, fractions[i].second, precision);
    });
    return rows;
}

} // namespace detail

/// Reduced p/q in (0,1) with q <= maxden, increasing, by the Farey successor rule.
inline std::vector<std::pair<std::int64_t, std::int64_t>> farey_interior(std::int64_t maxden) {
    if (maxden < 2) throw DomainError("scan: maxden must be >= 2");
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    std::int64_t a = 0, b = 1, c = 1, d = maxden;
    while (c < d) {
        out.emplace_back(c, d);
        const std::int64_t k = (maxden + b) / d;
        const std::int64_t nc = k * c - a;
        const std::int64_t nd = k * d - b;
        a = c;
        b = d;
        c = nc;
        d = nd;
    }
    return out;
}

/// log J and h at every reduced rational in (0,1) with denominator <= maxden.
inline std::vector<ScanRow> scan(std::int64_t maxden, std::size_t workers = 1,
                                 Precision precision = Precision::Double) {
    return detail::evaluate_rows(farey_interior(maxden), workers, precision);
}

/// Rows of the scan restricted to |x - center| <= radius.
template <class Int>
std::vector<ScanRow> window_scan(const BasicRational<Int>& center, const BasicRational<Int>& radius,
                                 std::int64_t maxden, std::size_t workers = 1,
                                 Precision precision = Precision::Double) {
    using Q = BasicRational<Int>;
    if (maxden < 1) throw DomainError("window_scan: maxden must be >= 1");
    if (radius.sign() < 0) throw DomainError("window_scan: negative radius");
    const Q lo = center - radius;
    const Q hi = center + radius;
    if (lo.sign() <= 0 || !(hi < Q(Int(1)))) throw DomainError("window_scan: window must lie inside (0,1)");
    std::vector<std::pair<std::int64_t, std::int64_t>> fractions;
    for (std::int64_t q = 2; q <= maxden; ++q) {
        // ceil(lo q) .. floor(hi q)
        const Q lq = lo * Q(Int(q));
        const Q hq = hi * Q(Int(q));
        Int first = lq.floor();
        if (Q(first) < lq) first += 1;
        const Int last = hq.floor();
        for (Int p = first; p <= last; p += 1) {
            const auto pp = detail::narrow_int<std::int64_t>(p);
            if (std::gcd(pp, q) == 1) fractions.emplace_back(pp, q);
        }
    }
    std::sort(fractions.begin(), fractions.end(), [](const auto& u, const auto& v) {
        return static_cast<__int128>(u.first) * v.second < static_cast<__int128>(v.first) * u.second;
    });
    return detail::evaluate_rows(fractions, workers, precision);
}

struct ConvergenceRow {
    std::size_t n = 0;
    std::string p, q;
    double h = 0.0;
    double osc = 0.0;
};

/// h at the convergents [0; a_1, ..., a_n] for n in [n_lo, n_hi], with the
/// trailing oscillation osc_n = max_{j>=n} h - min_{j>=n} h over the range.
template <class Int>
std::vector<ConvergenceRow> convergence_study(const std::vector<Int>& prefix, std::size_t n_lo, std::size_t n_hi,
                                              std::int64_t budget = kDefaultEnumerationBudget,
                                              Precision precision = Precision::Double) {
    if (n_lo < 1 || n_hi < n_lo) throw DomainError("convergence_study: need 1 <= n_lo <= n_hi");
    if (n_hi > prefix.size()) {
        throw DomainError("convergence_study: prefix has " + std::to_string(prefix.size()) + " quotients, need " +
                          std::to_string(n_hi));
    }
    std::vector<ConvergenceRow> rows;
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
        const auto r = cf_value(cf_from_prefix(prefix, n));
        detail::check_budget(r.den(), budget, "convergence_study");
        ConvergenceRow row;
        row.n = n;
        row.p = detail::int_to_string(r.num());
        row.q = detail::int_to_string(r.den());
        row.h = h_value(r, precision);
        rows.push_back(row);
    }
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = rows.size(); i-- > 0;) {
        hi = std::max(hi, rows[i].h);
        lo = std::min(lo, rows[i].h);
        rows[i].osc = hi - lo;
    }
    return rows;
}

struct EvilMassRecord {
    std::size_t k = 0;
    double ratio = 0.0;
    double log_total = 0.0;
    double log_partition = 0.0;
};

struct SplitRatioRecord {
    std::size_t k = 0;
    std::size_t j = 0;
    double ratio = 0.0;
    double ratio_prime = 0.0;
};

struct TailRatioRecord {
    std::size_t k = 0;
    double squared = 0.0;
    double plain = 0.0;
};

struct LocalGainRecord {
    std::string N, N_star;
    std::size_t ell = 0;
    int construction = 0;  // 1: b_{l+1} < c_{l+2}; 2: b_{l+1} = c_{l+2}
    double log_gain = 0.0;
};

struct TailQuotientRecord {
    std::string N;
    std::size_t ell = 0;
    double log_quotient = 0.0;
};

struct HErrorRecord {
    std::size_t ell = 0;
    std::string q_ell;
    double rel_error = 0.0;
};

struct DiagnosticsReport {
    std::string r;
    std::size_t L = 0;
    std::vector<EvilMassRecord> evil_mass;
    std::vector<SplitRatioRecord> split;
    std::vector<TailRatioRecord> tail;
    std::vector<LocalGainRecord> local_gain;
    std::vector<TailQuotientRecord> tail_quotient;
    std::vector<HErrorRecord> h_error;
};

struct DiagnosticsOptions {
    std::int64_t budget = kDefaultEnumerationBudget;
    std::size_t samples = 32;
    std::uint64_t seed = 20240601;
    /// H_l errors are reported for q_l up to this size.
    std::int64_t h_error_max_q = 200'000;
};

namespace detail {

/// |H_l(r, 0) / P_{q_l}(r, 0) - 1|.
template <class Int>
double h_relative_error(std::size_t l, const BasicCfContext<Int>& ctx) {
    const BasicRational<Int> zero(Int(0));
    const LogValue h = limit_H(l, ctx, zero);
    const LogValue p = shifted_sudler_log(l, ctx, zero);
    return std::abs(std::expm1(h.log_mag - p.log_mag));
}

} // namespace detail

/// Structural measurements at r = [0; a_1, ..., a_depth]; see DiagnosticsReport.
template <class Int>
DiagnosticsReport structure_diagnostics(const std::vector<Int>& prefix, std::size_t depth,
                                        const std::vector<std::size_t>& k_grid,
                                        const DiagnosticsOptions& options = {}) {
    const auto r = cf_value(cf_from_prefix(prefix, depth));
    detail::require_unit_interval(r, "structure_diagnostics");
    detail::check_budget(r.den(), options.budget, "structure_diagnostics");
    const auto ctx = cf_context(r);
    const std::size_t L = ctx.length();
    if (L < 2) throw DomainError("structure_diagnostics: expansion too short");

    std::string bad;
    for (std::size_t k : k_grid) {
        if (k < 4 || make_partition_params(std::max<std::size_t>(k, 4)).digits_needed() > L) {
            bad += (bad.empty() ? "" : ",") + std::to_string(k);
        }
    }
    if (!bad.empty()) throw DomainError("structure_diagnostics: infeasible k for L = " + std::to_string(L) + ": " + bad);

    DiagnosticsReport rep;
    rep.r = r.str();
    rep.L = L;
    for (std::size_t k : k_grid) {
        const auto params = make_partition_params(k);
        const auto sums = restricted_sums(r, params, options.budget);
        rep.evil_mass.push_back({k, sums.evil_mass_ratio(), sums.total.log_mag, sums.partition_log()});
        for (std::size_t w = 0; w < params.window_count(); ++w) {
            rep.split.push_back({k, params.j_lo + w, sums.split_ratio(w), sums.split_ratio_prime(w)});
        }
        rep.tail.push_back({k, sums.tail_ratio_squared(), sums.tail_ratio_plain()});
    }

    const auto rp = gauss_shift(r);
    const auto ctx_p = cf_context(rp);
    std::mt19937_64 rng(options.seed);
    const auto qL = detail::narrow_int<std::int64_t>(ctx.q(static_cast<long>(L)));
    std::uniform_int_distribution<std::int64_t> pick_N(0, qL - 1);

    // Local 5/6 gains at indices with c_{l+1} >= 7.
    std::vector<std::size_t> large;
    for (std::size_t l = 1; l + 2 <= L; ++l) {
        if (ctx.c(l + 1) >= 7) large.push_back(l);
    }
    if (!large.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, large.size() - 1);
        for (std::size_t s = 0; s < options.samples; ++s) {
            const std::size_t l = large[pick(rng)];
            const Int N(pick_N(rng));
            const auto d = ostrowski_encode(N, ctx, L);
            const Int bstar = (Int(5) * ctx.c(l + 1)) / Int(6);
            Int Nstar;
            int construction;
            if (d.digits[l + 1] < ctx.c(l + 2)) {
                Nstar = N + (bstar - d.digits[l]) * ctx.q(static_cast<long>(l));
                construction = 1;
            } else {
                Nstar = N + bstar * ctx.q(static_cast<long>(l)) - ctx.q(static_cast<long>(l + 1));
                construction = 2;
            }
            if (Nstar < 0 || Nstar >= ctx.q(static_cast<long>(L))) continue;
            const double gain = sudler_log_P(Nstar, r).log_mag - sudler_log_P(N, r).log_mag;
            rep.local_gain.push_back({detail::int_to_string(N), detail::int_to_string(Nstar), l, construction, gain});
        }
    }

    // Tail quotients where both size conditions hold.
    if (L >= 3) {
        std::uniform_int_distribution<std::size_t> pick_l(1, L - 2);
        auto condition = [&](std::size_t idx, const Int& digit) {
            const double qprime = detail::ratio_to_double(ctx_p.q(static_cast<long>(idx - 1)), Int(1));
            const bool small_quotient = 100.0 * std::log(detail::ratio_to_double(ctx.c(idx + 1), Int(1))) <=
                                        std::log(qprime);
            return small_quotient || Int(100) * digit <= Int(99) * ctx.c(idx + 1);
        };
        for (std::size_t s = 0; s < options.samples; ++s) {
            const std::size_t l = pick_l(rng);
            const Int N(pick_N(rng));
            const auto tab = epsilon_table(N, ctx);
            if (tab.digits[l] == 0) continue;
            if (!condition(l, tab.digits[l]) || !condition(l + 1, tab.digits[l + 1])) continue;
            const Int Np = shift_S(N, ctx, ctx_p);
            const auto tab_p = epsilon_table(Np, ctx_p);
            if (tab_p.digits[l - 1] != tab.digits[l]) continue;
            double lq = 0.0;
            for (std::size_t b = 0; b < tab.eps[l].size(); ++b) {
                lq += shifted_sudler_log(l, ctx, tab.eps[l][b]).log_mag -
                      shifted_sudler_log(l - 1, ctx_p, tab_p.eps[l - 1][b]).log_mag;
            }
            rep.tail_quotient.push_back({detail::int_to_string(N), l, lq});
        }
    }

    for (std::size_t l = 1; l < L; ++l) {
        if (ctx.q(static_cast<long>(l)) > Int(options.h_error_max_q)) break;
        rep.h_error.push_back({l, detail::int_to_string(ctx.q(static_cast<long>(l))), detail::h_relative_error(l, ctx)});
    }
    return rep;
}

} // namespace kashaev

#endif
