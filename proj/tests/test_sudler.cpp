#include <catch_amalgamated.hpp>

#include "support.hpp"

#include <numeric>
#include <random>

using namespace kashaev;
using kashaev::testing::Ctx64;
using kashaev::testing::Q64;

namespace {
Rational R(const char* s) { return parse_rational(s); }
constexpr double kPi = std::numbers::pi;
} // namespace

TEST_CASE("Sudler product anchors", "[sudler]") {
    CHECK(sudler_log_P(BigInt(2), R("1/3")).log_mag == Catch::Approx(std::log(3.0)).epsilon(1e-15));
    CHECK(sudler_log_P(BigInt(0), R("2/7")).log_mag == 0.0);
    CHECK_FALSE(sudler_log_P(BigInt(0), R("2/7")).zero);
    CHECK(sudler_log_P(BigInt(6), R("5/7")).log_mag == Catch::Approx(std::log(7.0)).epsilon(1e-15));
    CHECK_THROWS_AS(sudler_log_P(BigInt(7), R("5/7")), DomainError);
    CHECK_THROWS_AS(sudler_log_P(BigInt(1), R("0")), DomainError);
    CHECK_THROWS_AS(sudler_log_P(BigInt(1), R("3/2")), DomainError);
}

TEST_CASE("Sudler products agree with a naive long double product", "[sudler]") {
    std::mt19937_64 rng(3);
    for (std::int64_t q : {11, 97, 500, 1009, 4096}) {
        std::uniform_int_distribution<std::int64_t> pick(1, q - 1);
        for (int trial = 0; trial < 5; ++trial) {
            std::int64_t p = pick(rng);
            while (std::gcd(p, q) != 1) p = pick(rng);
            for (std::int64_t N : {std::int64_t{1}, q / 3, q / 2, q - 1}) {
                const double got = sudler_log_P(N, Q64(p, q)).log_mag;
                const double want = static_cast<double>(kashaev::testing::naive_log_P(N, p, q));
                REQUIRE(std::abs(got - want) < 1e-9 * std::max(1.0, std::abs(want)));
            }
        }
    }
}

TEST_CASE("double-double mode agrees with double mode", "[sudler]") {
    const Q64 x(832040, 1346269);
    for (std::int64_t N : {10, 1000, 100000}) {
        const double a = sudler_log_P(N, x).log_mag;
        const double b = sudler_log_P(N, x, Precision::DoubleDouble).log_mag;
        REQUIRE(std::abs(a - b) < 1e-9);
    }
    CHECK(sudler_log_P(std::int64_t{6}, Q64(5, 7), Precision::DoubleDouble).log_mag ==
          Catch::Approx(std::log(7.0)).epsilon(1e-16));
}

TEST_CASE("perturbation table examples", "[sudler]") {
    const auto ctx = cf_context(R("5/7"));
    const auto t = epsilon_table(BigInt(6), ctx);
    REQUIRE(t.eps[2].size() == 2);
    CHECK(t.eps[2][0] == R("0"));
    CHECK(t.eps[2][1] == R("3/7"));
    CHECK(t.eps[0].empty());
    CHECK(t.eps[1].empty());
    for (std::size_t l = 1; l < ctx.length(); ++l) {
        const BigInt N = ctx.q(static_cast<long>(l));
        const auto single = epsilon_table(N, ctx);
        REQUIRE(single.eps[l].size() == 1);
        CHECK(single.eps[l][0] == R("0"));
    }
    const auto two = epsilon_table(BigInt(6), ctx);
    CHECK(two.eps[2][1] == Rational(BigInt(1)) * ctx.lambda(2));
}

TEST_CASE("perturbations match their defining sum and stay within bounds", "[sudler]") {
    for (std::int64_t q = 3; q <= 130; ++q) {
        for (std::int64_t p = 1; p < q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            const Ctx64 ctx = cf_context(Q64(p, q));
            const std::size_t L = ctx.length();
            for (std::int64_t N = 0; N < q; ++N) {
                const auto tab = epsilon_table(N, ctx);
                for (std::size_t i = 0; i < L; ++i) {
                    const Q64 qi(ctx.q(static_cast<long>(i)));
                    Q64 alt(0);
                    for (std::size_t j = 1; i + j < L; ++j) {
                        const Q64 term = Q64(tab.digits[i + j]) * ctx.delta(static_cast<long>(i + j));
                        alt = (j % 2 == 0) ? alt + term : alt - term;
                    }
                    const Q64 lo = -ctx.lambda(i) + ctx.lambda(i, 1);
                    const Q64 hi = Q64(ctx.c(i + 1) - 1) * ctx.lambda(i) + ctx.lambda(i, 1);
                    REQUIRE(tab.eps[i].size() == static_cast<std::size_t>(tab.digits[i]));
                    for (std::size_t s = 0; s < tab.eps[i].size(); ++s) {
                        const Q64& e = tab.eps[i][s];
                        REQUIRE(e == qi * (Q64(static_cast<std::int64_t>(s)) * ctx.delta(static_cast<long>(i)) + alt));
                        REQUIRE(lo <= e);
                        REQUIRE(e <= hi);
                    }
                }
            }
        }
    }
}

TEST_CASE("shifted products", "[sudler]") {
    const auto ctx = cf_context(R("5/7"));
    CHECK(shifted_sudler_log(2, ctx, R("3/7")).log_mag == Catch::Approx(0.5 * std::log(7.0)).epsilon(1e-15));
    CHECK(shifted_sudler_log(2, ctx, R("0")).log_mag == Catch::Approx(0.5 * std::log(7.0)).epsilon(1e-15));
    const Ctx64 deep = cf_context(Q64(832040, 1346269));
    for (std::size_t i = 0; i < deep.length(); i += 2) {
        const std::int64_t qi = deep.q(static_cast<long>(i));
        if (qi >= deep.q(static_cast<long>(deep.length()))) break;
        REQUIRE(shifted_sudler_log(i, deep, Q64(0)).log_mag ==
                Catch::Approx(sudler_log_P(qi, deep.value()).log_mag).margin(1e-9));
    }
    // 5/7 + 2/7 is an integer, so the single factor vanishes
    CHECK(shifted_sudler_log(0, ctx, R("2/7")).zero);
    CHECK_FALSE(shifted_sudler_log(0, ctx, R("1/7")).zero);
}

TEST_CASE("factorization examples", "[sudler]") {
    const auto ctx = cf_context(R("5/7"));
    const auto f = factorize(BigInt(6), ctx);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0].eps == R("0"));
    CHECK(f.factors[1].eps == R("3/7"));
    CHECK(f.total().log_mag == Catch::Approx(std::log(7.0)).epsilon(1e-14));
    const auto empty = factorize(BigInt(0), ctx);
    CHECK(empty.factors.empty());
    CHECK(empty.total().log_mag == 0.0);
    CHECK_THROWS_AS(factorize(BigInt(6), ctx, std::size_t{2}), DomainError);
}

TEST_CASE("factorization reproduces every P_N", "[sudler]") {
    std::mt19937_64 rng(5);
    for (std::int64_t q : {2, 3, 7, 50, 233, 377, 641, 1000}) {
        std::uniform_int_distribution<std::int64_t> pick(1, q - 1);
        std::int64_t p = pick(rng);
        while (std::gcd(p, q) != 1) p = pick(rng);
        const Ctx64 ctx = cf_context(Q64(p, q));
        const auto prefix = sudler_log_prefix(Q64(p, q), q);
        for (std::int64_t N = 0; N < q; ++N) {
            const auto f = factorize(N, ctx);
            REQUIRE(std::abs(f.total().log_mag - prefix[static_cast<std::size_t>(N)]) <= 1e-8);
        }
    }
}

TEST_CASE("split factorization at a zero digit", "[sudler]") {
    const Ctx64 ctx = cf_context(cf_value(cf_from_prefix(std::vector<std::int64_t>(10, 3), 10)));
    const auto params = make_partition_params(8);
    const auto prefix = sudler_log_prefix(ctx.value(), ctx.q(10));
    std::size_t checked = 0;
    for (std::int64_t N = 0; N < ctx.q(10); N += 101) {
        const auto cls = classify(N, ctx, params);
        if (cls.is_evil()) continue;
        const std::size_t cut = params.window_begin(cls.j());
        const auto f = factorize(N, ctx, cut);
        REQUIRE(f.tail.has_value());
        REQUIRE(f.head_part + f.tail_part == N);
        REQUIRE(f.head_part < ctx.q(static_cast<long>(cut)));
        REQUIRE(std::abs(f.total().log_mag - prefix[static_cast<std::size_t>(N)]) <= 1e-8);
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("limiting function", "[sudler]") {
    // q_1 = 1 for c_1 = 1: empty product
    const auto ctx = cf_context(R("5/7"));
    const Rational eps = R("1/5");
    const auto h1 = limit_H(1, ctx, eps);
    CHECK(h1.log_mag == Catch::Approx(std::log(2 * kPi * (eps + ctx.lambda(1)).to_double())).epsilon(1e-15));
    CHECK(limit_H(2, ctx, -ctx.lambda(2)).zero);
}

TEST_CASE("positivity holds for all admissible perturbations", "[sudler]") {
    for (const auto& prefix : {std::vector<std::int64_t>(12, 1), std::vector<std::int64_t>(7, 3),
                               std::vector<std::int64_t>{2, 5, 1, 3, 4, 1, 2, 2}}) {
        const Ctx64 ctx = cf_context(cf_value(cf_from_prefix(prefix, prefix.size())));
        const std::size_t L = ctx.length();
        for (std::int64_t N = 0; N < ctx.q(static_cast<long>(L)); ++N) {
            const auto tab = epsilon_table(N, ctx);
            for (std::size_t l = 1; l < L; ++l) {
                for (const auto& e : tab.eps[l]) {
                    HPositivity pos;
                    limit_H(l, ctx, e, &pos);
                    REQUIRE(pos.holds());
                }
            }
        }
    }
}

TEST_CASE("limiting function tracks the shifted product on the golden mean", "[sudler]") {
    const auto ctx = cf_context(cf_value(cf_from_prefix(kashaev::testing::repeated(1, 40), 40)));
    const Rational zero(BigInt(0));
    double worst_late = 0.0;
    for (std::size_t l = 15; l <= 26; ++l) {
        const double err = std::abs(std::expm1(limit_H(l, ctx, zero).log_mag - shifted_sudler_log(l, ctx, zero).log_mag));
        worst_late = std::max(worst_late, err);
    }
    double worst_early = 0.0;
    for (std::size_t l = 4; l <= 9; ++l) {
        const double err = std::abs(std::expm1(limit_H(l, ctx, zero).log_mag - shifted_sudler_log(l, ctx, zero).log_mag));
        worst_early = std::max(worst_early, err);
    }
    CHECK(worst_late < 1e-3);
    CHECK(worst_late < worst_early / 100);
}

TEST_CASE("Ostrowski discrepancy", "[sudler]") {
    CHECK(ostrowski_discrepancy(1, R("1/2")) == 0.0);
    CHECK(ostrowski_discrepancy(2, R("1/3")) == 0.0);
    CHECK(ostrowski_discrepancy(1, R("1/3")) == Catch::Approx(1.0 / 6.0));
    CHECK_THROWS_AS(ostrowski_discrepancy(0, R("1/3")), DomainError);
    // growth at most (3M/2) ln n + C0 on quotients bounded by M
    for (int M : {1, 2, 3, 5}) {
        const auto exact = cf_value(cf_from_prefix(kashaev::testing::repeated(M, 30), 30));
        const auto x = rational_cast<__int128>(exact);
        double c0 = 0.0;
        for (std::int64_t n = 1; n <= 20000; n += (n < 500 ? 1 : n / 50)) {
            c0 = std::max(c0, ostrowski_discrepancy(n, x) - 1.5 * M * std::log(static_cast<double>(n)));
        }
        CHECK(c0 <= 1.0);
    }
}
