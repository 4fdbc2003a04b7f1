#include <catch_amalgamated.hpp>

#include "support.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using namespace kashaev;
using kashaev::testing::Q64;

namespace {
Rational R(const char* s) { return parse_rational(s); }
} // namespace

TEST_CASE("rationals are stored reduced with a positive denominator", "[rational]") {
    const Q64 a(6, -4);
    CHECK(a.num() == -3);
    CHECK(a.den() == 2);
    CHECK(a.floor() == -2);
    CHECK(a.frac() == Q64(1, 2));
    CHECK((Q64(1, 3) + Q64(1, 6)) == Q64(1, 2));
    CHECK((Q64(2, 3) * Q64(3, 4)) == Q64(1, 2));
    CHECK(Q64(1, 3) < Q64(1, 2));
    CHECK(R("10/4").str() == "5/2");
    CHECK(R("-7").str() == "-7/1");
    CHECK_THROWS_AS(Q64(1, 0), DomainError);
    CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
    CHECK_THROWS_AS(parse_rational("x/3"), DomainError);
}

TEST_CASE("fixed-width rationals refuse to overflow", "[rational]") {
    const std::int64_t big = std::int64_t{1} << 40;
    CHECK_THROWS_AS(Q64(big, big + 1) * Q64(big - 1, big + 3), OverflowError);
    CHECK_THROWS_AS(rational_cast<std::int64_t>(Rational(BigInt(1) << 80, BigInt(3))), OverflowError);
    CHECK(rational_cast<std::int64_t>(R("5/7")) == Q64(5, 7));
}

TEST_CASE("cf_expand examples", "[cf]") {
    CHECK(cf_expand(R("5/7")).str() == "[0;1,2,2]");
    CHECK(cf_expand(R("0")).str() == "[0;]");
    CHECK(cf_expand(R("0")).length() == 0);
    CHECK(cf_expand(R("1/2")).str() == "[0;2]");
    CHECK_THROWS_AS(cf_expand(R("1")), DomainError);
    CHECK_THROWS_AS(cf_expand(R("-1/3")), DomainError);
}

TEST_CASE("cf_value examples", "[cf]") {
    CHECK(cf_value(ContinuedFraction{{0, 2, 2}}) == R("2/5"));
    CHECK(cf_value(ContinuedFraction{{0}}) == R("0"));
    CHECK(cf_value(ContinuedFraction{{0, 1, 2, 2}}) == R("5/7"));
    CHECK_THROWS_AS(cf_value(ContinuedFraction{{0, 1, 0}}), DomainError);
}

TEST_CASE("cf round trip for every reduced p/q with q <= 1000", "[cf]") {
    for (std::int64_t q = 1; q <= 1000; ++q) {
        for (std::int64_t p = 0; p < q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            const Q64 r(p, q);
            const auto cf = cf_expand(r);
            REQUIRE(cf.is_canonical());
            REQUIRE(cf_value(cf) == r);
        }
    }
}

TEST_CASE("gauss_shift drops the first partial quotient", "[cf]") {
    CHECK(gauss_shift(R("5/7")) == R("2/5"));
    CHECK(gauss_shift(R("1/2")) == R("0"));
    CHECK(gauss_shift(R("2/5")) == R("1/2"));
    CHECK_THROWS_AS(gauss_shift(R("0")), DomainError);
    for (std::int64_t q = 3; q <= 300; ++q) {
        for (std::int64_t p = 1; p < q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            const auto cf = cf_expand(Q64(p, q));
            if (cf.length() < 2) continue;
            auto expected = cf;
            expected.quotients.erase(expected.quotients.begin() + 1);
            REQUIRE(cf_expand(gauss_shift(Q64(p, q))) == expected);
        }
    }
}

TEST_CASE("context of [0;1,2,2]", "[cf]") {
    const auto ctx = cf_context(R("5/7"));
    REQUIRE(ctx.length() == 3);
    const std::vector<int> q{1, 1, 3, 7}, p{0, 1, 2, 5};
    for (long l = 0; l <= 3; ++l) {
        CHECK(ctx.q(l) == q[static_cast<std::size_t>(l)]);
        CHECK(ctx.p(l) == p[static_cast<std::size_t>(l)]);
    }
    CHECK(ctx.q(-1) == 0);
    CHECK(ctx.p(-1) == 1);
    CHECK(ctx.delta(2) == R("1/7"));
    CHECK(ctx.lambda(2) == R("3/7"));
    CHECK(Rational(BigInt(1)) / (ctx.alpha_tail(3) + ctx.rev(2)) == R("3/7"));
    CHECK(ctx.rev(2) == R("1/3"));
    CHECK(ctx.alpha_tail(3) == R("2"));
    CHECK(ctx.lambda(1, 1) == Rational(ctx.q(1)) * ctx.delta(2));
    CHECK_FALSE(kashaev::testing::context_identity_failure(ctx).has_value());
}

TEST_CASE("context of [0;2] hits exactly at the last convergent", "[cf]") {
    const auto ctx = cf_context(R("1/2"));
    CHECK(ctx.delta(0) == R("1/2"));
    CHECK(ctx.delta(1) == R("0"));
    CHECK(ctx.delta(-1) == R("1"));
}

TEST_CASE("x > 1/2 keeps the recurrence-consistent delta_0", "[cf]") {
    const auto ctx = cf_context(R("5/7"));
    CHECK(ctx.delta(0) == R("5/7"));  // not the distance 2/7 to the nearest integer
}

TEST_CASE("context identities on random deep expansions", "[cf]") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> len(1, 40), quot(1, 9);
    for (int trial = 0; trial < 200; ++trial) {
        ContinuedFraction cf;
        cf.quotients.push_back(0);
        const int n = len(rng);
        for (int i = 0; i < n; ++i) cf.quotients.push_back(quot(rng));
        if (cf.quotients.back() == 1) cf.quotients.back() = 2;
        const auto ctx = cf_context(cf);
        const auto failure = kashaev::testing::context_identity_failure(ctx);
        INFO(cf.str() << ": " << failure.value_or(""));
        REQUIRE_FALSE(failure.has_value());
    }
}

TEST_CASE("double-double kernels", "[numeric]") {
    using kashaev::DoubleDouble;
    const DoubleDouble one(1.0);
    const DoubleDouble e = dd::exp(one);
    CHECK(std::abs((e - DoubleDouble(2.718281828459045, 1.4456468917292502e-16)).to_double()) < 1e-30);
    const DoubleDouble l = dd::log(DoubleDouble(2.0));
    CHECK(std::abs((l - dd::ln2).to_double()) < 1e-31);
    const DoubleDouble s = dd::sin_pi(DoubleDouble(1.0) / DoubleDouble(6.0));
    CHECK(std::abs((s - DoubleDouble(0.5)).to_double()) < 1e-31);
    const DoubleDouble s3 = dd::sin_pi(DoubleDouble(1.0) / DoubleDouble(3.0));
    CHECK(std::abs((s3 * s3 - DoubleDouble(0.75)).to_double()) < 1e-31);
    CHECK(DoubleDouble::from_int(static_cast<__int128>(1) << 100).to_double() == std::ldexp(1.0, 100));
}

TEST_CASE("LogSum is overflow free and order independent", "[numeric]") {
    std::vector<double> terms;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 2000.0);
    for (int i = 0; i < 5000; ++i) terms.push_back(u(rng));
    LogSum<double> a;
    for (double t : terms) a.add(t);
    std::shuffle(terms.begin(), terms.end(), rng);
    LogSum<double> b;
    for (double t : terms) b.add(t);
    CHECK(std::isfinite(a.log_value()));
    CHECK(std::abs(a.log_value() - b.log_value()) <= 1e-12 * std::abs(a.log_value()));

    LogSum<double> left, right;
    for (std::size_t i = 0; i < terms.size(); ++i) (i % 3 == 0 ? left : right).add(terms[i]);
    left.merge(right);
    CHECK(std::abs(left.log_value() - b.log_value()) <= 1e-12 * std::abs(b.log_value()));

    LogSum<double> small;
    small.add(std::log(2.0));
    small.add(std::log(3.0));
    CHECK(small.log_value() == Catch::Approx(std::log(5.0)).epsilon(1e-15));
    CHECK(LogSum<double>().result().zero);
}
