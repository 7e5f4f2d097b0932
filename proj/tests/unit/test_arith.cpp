#include <gtest/gtest.h>

#include <random>

#include "eqdist/eqdist.hpp"
#include "support/oracles.hpp"

using namespace eqdist;

TEST(Modular, InverseAndCrtAgreeWithSearch) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 2000; ++t) {
        const u64 q = 2 + rng() % 3000;
        const u64 a = rng() % q;
        if (std::gcd(a, q) == 1) EXPECT_EQ(mod_inverse(static_cast<i64>(a), q), oracle::inv_search(a, q));
        else EXPECT_THROW(mod_inverse(static_cast<i64>(a), q), NotInvertible);
    }
    for (int t = 0; t < 2000; ++t) {
        const u64 q1 = 2 + rng() % 500, q2 = 2 + rng() % 500;
        if (std::gcd(q1, q2) != 1) continue;
        const u64 a1 = rng() % q1, a2 = rng() % q2;
        const u64 x = crt_pair(a1, q1, a2, q2);
        EXPECT_LT(x, q1 * q2);
        EXPECT_EQ(x % q1, a1);
        EXPECT_EQ(x % q2, a2);
    }
}

TEST(Factor, MatchesTrialDivision) {
    for (u64 n = 1; n <= 20000; ++n) {
        const FactoredModulus f = factor(n);
        EXPECT_EQ(f.prime_list(), oracle::prime_factors(n)) << n;
        u64 prod = 1;
        for (const auto& pp : f.primes())
            for (unsigned k = 0; k < pp.exponent; ++k) prod *= pp.prime;
        EXPECT_EQ(prod, n);
        EXPECT_EQ(f.squarefree(), oracle::squarefree(n));
        EXPECT_NEAR(von_mangoldt(f), oracle::lambda(n), 1e-12);
    }
    EXPECT_EQ(factor(1000000007ULL * 998244353ULL).prime_list(), (std::vector<u64>{998244353ULL, 1000000007ULL}));
}

TEST(Factor, TauSumsAgreeWithDivisorCounts) {
    for (u64 n = 1; n <= 3000; ++n) {
        const FactoredModulus f = factor(n);
        u64 d2 = 0;
        for (u64 d = 1; d <= n; ++d) d2 += n % d == 0;
        EXPECT_EQ(tau_k(f, 2), d2);
        EXPECT_EQ(f.divisors().size(), d2);
        // tau_3(n) = sum_{d | n} tau(d)
        u64 d3 = 0;
        for (u64 d : f.divisors()) d3 += tau_k(factor(d), 2);
        EXPECT_EQ(tau_k(f, 3), d3);
    }
}

TEST(Phase, CrtMultiplicativityOfEq) {
    std::mt19937_64 rng(7);
    int checked = 0;
    while (checked < 10000) {
        const u64 q1 = 2 + rng() % 300, q2 = 2 + rng() % 300;
        if (std::gcd(q1, q2) != 1) continue;
        const i64 a = static_cast<i64>(rng() % 100000) - 50000;
        i64 b = 1 + static_cast<i64>(rng() % 5000);
        if (std::gcd(static_cast<u64>(b), q1 * q2) != 1) continue;
        const auto [whole, part1, part2] = crt_factor_eval(Ratio{a, b}, factor(q1), factor(q2));
        EXPECT_LT(std::abs(whole - part1 * part2), 1e-10);
        EXPECT_LT(std::abs(whole - oracle::e_ratio(a, b, q1 * q2)), 1e-10);
        ++checked;
    }
}

TEST(Phase, NonUnitDenominatorsAndProjectivePoints) {
    const FactoredModulus q = factor(30);
    EXPECT_EQ(eq_ratio(1, 2, q), cplx(0.0, 0.0));
    // 2/2 = 1 locally at 2 once reduced
    EXPECT_LT(std::abs(eq_eval(Ratio{2, 2}, q) - oracle::e(1, 30)), 1e-12);
    EXPECT_THROW(eq_eval(ProjectivePoint{6, 15}, factor(3)), MalformedPoint);
    EXPECT_TRUE((ProjectivePoint{2, 3}.equals(ProjectivePoint{4, 6}, factor(35))));
}

TEST(Phase, GcdDividesQAndCapturesVanishing) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 500; ++t) {
        u64 q = 2 + rng() % 2000;
        if (!oracle::squarefree(q)) continue;
        IntPoly P{static_cast<i64>(rng() % 60) * 6, static_cast<i64>(rng() % 10) * 15};
        const RationalPhase f = RationalPhase::polynomial(P);
        const u64 g = phase_gcd(factor(q), f);
        EXPECT_EQ(q % g, 0u);
        for (u64 p : oracle::prime_factors(q)) {
            bool vanishes = true;
            for (i64 c : f.P()) vanishes &= oracle::md(c, p) == 0;
            EXPECT_EQ(g % p == 0, vanishes) << q << " " << p;
        }
    }
    EXPECT_THROW(phase_gcd(factor(6), RationalPhase({1}, {2})), DegenerateDenominator);
}

TEST(Phase, ReducedPhaseMatchesDirect) {
    const RationalPhase f({1, 0, 3}, {2, 1});
    for (u64 q : {7ULL, 35ULL, 385ULL}) {
        const FactoredModulus fq = factor(q);
        const ReducedPhase rp(f, fq);
        for (i64 n = -20; n < 80; ++n) {
            const i64 den = 2 + n;
            const i64 num = 1 + 3 * n * n;
            cplx expect;
            if (std::gcd(static_cast<u64>(oracle::md(den, q)), q) == 1) expect = oracle::e_ratio(num, den, q);
            else {
                bool pole = false;
                for (u64 p : oracle::prime_factors(q)) pole |= oracle::md(den, p) == 0;
                expect = pole ? cplx{0, 0} : cplx{1, 0};
            }
            EXPECT_LT(std::abs(rp.eval(n) - expect), 1e-10) << q << " " << n;
        }
    }
}

TEST(Checked, OverflowRaises) {
    EXPECT_THROW(checked::mul(i64{1} << 40, i64{1} << 40), RangeError);
    EXPECT_EQ(checked::mul(i64{-3}, i64{7}), -21);
}
