#include <gtest/gtest.h>

#include <random>

#include "eqdist/eqdist.hpp"
#include "support/oracles.hpp"

using namespace eqdist;

TEST(HyperKloosterman, TableMatchesDefiningSum) {
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL}) {
        for (unsigned m = 1; m <= 4; ++m) {
            const HKTable& t = thread_hk_cache().get(m, p);
            for (u64 x = 0; x < p; ++x)
                EXPECT_LT(std::abs(t.values[x] - oracle::kl(m, static_cast<i64>(x), p)), 1e-9) << m << " " << p << " " << x;
        }
    }
}

TEST(HyperKloosterman, ZeroValueClosedForm) {
    for (u64 p : primes_up_to(199))
        for (unsigned m = 2; m <= 4; ++m) {
            const double expect = (m % 2 ? 1.0 : -1.0) * std::pow(static_cast<double>(p), -(m - 1.0) / 2.0);
            EXPECT_LT(std::abs(hk_table(m, p).values[0] - cplx(expect, 0.0)), 1e-12);
        }
}

TEST(HyperKloosterman, Kl2IsNormalizedKloostermanSum) {
    for (u64 p : primes_up_to(101))
        for (u64 x = 1; x < p; ++x)
            EXPECT_LT(std::abs(hk_table(2, p).values[x] * std::sqrt(double(p)) - oracle::kloosterman(1, x, p)), 1e-9);
}

TEST(HyperKloosterman, DeligneBoundSmallPrimes) {
    for (u64 p : primes_up_to(97))
        for (unsigned m = 2; m <= 4; ++m) {
            const auto& t = thread_hk_cache().get(m, p);
            for (u64 x = 1; x < p; ++x) EXPECT_LE(std::abs(t.values[x]), m + 1e-9);
        }
}

TEST(HyperKloosterman, CompositeMatchesDefiningSum) {
    for (u64 q : {6ULL, 15ULL, 21ULL, 35ULL, 77ULL})
        for (unsigned m = 2; m <= 3; ++m)
            for (i64 x = 1; x < 20; ++x) {
                if (std::gcd(static_cast<u64>(x), q) != 1) continue;
                EXPECT_LT(std::abs(hyper_kloosterman(m, x, factor(q)) - oracle::kl_composite(m, x, q)), 1e-9)
                    << q << " " << m << " " << x;
            }
    EXPECT_THROW(hyper_kloosterman(2, 1, factor(12)), std::invalid_argument);
}

TEST(Kloosterman, WeilBoundAndDirectSum) {
    for (u64 p : primes_up_to(61))
        for (i64 a = 1; a < static_cast<i64>(p); a += 3)
            for (i64 b = 1; b < static_cast<i64>(p); b += 2) {
                const cplx s = kloosterman2(a, b, factor(p));
                EXPECT_LT(std::abs(s - oracle::kloosterman(a, b, p)), 1e-9);
                EXPECT_LE(std::abs(s), 2.0 * std::sqrt(double(p)) + 1e-9);
            }
}

TEST(Ramanujan, ClosedFormMatchesUnitSum) {
    for (u64 q = 1; q <= 400; ++q) {
        if (!oracle::squarefree(q)) continue;
        for (i64 b = -10; b <= 60; ++b) {
            const cplx c = ramanujan(b, factor(q));
            EXPECT_LT(std::abs(c - oracle::ramanujan(b, q)), 1e-9) << q << " " << b;
            EXPECT_LE(std::abs(c), static_cast<double>(gcd_signed(b, q)) + 1e-9);
        }
    }
    EXPECT_THROW(ramanujan(1, factor(8)), std::invalid_argument);
}

TEST(TripleSum, EqualsKl3OfProduct) {
    std::mt19937_64 rng(5);
    for (u64 q : {7ULL, 11ULL, 15ULL, 21ULL, 35ULL}) {
        for (int t = 0; t < 6; ++t) {
            i64 h[3], a;
            do {
                for (auto& v : h) v = 1 + static_cast<i64>(rng() % q);
                a = 1 + static_cast<i64>(rng() % q);
            } while (std::gcd(static_cast<u64>(h[0] * h[1] * h[2] * a), q) != 1);
            const cplx F = triple_sum_F(h[0], h[1], h[2], a, factor(q));
            EXPECT_LT(std::abs(F - oracle::triple_F(h[0], h[1], h[2], a, q)), 1e-9);
            EXPECT_LT(std::abs(F - hyper_kloosterman(3, a * h[0] * h[1] * h[2], factor(q))), 1e-9);
        }
    }
}

TEST(Kf, FourierIdentityAgainstOracle) {
    std::mt19937_64 rng(9);
    for (u64 p : {5ULL, 7ULL, 11ULL, 13ULL, 23ULL}) {
        for (int t = 0; t < 4; ++t) {
            i64 v[5];
            do
                for (auto& x : v) x = static_cast<i64>(rng() % p);
            while (v[0] == v[2]);
            const KfParams k{v[0], v[1], v[2], v[3], v[4]};
            std::vector<cplx> K(p);
            for (u64 x = 0; x < p; ++x) {
                K[x] = kf_sum(k, static_cast<i64>(x), factor(p));
                EXPECT_LT(std::abs(K[x] - oracle::kf(v[0], v[1], v[2], v[3], v[4], x, p)), 1e-9);
            }
            const auto F = ft_psi(K);
            for (u64 z = 0; z < p; ++z) {
                if (oracle::kf_doubly_degenerate(v[4], z, p))
                    EXPECT_LT(std::abs(F[z] - cplx(1.0 / double(p) - 1.0, 0.0)), 1e-9);
                else
                    EXPECT_LT(std::abs(F[z] - oracle::kf_fourier_expected(v[0], v[1], v[2], v[3], v[4], z, p)), 1e-9);
            }
        }
    }
    // e = 0 forces the doubly degenerate point z = 0
    std::vector<cplx> K(7);
    for (u64 x = 0; x < 7; ++x) K[x] = kf_sum(KfParams{3, 0, 6, 1, 0}, static_cast<i64>(x), factor(7));
    EXPECT_LT(std::abs(ft_psi(K)[0] - cplx(1.0 / 7.0 - 1.0, 0.0)), 1e-12);
    EXPECT_LT(std::abs(oracle::kl(3, 0, 7) - cplx(1.0 / 7.0, 0.0)), 1e-12);
    EXPECT_THROW(kf_sum(KfParams{2, 0, 2, 0, 1}, 0, factor(7)), std::invalid_argument);
}

TEST(Correlation, KlsMatchesDirectAndIsSmall) {
    for (u64 p : {11ULL, 31ULL, 101ULL}) {
        for (i64 a = 1; a < 5; ++a) {
            for (i64 b = 0; b < 3; ++b) {
                if (a == 1 && b == 0) continue;
                cplx acc{0, 0};
                for (u64 x = 1; x < p; ++x)
                    acc += hk_table(3, p).values[x] * std::conj(hk_table(3, p).values[(a * x) % p]) * oracle::e(b * x, p);
                EXPECT_LT(std::abs(kl_correlation(3, a, b, p).actual - acc), 1e-8);
            }
        }
        EXPECT_LT(kl_correlation_max_ratio(3, p), 10.0);
    }
    EXPECT_THROW(kl_correlation(3, 1, 0, 11), std::invalid_argument);
}

TEST(Dork, MatchesDirectSumAndBound) {
    for (auto [d1, d2] : {std::pair<u64, u64>{7, 11}, {15, 21}, {30, 35}}) {
        const auto r = dork_sum(d1, d2, 3, 5, 1, 2);
        const u64 L = std::lcm(d1, d2);
        cplx acc{0, 0};
        for (u64 n = 0; n < L; ++n)
            acc += eq_ratio(3, n + 1, factor(d1)) * eq_ratio(5, n + 2, factor(d2));
        EXPECT_LT(std::abs(r.actual - acc), 1e-9);
        EXPECT_LE(r.ratio, 1.0 + 1e-9);
    }
}

TEST(Phi, CrtRecombinationOfThreeFactors) {
    const PhiParams P{5, 3, 7, 11, 13, 17, 2, 4, 6, 1};
    const cplx direct = oracle::e_ratio(2 * 5, 3 * 11 * 13 * 17, 7) * oracle::e_ratio(4 * 5, 3 * 7 * 17, 11 * 13) *
                        oracle::e_ratio(6 * 5, (3 + 7) * 7 * 11 * 13, 17);
    EXPECT_LT(std::abs(phi_ell_eval(P) - direct), 1e-9);
}

TEST(CompletePhase, PolynomialSumRespectsBound) {
    for (u64 q : {101ULL, 1009ULL, 1001ULL}) {
        const auto r = complete_phase_sum(RationalPhase::polynomial({0, 1, 0, 1}), factor(q));
        cplx acc{0, 0};
        for (u64 n = 0; n < q; ++n) acc += oracle::e(static_cast<i64>((n + n * n % q * n) % q), q);
        EXPECT_LT(std::abs(r.actual - acc), 1e-8);
        EXPECT_LE(r.ratio, 1.0);
    }
}
