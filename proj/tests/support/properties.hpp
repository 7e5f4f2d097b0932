#pragma once

// Randomized property sweeps shared by the unit suite and the acceptance binary.
// Each returns the number of violations found over `count` instances.

#include <random>
#include <string>

#include "eqdist/eqdist.hpp"
#include "support/oracles.hpp"

namespace props {

using namespace eqdist;

inline DDScale random_scale(std::mt19937_64& rng, u64 maxY) {
    const u64 den = 1 + rng() % 4;
    const u64 num = den + rng() % (den * (maxY - 1) + 1);
    return DDScale(num, den);
}

inline u64 squarefree_sample(std::mt19937_64& rng, u64 maxN) {
    while (true) {
        const u64 n = 1 + rng() % maxN;
        if (oracle::squarefree(n)) return n;
    }
}

inline u64 random_divisor(std::mt19937_64& rng, u64 n) {
    const auto ds = factor(n).divisors();
    return ds[rng() % ds.size()];
}

/// Library dense divisibility against the definition-level oracle.
inline std::size_t dd_oracle_mismatches(std::mt19937_64& rng, std::size_t count, u64 maxN = 2000) {
    oracle::DenseDiv brute;
    std::size_t bad = 0;
    for (std::size_t t = 0; t < count; ++t) {
        const u64 n = 1 + rng() % maxN;
        const unsigned i = static_cast<unsigned>(rng() % 4);
        const DDScale y = random_scale(rng, 12);
        if (is_dd(n, i, y) != brute(n, i, oracle::Rat(y.num(), y.den()))) ++bad;
    }
    return bad;
}

/// (0): monotone in y and in i.
inline std::size_t fq_monotone(std::mt19937_64& rng, std::size_t count) {
    std::size_t bad = 0;
    for (std::size_t t = 0; t < count; ++t) {
        const u64 n = squarefree_sample(rng, 200000);
        const unsigned i = 1 + static_cast<unsigned>(rng() % 4);
        const DDScale y = random_scale(rng, 40);
        if (!is_dd(n, i, y)) continue;
        const DDScale y2(y.num() * (1 + rng() % 3) + rng() % 5, y.den());
        if (!is_dd(n, i, y2) || !is_dd(n, i - 1, y)) ++bad;
    }
    return bad;
}

/// (i): divisors and multiples inherit dense divisibility with the scale adjusted.
inline std::size_t fq_divisors_multiples(std::mt19937_64& rng, std::size_t count) {
    std::size_t bad = 0;
    for (std::size_t t = 0; t < count; ++t) {
        const u64 n = squarefree_sample(rng, 100000);
        const unsigned i = 1 + static_cast<unsigned>(rng() % 3);
        const DDScale y = random_scale(rng, 30);
        if (!is_dd(n, i, y)) continue;
        const u64 m = random_divisor(rng, n);
        if (!is_dd(m, i, DDScale(y.num() * (n / m), y.den()))) ++bad;
        const u64 l = n * (1 + rng() % 50);
        if (!is_dd(l, i, DDScale(y.num() * (l / n), y.den()))) ++bad;
    }
    return bad;
}

/// (ii): at i = 1, lcm of two y-densely divisible numbers is y-densely divisible.
inline std::size_t fq_lcm(std::mt19937_64& rng, std::size_t count) {
    std::size_t bad = 0, done = 0;
    while (done < count) {
        const u64 m = squarefree_sample(rng, 30000), n = squarefree_sample(rng, 30000);
        const DDScale y = random_scale(rng, 20);
        if (!is_dd(m, 1, y) || !is_dd(n, 1, y)) continue;
        ++done;
        if (!is_dd(std::lcm(m, n), 1, y)) ++bad;
    }
    return bad;
}

/// (iii): y-smooth numbers are i-tuply y-densely divisible for every i.
inline std::size_t fq_smooth(std::mt19937_64& rng, std::size_t count) {
    std::size_t bad = 0, done = 0;
    while (done < count) {
        const u64 n = 1 + rng() % 1000000;
        const DDScale y = random_scale(rng, 50);
        if (!oracle::smooth(n, y.value())) continue;
        ++done;
        const unsigned i = static_cast<unsigned>(rng() % 6);
        if (!is_dd(n, i, y)) ++bad;
    }
    return bad;
}

/// (iv): z-smooth squarefree n with z >= y and prod_{p | n, p <= y} p >= z^i / y is i-tuply y-dd.
inline std::size_t fq_smooth_squarefree(std::mt19937_64& rng, std::size_t count) {
    std::size_t bad = 0, done = 0;
    const auto primes = primes_up_to(200);
    while (done < count) {
        const u64 y = 2 + rng() % 30;
        const u64 z = y + rng() % 100;
        const unsigned i = 1 + static_cast<unsigned>(rng() % 3);
        u64 n = 1, small = 1;
        for (u64 p : primes) {
            if (p > z) break;
            if (rng() % 3 == 0 && n <= 1000000000ULL / p) {
                n *= p;
                if (p <= y) small *= p;
            }
        }
        // prod >= z^i / y, compared exactly
        boost::multiprecision::cpp_int lhs = small, rhs = 1;
        lhs *= y;
        for (unsigned k = 0; k < i; ++k) rhs *= z;
        if (lhs < rhs) continue;
        ++done;
        if (!is_dd(n, i, DDScale(y, 1))) ++bad;
    }
    return bad;
}

/// Every witness returned re-verifies against the definition.
inline std::size_t dd_witness_failures(std::mt19937_64& rng, std::size_t count) {
    std::size_t bad = 0, done = 0;
    std::uniform_real_distribution<double> U(0.0, 1.0);
    while (done < count) {
        const u64 n = squarefree_sample(rng, 100000);
        const unsigned i = 1 + static_cast<unsigned>(rng() % 3);
        const DDScale y = random_scale(rng, 30);
        if (!is_dd(n, i, y)) continue;
        ++done;
        const unsigned j = static_cast<unsigned>(rng() % i), k = i - 1 - j;
        const double R = 1.0 + U(rng) * (y.value() * static_cast<double>(n) - 1.0) * 0.999999;
        const auto w = dd_witness(n, i, j, k, y, R);
        if (!w || w->q * w->r != n || static_cast<double>(w->r) > R ||
            static_cast<double>(w->r) * y.value() < R * (1 - 1e-12) || !is_dd(w->q, j, y) || !is_dd(w->r, k, y))
            ++bad;
    }
    return bad;
}

/// Classifier results against an exhaustive check of every type's defining condition.
inline std::size_t classifier_mismatches(std::mt19937_64& rng, std::size_t count, std::string* firstFailure = nullptr) {
    using oracle::Rat;
    std::size_t bad = 0;
    for (std::size_t t = 0; t < count; ++t) {
        const std::size_t n = 1 + rng() % 12;
        const auto tuple = oracle::random_tuple(rng, n, 60 + rng() % 300);
        const u64 sd = 1000;
        const Rat sigma(sd / 10 + 1 + rng() % (sd / 2 - sd / 10 - 1), sd);
        const auto truth = oracle::types(tuple, sigma, false);
        const TypeClassification c = classify(tuple, sigma);
        bool ok = false;
        switch (c.kind) {
            case TypeKind::Type0: ok = truth.type0; break;
            case TypeKind::TypeI_II: ok = !truth.type0 && truth.type12; break;
            case TypeKind::TypeIII: {
                ok = !truth.type0 && !truth.type12 && truth.type3 && c.indices.size() == 3;
                if (ok) {
                    const Rat hi = Rat(1, 2) + sigma, lo = Rat(1, 2) - sigma;
                    const auto& ix = c.indices;
                    for (auto a : ix) ok &= tuple[a] >= 2 * sigma && tuple[a] <= lo;
                    ok &= tuple[ix[0]] <= tuple[ix[1]] && tuple[ix[1]] <= tuple[ix[2]];
                    ok &= tuple[ix[0]] + tuple[ix[1]] >= hi;
                }
                break;
            }
            default: ok = false;
        }
        if (c.kind == TypeKind::TypeIII && sigma > Rat(1, 6)) ok = false;
        // some type always applies in this range
        if (!(truth.type0 || truth.type12 || truth.type3)) ok = false;
        if (!ok) {
            ++bad;
            if (firstFailure && firstFailure->empty()) {
                for (const auto& v : tuple) *firstFailure += v.str() + ",";
                *firstFailure += " sigma=" + sigma.str();
            }
        }
    }
    return bad;
}

}  // namespace props
