#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "eqdist/arith/factor.hpp"

namespace eqdist::harness {

struct LambdaValue {
    u64 n;
    double lambda;
};

/// Nonzero values of the von Mangoldt function on [lo, hi], ascending, by a segmented sieve.
inline std::vector<LambdaValue> lambda_support(u64 lo, u64 hi, u64 segment = 1 << 16) {
    std::vector<LambdaValue> out;
    if (hi < 2 || lo > hi) return out;
    lo = std::max<u64>(lo, 2);
    u64 root = static_cast<u64>(std::sqrt(static_cast<double>(hi)));
    while (root * root > hi) --root;
    while ((root + 1) * (root + 1) <= hi) ++root;
    const std::vector<u64> small = primes_up_to(root);

    // proper prime powers p^k, k >= 2, in [lo, hi]
    std::vector<LambdaValue> powers;
    for (u64 p : small) {
        const double lp = std::log(static_cast<double>(p));
        for (u64 v = p * p; v <= hi; v *= p) {
            if (v >= lo) powers.push_back({v, lp});
            if (v > hi / p) break;
        }
    }
    std::sort(powers.begin(), powers.end(), [](const LambdaValue& a, const LambdaValue& b) { return a.n < b.n; });
    auto pw = powers.begin();

    std::vector<char> composite;
    for (u64 start = lo; start <= hi; start += segment) {
        const u64 end = std::min(hi, start + segment - 1);
        composite.assign(end - start + 1, 0);
        for (u64 p : small) {
            u64 first = std::max(p * p, (start + p - 1) / p * p);
            for (u64 m = first; m <= end; m += p) composite[m - start] = 1;
        }
        for (u64 n = start; n <= end; ++n) {
            while (pw != powers.end() && pw->n < n) ++pw;
            if (!composite[n - start]) out.push_back({n, std::log(static_cast<double>(n))});
            else if (pw != powers.end() && pw->n == n) out.push_back(*pw);
        }
        if (end == hi) break;
    }
    return out;
}

}  // namespace eqdist::harness
