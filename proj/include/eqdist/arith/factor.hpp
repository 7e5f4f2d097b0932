#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "eqdist/arith/checked.hpp"
#include "eqdist/arith/modular.hpp"

namespace eqdist {

struct PrimePower {
    u64 prime;
    unsigned exponent;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// A positive integer together with its prime factorization (ascending primes).
class FactoredModulus {
public:
    FactoredModulus() = default;

    /// Builds from an explicit factorization; the product must equal `value`.
    FactoredModulus(u64 value, std::vector<PrimePower> primes) : value_(value), primes_(std::move(primes)) {
        if (value_ == 0) throw std::invalid_argument("FactoredModulus: value must be positive");
        u64 prod = 1;
        u64 last = 0;
        for (const auto& pp : primes_) {
            if (pp.prime <= last || pp.exponent == 0 || !is_prime(pp.prime))
                throw std::invalid_argument("FactoredModulus: malformed factorization");
            last = pp.prime;
            for (unsigned e = 0; e < pp.exponent; ++e) prod = checked::mul(prod, pp.prime);
        }
        if (prod != value_) throw std::invalid_argument("FactoredModulus: product mismatch");
    }

    u64 value() const { return value_; }
    const std::vector<PrimePower>& primes() const { return primes_; }

    bool squarefree() const {
        return std::all_of(primes_.begin(), primes_.end(), [](const PrimePower& pp) { return pp.exponent == 1; });
    }

    /// Number of distinct prime factors.
    unsigned omega() const { return static_cast<unsigned>(primes_.size()); }

    /// Number of prime factors counted with multiplicity.
    unsigned big_omega() const {
        unsigned s = 0;
        for (const auto& pp : primes_) s += pp.exponent;
        return s;
    }

    u64 euler_phi() const {
        u64 r = value_;
        for (const auto& pp : primes_) r = r / pp.prime * (pp.prime - 1);
        return r;
    }

    int mobius() const {
        if (!squarefree()) return 0;
        return (primes_.size() % 2 == 0) ? 1 : -1;
    }

    std::vector<u64> prime_list() const {
        std::vector<u64> out;
        out.reserve(primes_.size());
        for (const auto& pp : primes_) out.push_back(pp.prime);
        return out;
    }

    /// All positive divisors, ascending.
    std::vector<u64> divisors() const {
        std::vector<u64> divs{1};
        for (const auto& pp : primes_) {
            const std::size_t base = divs.size();
            u64 pk = 1;
            for (unsigned e = 1; e <= pp.exponent; ++e) {
                pk *= pp.prime;
                for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
            }
        }
        std::sort(divs.begin(), divs.end());
        return divs;
    }

    friend bool operator==(const FactoredModulus&, const FactoredModulus&) = default;

private:
    u64 value_ = 1;
    std::vector<PrimePower> primes_;
};

namespace detail {

inline u64 pollard_brent(u64 n, u64 seed) {
    if (n % 2 == 0) return 2;
    u64 y = seed % n, c = (seed * 7 + 1) % n, m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
    auto f = [&](u64 v) { return addmod(mulmod(v, v, n), c, n); };
    while (g == 1) {
        x = y;
        for (u64 i = 0; i < r; ++i) y = f(y);
        u64 k = 0;
        while (k < r && g == 1) {
            ys = y;
            for (u64 i = 0; i < std::min(m, r - k); ++i) {
                y = f(y);
                q = mulmod(q, x > y ? x - y : y - x, n);
            }
            g = gcd(q, n);
            k += m;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = f(ys);
            g = gcd(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    return g;
}

inline void factor_into(u64 n, std::map<u64, unsigned>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    u64 seed = 2;
    u64 d = n;
    while (d == n) d = pollard_brent(n, seed++);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace detail

/// Factors 1 <= n <= 2^63 - 1 (trial division by small primes, then Pollard-Brent).
inline FactoredModulus factor(u64 n) {
    if (n == 0) throw std::invalid_argument("factor: n must be positive");
    std::map<u64, unsigned> pf;
    u64 m = n;
    for (u64 p = 2; p < 1000 && p * p <= m; p += (p == 2 ? 1 : 2)) {
        while (m % p == 0) {
            ++pf[p];
            m /= p;
        }
    }
    detail::factor_into(m, pf);
    std::vector<PrimePower> primes;
    for (auto [p, e] : pf) primes.push_back({p, e});
    return FactoredModulus(n, std::move(primes));
}

/// Selector for the standard arithmetic functions.
struct ArithmeticFunctionKind {
    enum class Tag { mobius, vonMangoldt, eulerPhi, tau, Omega, thetaPrime };
    Tag tag;
    unsigned k = 2;  // only meaningful for tau

    static ArithmeticFunctionKind mobius() { return {Tag::mobius}; }
    static ArithmeticFunctionKind von_mangoldt() { return {Tag::vonMangoldt}; }
    static ArithmeticFunctionKind euler_phi() { return {Tag::eulerPhi}; }
    static ArithmeticFunctionKind tau(unsigned k = 2) {
        if (k < 2) throw std::invalid_argument("tau_k requires k >= 2");
        return {Tag::tau, k};
    }
    static ArithmeticFunctionKind big_omega() { return {Tag::Omega}; }
    static ArithmeticFunctionKind theta_prime() { return {Tag::thetaPrime}; }
};

/// tau_k(n): number of ordered k-tuples with product n.
inline u64 tau_k(const FactoredModulus& n, unsigned k) {
    u64 r = 1;
    for (const auto& pp : n.primes()) {
        // binomial(e + k - 1, k - 1)
        u64 c = 1;
        for (unsigned i = 1; i <= k - 1; ++i) c = checked::mul(c, u64(pp.exponent + i)) / i;
        r = checked::mul(r, c);
    }
    return r;
}

inline double von_mangoldt(const FactoredModulus& n) {
    return n.omega() == 1 ? std::log(static_cast<double>(n.primes()[0].prime)) : 0.0;
}

inline double arith_fn(ArithmeticFunctionKind kind, u64 n) {
    const FactoredModulus f = factor(n);
    using T = ArithmeticFunctionKind::Tag;
    switch (kind.tag) {
        case T::mobius: return f.mobius();
        case T::vonMangoldt: return von_mangoldt(f);
        case T::eulerPhi: return static_cast<double>(f.euler_phi());
        case T::tau: return static_cast<double>(tau_k(f, kind.k));
        case T::Omega: return f.big_omega();
        case T::thetaPrime: return (f.omega() == 1 && f.primes()[0].exponent == 1) ? std::log(double(n)) : 0.0;
    }
    return 0.0;
}

inline bool is_squarefree(u64 n) { return factor(n).squarefree(); }

/// Simple Eratosthenes table of primes <= limit.
inline std::vector<u64> primes_up_to(u64 limit) {
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<bool> composite(limit + 1, false);
    for (u64 p = 2; p <= limit; ++p) {
        if (composite[p]) continue;
        out.push_back(p);
        for (u64 m = p * p; m <= limit; m += p) composite[m] = true;
    }
    return out;
}

}  // namespace eqdist
