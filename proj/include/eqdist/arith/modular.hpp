#pragma once

#include <numeric>
#include <string>
#include <utility>

#include "eqdist/arith/checked.hpp"

namespace eqdist {

/// Canonical representative of a in [0, q).
inline u64 mod(i64 a, u64 q) {
    if (q == 0) throw std::invalid_argument("modulus must be positive");
    i128 r = static_cast<i128>(a) % static_cast<i128>(q);
    if (r < 0) r += q;
    return static_cast<u64>(r);
}

inline u64 mulmod(u64 a, u64 b, u64 q) {
    return static_cast<u64>(static_cast<u128>(a) * b % q);
}

inline u64 addmod(u64 a, u64 b, u64 q) {
    u128 s = static_cast<u128>(a) + b;
    return static_cast<u64>(s % q);
}

inline u64 submod(u64 a, u64 b, u64 q) {
    return a >= b ? a - b : static_cast<u64>(static_cast<u128>(a) + q - b);
}

inline u64 powmod(u64 base, u64 exp, u64 q) {
    if (q == 1) return 0;
    u64 result = 1;
    base %= q;
    while (exp) {
        if (exp & 1) result = mulmod(result, base, q);
        base = mulmod(base, base, q);
        exp >>= 1;
    }
    return result;
}

inline u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

inline u64 gcd_signed(i64 a, u64 b) {
    u64 ua = a < 0 ? static_cast<u64>(-(a + 1)) + 1 : static_cast<u64>(a);
    return std::gcd(ua, b);
}

inline u64 lcm(u64 a, u64 b) {
    if (a == 0 || b == 0) return 0;
    return checked::mul(a / gcd(a, b), b);
}

/// Inverse of a modulo q; throws NotInvertible when gcd(a, q) > 1.
inline u64 mod_inverse(i64 a, u64 q) {
    if (q == 0) throw std::invalid_argument("modulus must be positive");
    if (q == 1) return 0;
    i128 r0 = static_cast<i128>(q), r1 = static_cast<i128>(mod(a, q));
    i128 s0 = 0, s1 = 1;
    while (r1 != 0) {
        i128 t = r0 / r1;
        i128 r2 = r0 - t * r1;
        r0 = r1;
        r1 = r2;
        i128 s2 = s0 - t * s1;
        s0 = s1;
        s1 = s2;
    }
    if (r0 != 1)
        throw NotInvertible(std::to_string(a) + " is not invertible modulo " + std::to_string(q));
    i128 inv = s0 % static_cast<i128>(q);
    if (inv < 0) inv += q;
    return static_cast<u64>(inv);
}

/// Solves x = a1 (q1), x = a2 (q2) for coprime q1, q2; result in [0, q1 q2).
inline u64 crt_pair(u64 a1, u64 q1, u64 a2, u64 q2) {
    if (gcd(q1, q2) != 1) throw std::invalid_argument("crt_pair: moduli not coprime");
    const u64 q = checked::mul(q1, q2);
    const u64 inv = mod_inverse(static_cast<i64>(q1 % q2), q2);
    // x = a1 + q1 * ((a2 - a1) * inv mod q2)
    const u64 t = mulmod(submod(a2 % q2, a1 % q2, q2), inv, q2);
    return addmod(a1 % q1, mulmod(q1, t, q), q);
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

}  // namespace eqdist
