#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

#include "eqdist/arith/checked.hpp"
#include "eqdist/arith/factor.hpp"
#include "eqdist/arith/modular.hpp"

namespace eqdist {

using cplx = std::complex<double>;

/// Thrown when a projective point is not an element of P^1(Z/qZ).
class MalformedPoint : public std::invalid_argument {
public:
    explicit MalformedPoint(const std::string& what) : std::invalid_argument(what) {}
};

/// exp(2 pi i num / den) with num reduced first so that the angle stays small.
inline cplx unit_root(u64 num, u64 den) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(num % den) / static_cast<double>(den);
    return {std::cos(t), std::sin(t)};
}

/// e_q(a) for an integer a.
inline cplx eq_int(i64 a, u64 q) { return unit_root(mod(a, q), q); }

/// Exact rational a/b with b != 0 (not necessarily reduced).
struct Ratio {
    i64 num = 0;
    i64 den = 1;

    Ratio reduced() const {
        if (den == 0) throw std::invalid_argument("Ratio: zero denominator");
        const u64 g = std::gcd(static_cast<u64>(num < 0 ? -num : num), static_cast<u64>(den < 0 ? -den : den));
        Ratio r{num / static_cast<i64>(g), den / static_cast<i64>(g)};
        if (r.den < 0) {
            r.num = -r.num;
            r.den = -r.den;
        }
        return r;
    }
};

/// A point (a : b) of P^1(Z/qZ); (a mod p, b mod p) != (0, 0) for every p | q.
struct ProjectivePoint {
    i64 a = 0;
    i64 b = 1;

    void validate(const FactoredModulus& q) const {
        for (const auto& pp : q.primes()) {
            if (mod(a, pp.prime) == 0 && mod(b, pp.prime) == 0)
                throw MalformedPoint("(" + std::to_string(a) + ":" + std::to_string(b) + ") vanishes modulo " +
                                     std::to_string(pp.prime));
        }
    }

    /// Equality up to simultaneous unit scaling, tested prime by prime (q squarefree).
    bool equals(const ProjectivePoint& o, const FactoredModulus& q) const {
        for (const auto& pp : q.primes()) {
            const u64 p = pp.prime;
            // a b' == a' b (mod p) characterizes equality on P^1(F_p)
            if (mulmod(mod(a, p), mod(o.b, p), p) != mulmod(mod(o.a, p), mod(b, p), p)) return false;
        }
        return true;
    }
};

namespace detail {

/// Local factor of e_q(a/b) at the prime p | q, where qp = q / p.
inline cplx local_factor(i64 a, i64 b, u64 p, u64 qp) {
    const u64 ap = mod(a, p), bp = mod(b, p);
    if (bp == 0) return ap == 0 ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
    const u64 den = mulmod(bp, qp % p, p);
    return unit_root(mulmod(ap, mod_inverse(static_cast<i64>(den), p), p), p);
}

}  // namespace detail

/// e_q(a/b) for an integer pair: e^{2 pi i a bbar / q} when b is a unit; otherwise
/// prime-by-prime with local factor 1 when a = b = 0 (p) and 0 when only b = 0 (p).
/// Non-unit denominators require q squarefree.
inline cplx eq_ratio(i64 a, i64 b, const FactoredModulus& q) {
    const u64 qv = q.value();
    if (qv == 1) return {1.0, 0.0};
    if (gcd_signed(b, qv) == 1) return unit_root(mulmod(mod(a, qv), mod_inverse(b, qv), qv), qv);
    if (!q.squarefree()) throw std::invalid_argument("eq_ratio: non-unit denominator needs squarefree q");
    cplx r{1.0, 0.0};
    for (const auto& pp : q.primes()) {
        const cplx f = detail::local_factor(a, b, pp.prime, qv / pp.prime);
        if (f == cplx{0.0, 0.0}) return f;
        r *= f;
    }
    return r;
}

/// e_q of a rational number in P^1(Q): reduced to lowest terms, then evaluated.
inline cplx eq_eval(const Ratio& x, const FactoredModulus& q) {
    const Ratio r = x.reduced();
    return eq_ratio(r.num, r.den, q);
}

inline cplx eq_eval(const ProjectivePoint& x, const FactoredModulus& q) {
    x.validate(q);
    return eq_ratio(x.a, x.b, q);
}

/// (e_{q1 q2}(a), e_{q1}(a / q2), e_{q2}(a / q1)) for coprime q1, q2.
inline std::tuple<cplx, cplx, cplx> crt_factor_eval(const Ratio& x, const FactoredModulus& q1,
                                                     const FactoredModulus& q2) {
    if (gcd(q1.value(), q2.value()) != 1) throw std::invalid_argument("crt_factor_eval: moduli not coprime");
    const Ratio r = x.reduced();
    const FactoredModulus q = factor(checked::mul(q1.value(), q2.value()));
    return {eq_ratio(r.num, r.den, q),
            eq_ratio(r.num, checked::mul(r.den, static_cast<i64>(q2.value())), q1),
            eq_ratio(r.num, checked::mul(r.den, static_cast<i64>(q1.value())), q2)};
}

inline std::tuple<cplx, cplx, cplx> crt_factor_eval(const ProjectivePoint& x, const FactoredModulus& q1,
                                                     const FactoredModulus& q2) {
    const FactoredModulus q = factor(checked::mul(q1.value(), q2.value()));
    x.validate(q);
    if (gcd(q1.value(), q2.value()) != 1) throw std::invalid_argument("crt_factor_eval: moduli not coprime");
    return {eq_ratio(x.a, x.b, q),
            eq_ratio(x.a, checked::mul(x.b, static_cast<i64>(q2.value())), q1),
            eq_ratio(x.a, checked::mul(x.b, static_cast<i64>(q1.value())), q2)};
}

}  // namespace eqdist
