#pragma once

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "eqdist/arith/checked.hpp"
#include "eqdist/arith/factor.hpp"
#include "eqdist/arith/modular.hpp"
#include "eqdist/arith/phase.hpp"

namespace eqdist {

/// Thrown when a denominator polynomial vanishes identically modulo a prime.
class DegenerateDenominator : public std::domain_error {
public:
    explicit DegenerateDenominator(const std::string& what) : std::domain_error(what) {}
};

/// Dense integer polynomial, coefficients low to high, no trailing zeros.
using IntPoly = std::vector<i64>;

/// Dense polynomial over F_p, coefficients low to high, no trailing zeros.
struct FpPoly {
    u64 p = 2;
    std::vector<u64> c;

    FpPoly() = default;
    FpPoly(u64 prime, std::vector<u64> coeffs) : p(prime), c(std::move(coeffs)) {
        for (auto& x : c) x %= p;
        trim();
    }

    static FpPoly from_int(const IntPoly& f, u64 prime) {
        std::vector<u64> cs;
        cs.reserve(f.size());
        for (i64 x : f) cs.push_back(mod(x, prime));
        return FpPoly(prime, std::move(cs));
    }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    u64 lead() const { return c.empty() ? 0 : c.back(); }

    u64 eval(u64 x) const {
        u64 r = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = addmod(mulmod(r, x % p, p), *it, p);
        return r;
    }

    FpPoly scaled(u64 k) const {
        FpPoly r = *this;
        for (auto& x : r.c) x = mulmod(x, k % p, p);
        r.trim();
        return r;
    }

    FpPoly monic() const {
        if (is_zero()) return *this;
        return scaled(mod_inverse(static_cast<i64>(lead()), p));
    }

    /// Quotient and remainder of *this by d (d nonzero).
    std::pair<FpPoly, FpPoly> divmod(const FpPoly& d) const {
        if (d.is_zero()) throw std::domain_error("FpPoly: division by zero polynomial");
        FpPoly r = *this;
        FpPoly q(p, {});
        if (r.degree() < d.degree()) return {q, r};
        q.c.assign(static_cast<std::size_t>(r.degree() - d.degree() + 1), 0);
        const u64 inv = mod_inverse(static_cast<i64>(d.lead()), p);
        while (!r.is_zero() && r.degree() >= d.degree()) {
            const int shift = r.degree() - d.degree();
            const u64 t = mulmod(r.lead(), inv, p);
            q.c[static_cast<std::size_t>(shift)] = t;
            for (std::size_t i = 0; i < d.c.size(); ++i) {
                auto& slot = r.c[i + static_cast<std::size_t>(shift)];
                slot = submod(slot, mulmod(t, d.c[i], p), p);
            }
            r.trim();
        }
        q.trim();
        return {q, r};
    }

    friend bool operator==(const FpPoly&, const FpPoly&) = default;
};

/// Monic gcd over F_p (zero only when both inputs are zero).
inline FpPoly fp_gcd(FpPoly a, FpPoly b) {
    while (!b.is_zero()) {
        FpPoly r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// A rational function P/Q with integer coefficients, kept in canonical form:
/// gcd(P, Q) = 1 over Q, the joint content is 1, and Q has positive leading coefficient.
class RationalPhase {
public:
    RationalPhase() : P_{}, Q_{1} {}
    RationalPhase(IntPoly P, IntPoly Q) : P_(std::move(P)), Q_(std::move(Q)) { canonicalize(); }

    static RationalPhase polynomial(IntPoly P) { return RationalPhase(std::move(P), {1}); }
    static RationalPhase constant(i64 c) { return polynomial({c}); }

    const IntPoly& P() const { return P_; }
    const IntPoly& Q() const { return Q_; }
    bool is_zero() const { return P_.empty(); }

    friend bool operator==(const RationalPhase&, const RationalPhase&) = default;

private:
    using Rat = boost::multiprecision::cpp_rational;
    using Int = boost::multiprecision::cpp_int;
    using RPoly = std::vector<Rat>;

    static void trim(RPoly& f) {
        while (!f.empty() && f.back() == 0) f.pop_back();
    }

    static RPoly rem(RPoly a, const RPoly& b) {
        while (!a.empty() && a.size() >= b.size()) {
            const Rat t = a.back() / b.back();
            const std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= t * b[i];
            a.pop_back();
            trim(a);
        }
        return a;
    }

    static RPoly quot(RPoly a, const RPoly& b) {
        if (a.size() < b.size()) return {};
        RPoly q(a.size() - b.size() + 1);
        while (!a.empty() && a.size() >= b.size()) {
            const Rat t = a.back() / b.back();
            const std::size_t shift = a.size() - b.size();
            q[shift] = t;
            for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= t * b[i];
            a.pop_back();
            trim(a);
        }
        trim(q);
        return q;
    }

    void canonicalize() {
        auto strip = [](IntPoly& f) {
            while (!f.empty() && f.back() == 0) f.pop_back();
        };
        strip(P_);
        strip(Q_);
        if (Q_.empty()) throw std::invalid_argument("RationalPhase: zero denominator");
        if (P_.empty()) {
            Q_ = {1};
            return;
        }
        RPoly p(P_.begin(), P_.end()), q(Q_.begin(), Q_.end());
        RPoly a = p, b = q;
        while (!b.empty()) {
            RPoly r = rem(a, b);
            a = std::move(b);
            b = std::move(r);
        }
        p = quot(p, a);
        q = quot(q, a);
        Int l = 1;
        for (const auto& x : p) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(x));
        for (const auto& x : q) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(x));
        std::vector<Int> pi, qi;
        Int g = 0;
        for (const auto& x : p) {
            pi.push_back(boost::multiprecision::numerator(Rat(x * l)));
            g = boost::multiprecision::gcd(g, pi.back());
        }
        for (const auto& x : q) {
            qi.push_back(boost::multiprecision::numerator(Rat(x * l)));
            g = boost::multiprecision::gcd(g, qi.back());
        }
        if (qi.back() < 0) g = -g;
        auto narrow = [](const Int& v) {
            if (v > std::numeric_limits<i64>::max() || v < std::numeric_limits<i64>::min())
                throw RangeError("RationalPhase: coefficient exceeds 64 bits");
            return static_cast<i64>(v);
        };
        P_.clear();
        Q_.clear();
        for (const auto& x : pi) P_.push_back(narrow(x / g));
        for (const auto& x : qi) Q_.push_back(narrow(x / g));
    }

    IntPoly P_;
    IntPoly Q_;
};

namespace detail {

inline IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
    if (a.empty() || b.empty()) return {};
    IntPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = checked::add(r[i + j], checked::mul(a[i], b[j]));
    return r;
}

inline IntPoly poly_sub(IntPoly a, const IntPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = checked::sub(a[i], b[i]);
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

inline IntPoly poly_deriv(const IntPoly& a) {
    IntPoly r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back(checked::mul(a[i], static_cast<i64>(i)));
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

}  // namespace detail

/// Reduction of f modulo p to a coprime pair (P1, Q1) over F_p with Q1 monic.
inline std::pair<FpPoly, FpPoly> phase_reduce(const RationalPhase& f, u64 p) {
    FpPoly P = FpPoly::from_int(f.P(), p);
    FpPoly Q = FpPoly::from_int(f.Q(), p);
    if (Q.is_zero()) throw DegenerateDenominator("denominator vanishes modulo " + std::to_string(p));
    const FpPoly g = fp_gcd(P, Q);
    P = P.divmod(g).first;
    Q = Q.divmod(g).first;
    const u64 inv = mod_inverse(static_cast<i64>(Q.lead()), p);
    return {P.scaled(inv), Q.scaled(inv)};
}

/// f' = (P'Q - PQ')/Q^2 in canonical form.
inline RationalPhase phase_derivative(const RationalPhase& f) {
    using namespace detail;
    IntPoly num = poly_sub(poly_mul(poly_deriv(f.P()), f.Q()), poly_mul(f.P(), poly_deriv(f.Q())));
    return RationalPhase(std::move(num), poly_mul(f.Q(), f.Q()));
}

/// (q, f): product of the primes p | q for which f vanishes identically modulo p.
inline u64 phase_gcd(const FactoredModulus& q, const RationalPhase& f) {
    u64 r = 1;
    for (const auto& pp : q.primes()) {
        if (FpPoly::from_int(f.Q(), pp.prime).is_zero())
            throw DegenerateDenominator("denominator vanishes modulo " + std::to_string(pp.prime));
        if (FpPoly::from_int(f.P(), pp.prime).is_zero()) r *= pp.prime;
    }
    return r;
}

/// Prime-wise reductions of f, reused for repeated evaluation of e_q(f(n)).
class ReducedPhase {
public:
    ReducedPhase(const RationalPhase& f, const FactoredModulus& q) : q_(q) {
        if (!q.squarefree()) throw std::invalid_argument("ReducedPhase: q must be squarefree");
        for (const auto& pp : q.primes()) {
            auto [P1, Q1] = phase_reduce(f, pp.prime);
            const u64 qp = q.value() / pp.prime;
            local_.push_back({pp.prime, mod_inverse(static_cast<i64>(qp % pp.prime), pp.prime), std::move(P1),
                              std::move(Q1)});
        }
    }

    /// e_q(f(n)), zero when f(n) is a point at infinity modulo some p | q.
    cplx eval(i64 n) const {
        cplx r{1.0, 0.0};
        for (const auto& l : local_) {
            const u64 x = mod(n, l.p);
            const u64 den = l.Q1.eval(x);
            if (den == 0) return {0.0, 0.0};
            const u64 val = mulmod(mulmod(l.P1.eval(x), mod_inverse(static_cast<i64>(den), l.p), l.p), l.qp_inv, l.p);
            r *= unit_root(val, l.p);
        }
        return r;
    }

    const FactoredModulus& modulus() const { return q_; }

private:
    struct Local {
        u64 p;
        u64 qp_inv;
        FpPoly P1;
        FpPoly Q1;
    };
    FactoredModulus q_;
    std::vector<Local> local_;
};

/// Convenience: e_q(f(n)).
inline cplx phase_eval(const RationalPhase& f, i64 n, const FactoredModulus& q) {
    return ReducedPhase(f, q).eval(n);
}

}  // namespace eqdist
