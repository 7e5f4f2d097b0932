#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eqdist/arith/checked.hpp"
#include "eqdist/arith/factor.hpp"
#include "eqdist/arith/modular.hpp"
#include "eqdist/arith/phase.hpp"
#include "eqdist/arith/poly.hpp"
#include "eqdist/completion.hpp"
#include "eqdist/fourier.hpp"

namespace eqdist {

/// c_q(b) = sum over units n of e_q(bn) = sum_{d | (b,q)} d mu(q/d).
inline cplx ramanujan(i64 b, const FactoredModulus& q) {
    if (!q.squarefree()) throw std::invalid_argument("ramanujan: q must be squarefree");
    const u64 g = gcd_signed(b, q.value());
    double s = 0.0;
    for (u64 d : q.divisors()) {
        if (g % d != 0) continue;
        s += static_cast<double>(d) * factor(q.value() / d).mobius();
    }
    return {s, 0.0};
}

/// Sum over n in Z/qZ of e_q(f(n)), against C^{Omega(q)} q^{1/2} (f',q) / (f'',q)^{1/2}.
inline BoundReport complete_phase_sum(const RationalPhase& f, const FactoredModulus& q, double C = 10.0) {
    const ReducedPhase rp(f, q);
    cplx acc{0.0, 0.0};
    for (u64 n = 0; n < q.value(); ++n) acc += rp.eval(static_cast<i64>(n));
    const RationalPhase f1 = phase_derivative(f);
    const RationalPhase f2 = phase_derivative(f1);
    const double bound = std::pow(C, q.big_omega()) * std::sqrt(static_cast<double>(q.value())) *
                         static_cast<double>(phase_gcd(q, f1)) / std::sqrt(static_cast<double>(phase_gcd(q, f2)));
    return BoundReport::make(acc, bound, "ramanujan-weil");
}

/// S(a, b; q) = sum over units x of e_q(a x + b xbar).
inline cplx kloosterman2(i64 a, i64 b, const FactoredModulus& q) {
    const u64 qv = q.value();
    cplx acc{0.0, 0.0};
    for (u64 x = 0; x < qv; ++x) {
        if (gcd(x, qv) != 1) continue;
        const u64 xi = mod_inverse(static_cast<i64>(x), qv);
        acc += unit_root(addmod(mulmod(mod(a, qv), x, qv), mulmod(mod(b, qv), xi, qv), qv), qv);
    }
    return acc;
}

/// Kl_m(x; p) for all x in F_p.
struct HKTable {
    unsigned m = 1;
    u64 p = 2;
    std::vector<cplx> values;

    const cplx& operator[](i64 x) const { return values[mod(x, p)]; }
};

/// Inverses modulo a prime p, inv[0] = 0.
inline std::vector<u64> inverse_table(u64 p) {
    std::vector<u64> inv(p, 0);
    if (p > 1) inv[1] = 1;
    for (u64 i = 2; i < p; ++i) inv[i] = (p - mulmod(p / i, inv[p % i], p)) % p;
    return inv;
}

/// Kl_m via Kl_1 = e_p and Kl_m(x) = p^{-1/2} sum_{y != 0} Kl_{m-1}(1/y) e_p(xy).
inline HKTable hk_table(unsigned m, u64 p) {
    if (m == 0) throw std::invalid_argument("hk_table: m must be >= 1");
    if (!is_prime(p)) throw std::invalid_argument("hk_table: p must be prime");
    HKTable t{m, p, std::vector<cplx>(p)};
    for (u64 x = 0; x < p; ++x) t.values[x] = unit_root(x, p);
    const auto inv = inverse_table(p);
    const double scale = 1.0 / std::sqrt(static_cast<double>(p));
    for (unsigned k = 2; k <= m; ++k) {
        std::vector<cplx> g(p, 0.0);
        for (u64 y = 1; y < p; ++y) g[y] = t.values[inv[y]];
        t.values = dft(g, +1);
        for (auto& v : t.values) v *= scale;
    }
    return t;
}

/// Per-thread cache of hyper-Kloosterman tables keyed by (m, p).
class HKCache {
public:
    const HKTable& get(unsigned m, u64 p) {
        auto key = std::make_pair(m, p);
        auto it = tables_.find(key);
        if (it == tables_.end()) it = tables_.emplace(key, hk_table(m, p)).first;
        return it->second;
    }
    void clear() { tables_.clear(); }

private:
    std::map<std::pair<unsigned, u64>, HKTable> tables_;
};

inline HKCache& thread_hk_cache() {
    thread_local HKCache cache;
    return cache;
}

/// Kl_m(x; q) = prod_{p | q} Kl_m(qbar_p^m x; p), q squarefree.
inline cplx hyper_kloosterman(unsigned m, i64 x, const FactoredModulus& q) {
    if (!q.squarefree()) throw std::invalid_argument("hyper_kloosterman: q must be squarefree");
    auto& cache = thread_hk_cache();
    cplx r{1.0, 0.0};
    for (const auto& pp : q.primes()) {
        const u64 p = pp.prime;
        const u64 qpi = mod_inverse(static_cast<i64>((q.value() / p) % p), p);
        const u64 arg = mulmod(powmod(qpi, m, p), mod(x, p), p);
        r *= cache.get(m, p).values[arg];
    }
    return r;
}

namespace detail {

inline cplx triple_sum_prime(u64 h1, u64 h2, u64 h3, u64 a, u64 p, const std::vector<u64>& inv) {
    cplx acc{0.0, 0.0};
    for (u64 n1 = 1; n1 < p; ++n1) {
        const u64 an1 = mulmod(a, inv[n1], p);
        for (u64 n2 = 1; n2 < p; ++n2) {
            const u64 n3 = mulmod(an1, inv[n2], p);
            const u64 e = addmod(addmod(mulmod(h1, n1, p), mulmod(h2, n2, p), p), mulmod(h3, n3, p), p);
            acc += unit_root(e, p);
        }
    }
    return acc / static_cast<double>(p);
}

}  // namespace detail

/// F(h, a; q) = q^{-1} sum_{n1 n2 n3 = a} e_q(h.n); evaluated per prime and recombined.
inline cplx triple_sum_F(i64 h1, i64 h2, i64 h3, i64 a, const FactoredModulus& q) {
    if (!q.squarefree()) throw std::invalid_argument("triple_sum_F: q must be squarefree");
    if (gcd_signed(a, q.value()) != 1) throw std::invalid_argument("triple_sum_F: a must be a unit");
    cplx r{1.0, 0.0};
    for (const auto& pp : q.primes()) {
        const u64 p = pp.prime;
        const u64 t = mod_inverse(static_cast<i64>((q.value() / p) % p), p);
        r *= detail::triple_sum_prime(mulmod(mod(h1, p), t, p), mulmod(mod(h2, p), t, p), mulmod(mod(h3, p), t, p),
                                      mod(a, p), p, inverse_table(p));
    }
    return r;
}

enum class KfNormalization { minus, plus };

struct KfParams {
    i64 a, b, c, d, e;
};

/// K_f(x; q) = -+ q^{-1/2} sum_y e_q(1/((y+ax+b)(y+cx+d)) + e y), poles contributing zero.
inline cplx kf_sum(const KfParams& k, i64 x, const FactoredModulus& q,
                   KfNormalization norm = KfNormalization::minus) {
    const u64 qv = q.value();
    if (gcd_signed(k.a - k.c, qv) != 1) throw std::invalid_argument("kf_sum: a - c must be coprime to q");
    if (!q.squarefree()) throw std::invalid_argument("kf_sum: q must be squarefree");
    const u64 s1 = addmod(mulmod(mod(k.a, qv), mod(x, qv), qv), mod(k.b, qv), qv);
    const u64 s2 = addmod(mulmod(mod(k.c, qv), mod(x, qv), qv), mod(k.d, qv), qv);
    const u64 e = mod(k.e, qv);
    cplx acc{0.0, 0.0};
    for (u64 y = 0; y < qv; ++y) {
        const u64 D = mulmod(addmod(y, s1, qv), addmod(y, s2, qv), qv);
        // 1/D + e y = (1 + e y D) / D
        const u64 num = addmod(1, mulmod(mulmod(e, y, qv), D, qv), qv);
        acc += eq_ratio(static_cast<i64>(num), static_cast<i64>(D), q);
    }
    const double sign = norm == KfNormalization::minus ? -1.0 : 1.0;
    return sign / std::sqrt(static_cast<double>(qv)) * acc;
}

/// FT_psi(t)(z) = -p^{-1/2} sum_x t(x) e_p(zx).
inline std::vector<cplx> ft_psi(const std::vector<cplx>& t) {
    std::vector<cplx> out = dft(t, +1);
    const double scale = -1.0 / std::sqrt(static_cast<double>(t.size()));
    for (auto& v : out) v *= scale;
    return out;
}

/// Sum over x in F_p^x of Kl_m(x) conj(Kl_m(ax)) e_p(bx) (or the first moment
/// sum Kl_m(x) e_p(bx) when conjugated is false), against sqrt(p).
inline BoundReport kl_correlation(unsigned m, i64 a, i64 b, u64 p, bool conjugated = true) {
    if (!is_prime(p)) throw std::invalid_argument("kl_correlation: p must be prime");
    if (conjugated && mod(a, p) == 0) throw std::invalid_argument("kl_correlation: a must be a unit");
    if (conjugated && mod(a, p) == 1 && mod(b, p) == 0)
        throw std::invalid_argument("kl_correlation: a = 1, b = 0 is the diagonal case");
    const HKTable& t = thread_hk_cache().get(m, p);
    cplx acc{0.0, 0.0};
    const u64 ap = mod(a, p), bp = mod(b, p);
    for (u64 x = 1; x < p; ++x) {
        cplx v = t.values[x] * unit_root(mulmod(bp, x, p), p);
        if (conjugated) v *= std::conj(t.values[mulmod(ap, x, p)]);
        acc += v;
    }
    return BoundReport::make(acc, std::sqrt(static_cast<double>(p)), conjugated ? "kls-correlation" : "kls-first-moment");
}

/// Largest |kl_correlation| / sqrt(p) over a in F_p^x and b in F_p, (a, b) != (1, 0), via one DFT per a.
inline double kl_correlation_max_ratio(unsigned m, u64 p) {
    const HKTable& t = thread_hk_cache().get(m, p);
    double best = 0.0;
    const double sq = std::sqrt(static_cast<double>(p));
    for (u64 a = 1; a < p; ++a) {
        std::vector<cplx> g(p, 0.0);
        for (u64 x = 1; x < p; ++x) g[x] = t.values[x] * std::conj(t.values[mulmod(a, x, p)]);
        const std::vector<cplx> G = p < 64 ? dft(g, +1) : detail::dft_bluestein(g, +1);
        for (u64 b = (a == 1 ? 1 : 0); b < p; ++b) best = std::max(best, std::abs(G[b]) / sq);
    }
    return best;
}

struct CorrelationSpec {
    u64 s = 1, r1 = 1, r2 = 1;
    i64 a1 = 1, a2 = 1, n = 0;
};

inline u64 gcd4(i64 a, i64 b, u64 c, u64 d) { return gcd(gcd(gcd_signed(a, c), gcd_signed(b, c)), d); }

/// Complete correlation sum over h in (Z/s[r1,r2]Z)^x, or its smoothed variant when a cutoff is given.
inline BoundReport composite_correlation(const CorrelationSpec& c, std::optional<SmoothCutoff> cutoff = std::nullopt) {
    if (gcd(c.s, c.r1) != 1 || gcd(c.s, c.r2) != 1)
        throw std::invalid_argument("composite_correlation: s must be coprime to r1 and r2");
    const FactoredModulus fs = factor(c.s), f1 = factor(c.r1), f2 = factor(c.r2);
    if (!fs.squarefree() || !f1.squarefree() || !f2.squarefree())
        throw std::invalid_argument("composite_correlation: moduli must be squarefree");
    const u64 L = lcm(c.r1, c.r2);
    const u64 M = checked::mul(L, c.s);
    const FactoredModulus q1 = factor(checked::mul(c.r1, c.s)), q2 = factor(checked::mul(c.r2, c.s));
    if (gcd_signed(c.a1, q1.value()) != 1 || gcd_signed(c.a2, q2.value()) != 1)
        throw std::invalid_argument("composite_correlation: a1, a2 must be units");
    auto term = [&](i64 h) {
        return hyper_kloosterman(3, checked::mul(c.a1, h), q1) * std::conj(hyper_kloosterman(3, checked::mul(c.a2, h), q2));
    };
    const i64 a1 = c.a1, a2 = c.a2;
    const i64 cross = checked::sub(checked::mul(a2, checked::mul(i64(c.r1), checked::mul(i64(c.r1), i64(c.r1)))),
                                   checked::mul(a1, checked::mul(i64(c.r2), checked::mul(i64(c.r2), i64(c.r2)))));
    const double base = std::sqrt(static_cast<double>(c.s)) * std::sqrt(static_cast<double>(L));
    if (!cutoff) {
        cplx acc{0.0, 0.0};
        for (u64 h = 1; h < M; ++h) {
            if (gcd(h, M) != 1) continue;
            acc += term(static_cast<i64>(h)) * unit_root(mulmod(mod(c.n, M), h, M), M);
        }
        const double g1 = static_cast<double>(gcd(gcd(gcd_signed(a2 - a1, c.r1), gcd_signed(c.n, c.r1)), c.r2));
        const double g2 = static_cast<double>(gcd(gcd_signed(cross, c.s), gcd_signed(c.n, c.s)));
        return BoundReport::make(acc, base * std::sqrt(g1) * std::sqrt(g2), "lm-c-kl");
    }
    cplx acc{0.0, 0.0};
    auto [lo, hi] = cutoff->integer_range();
    for (i64 h = lo; h <= hi; ++h) {
        if (gcd_signed(h, M) != 1) continue;
        const double w = (*cutoff)(static_cast<double>(h));
        if (w != 0.0) acc += w * term(h);
    }
    const double g1 = static_cast<double>(gcd(gcd_signed(a2 - a1, c.r1), c.r2));
    const double g2 = static_cast<double>(gcd_signed(cross, c.s));
    const double bound = (cutoff->N() / static_cast<double>(M) + 1.0) * base * std::sqrt(g1) * std::sqrt(g2);
    return BoundReport::make(acc, bound, "corr-2");
}

/// Sum over n in Z/[d1,d2]Z of e_{d1}(c1/(n+l1)) e_{d2}(c2/(n+l2)), against (c1,delta1)(c2,delta2)(d1,d2).
inline BoundReport dork_sum(u64 d1, u64 d2, i64 c1, i64 c2, i64 l1, i64 l2) {
    const FactoredModulus f1 = factor(d1), f2 = factor(d2);
    if (!f1.squarefree() || !f2.squarefree()) throw std::invalid_argument("dork_sum: d1, d2 must be squarefree");
    const u64 L = lcm(d1, d2);
    cplx acc{0.0, 0.0};
    for (u64 n = 0; n < L; ++n) {
        const i64 ni = static_cast<i64>(n);
        acc += eq_ratio(c1, checked::add(ni, l1), f1) * eq_ratio(c2, checked::add(ni, l2), f2);
    }
    const u64 g = gcd(d1, d2);
    const double bound = static_cast<double>(gcd_signed(c1, d1 / g)) * static_cast<double>(gcd_signed(c2, d2 / g)) *
                         static_cast<double>(g);
    return BoundReport::make(acc, bound, "dork");
}

struct PhiParams {
    i64 h = 0, n = 1;
    u64 r = 1, q0 = 1, q1 = 1, q2 = 1;
    i64 a = 0, b1 = 0, b2 = 0, ell = 0;
};

/// Phi_l = e_r(ah/(n q0 q1 q2)) e_{q0 q1}(b1 h/(n r q2)) e_{q2}(b2 h/((n + l r) r q0 q1)).
inline cplx phi_ell_eval(const PhiParams& P) {
    auto den_mod = [](i64 base, u64 k1, u64 k2, u64 k3, u64 q) {
        return static_cast<i64>(mulmod(mulmod(mod(base, q), k1 % q, q), mulmod(k2 % q, k3 % q, q), q));
    };
    auto num_mod = [](i64 x, i64 h, u64 q) { return static_cast<i64>(mulmod(mod(x, q), mod(h, q), q)); };
    const u64 q01 = checked::mul(P.q0, P.q1);
    const FactoredModulus fr = factor(P.r), f01 = factor(q01), f2 = factor(P.q2);
    const i64 nl = checked::add(P.n, checked::mul(P.ell, static_cast<i64>(P.r)));
    return eq_ratio(num_mod(P.a, P.h, P.r), den_mod(P.n, P.q0, P.q1, P.q2, P.r), fr) *
           eq_ratio(num_mod(P.b1, P.h, q01), den_mod(P.n, P.r, P.q2, 1, q01), f01) *
           eq_ratio(num_mod(P.b2, P.h, P.q2), den_mod(nl, P.r, P.q0, P.q1, P.q2), f2);
}

struct TwoVarSumSpec {
    u64 m = 1;
    i64 alpha = 0, beta = 0, gamma1 = 0, gamma2 = 0, l = 0;
    u64 q0 = 1;
    i64 d0 = 0, n0 = 0;
    SmoothCutoff cutoffD{0.0, 1.0};
    SmoothCutoff cutoffN{0.0, 1.0};
    double y = 1.0;
};

struct TwoVarReport {
    cplx actual;
    BoundReport lode1;
    BoundReport lode2;
};

/// Brute-force two-variable sum with both right-hand sides (x^{o(1)} factors taken as 1).
inline TwoVarReport two_var_sum(const TwoVarSumSpec& S) {
    if (S.m == 0 || S.m > 100000) throw std::invalid_argument("two_var_sum: need 1 <= m <= 1e5");
    if (S.q0 == 0 || S.m % S.q0 != 0) throw std::invalid_argument("two_var_sum: q0 must divide m");
    const FactoredModulus fm = factor(S.m);
    if (!fm.squarefree()) throw std::invalid_argument("two_var_sum: m must be squarefree");
    const u64 m = S.m;
    const i64 num = static_cast<i64>(mulmod(mod(S.alpha, m), mod(S.l, m), m));
    auto [dlo, dhi] = S.cutoffD.integer_range();
    auto [nlo, nhi] = S.cutoffN.integer_range();
    cplx acc{0.0, 0.0};
    for (i64 d = dlo; d <= dhi; ++d) {
        if (mod(d - S.d0, S.q0) != 0) continue;
        const double wd = S.cutoffD(static_cast<double>(d));
        if (wd == 0.0) continue;
        const u64 u1 = addmod(mulmod(mod(S.beta, m), mod(d, m), m), mod(S.gamma1, m), m);
        const u64 u2 = addmod(mulmod(mod(checked::add(S.beta, S.l), m), mod(d, m), m), mod(S.gamma2, m), m);
        cplx inner{0.0, 0.0};
        for (i64 n = nlo; n <= nhi; ++n) {
            if (mod(n - S.n0, S.q0) != 0) continue;
            const double wn = S.cutoffN(static_cast<double>(n));
            if (wn == 0.0) continue;
            const u64 nm = mod(n, m);
            const i64 den = static_cast<i64>(mulmod(addmod(nm, u1, m), addmod(nm, u2, m), m));
            inner += wn * eq_ratio(num, den, fm);
        }
        acc += wd * inner;
    }
    const double g = static_cast<double>(gcd_signed(num, m));
    const double md = static_cast<double>(m), q0 = static_cast<double>(S.q0);
    const double Nt = S.cutoffN.N(), Dt = S.cutoffD.N() / q0;
    const double pre = g * (Nt / (q0 * std::sqrt(md)) + std::sqrt(md));
    const double b1 = pre * (1.0 + std::sqrt(Dt) * std::cbrt(std::sqrt(md * S.y)) + Dt / std::sqrt(md));
    const double b2 = pre * (std::sqrt(md) + Dt / std::sqrt(md));
    return {acc, BoundReport::make(acc, b1, "lode-1"), BoundReport::make(acc, b2, "lode-2")};
}

}  // namespace eqdist
