#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "eqdist/arith/checked.hpp"
#include "eqdist/arith/factor.hpp"
#include "eqdist/arith/phase.hpp"

namespace eqdist {

/// Finitely supported sequence n -> alpha(n) on the positive integers.
struct CoefficientSeq {
    std::map<u64, cplx> support;
    std::optional<double> scale;
    bool smooth = false;
    bool siegelWalfisz = false;

    cplx operator()(u64 n) const {
        auto it = support.find(n);
        return it == support.end() ? cplx{0.0, 0.0} : it->second;
    }
    u64 max_index() const { return support.empty() ? 0 : support.rbegin()->first; }

    /// Builds alpha(n) = f(n) for lo <= n <= hi, dropping zeros.
    template <class F>
    static CoefficientSeq from_function(u64 lo, u64 hi, F&& f) {
        CoefficientSeq s;
        for (u64 n = std::max<u64>(lo, 1); n <= hi; ++n) {
            const cplx v = f(n);
            if (v != cplx{0.0, 0.0}) s.support.emplace_hint(s.support.end(), n, v);
        }
        return s;
    }
};

/// (alpha * beta)(n) = sum_{d | n} alpha(d) beta(n/d), optionally truncated to n <= limit.
inline CoefficientSeq dirichlet_convolve(const CoefficientSeq& a, const CoefficientSeq& b,
                                         std::optional<u64> limit = std::nullopt) {
    CoefficientSeq out;
    for (const auto& [m, x] : a.support) {
        for (const auto& [n, y] : b.support) {
            u64 mn;
            if (__builtin_mul_overflow(m, n, &mn)) {
                if (limit) break;
                throw RangeError("dirichlet_convolve: product overflows");
            }
            if (limit && mn > *limit) break;
            out.support[mn] += x * y;
        }
    }
    std::erase_if(out.support, [](const auto& kv) { return kv.second == cplx{0.0, 0.0}; });
    return out;
}

/// Sum over n = a (q) of alpha(n) minus the average over primitive classes.
inline cplx discrepancy(const CoefficientSeq& alpha, i64 a, const FactoredModulus& q) {
    const u64 qv = q.value();
    if (gcd_signed(a, qv) != 1) throw std::invalid_argument("discrepancy: a must be coprime to q");
    const u64 ar = mod(a, qv);
    cplx inclass{0.0, 0.0}, coprime{0.0, 0.0};
    for (const auto& [n, v] : alpha.support) {
        if (n % qv == ar) inclass += v;
        if (gcd(n, qv) == 1) coprime += v;
    }
    return inclass - coprime / static_cast<double>(q.euler_phi());
}

namespace detail {

/// Dense real sequences on [0, N] (index 0 unused) with truncated Dirichlet convolution.
using Dense = std::vector<double>;

inline Dense dense_convolve(const Dense& a, const Dense& b) {
    const std::size_t N = a.size() - 1;
    Dense out(N + 1, 0.0);
    for (std::size_t m = 1; m <= N; ++m) {
        if (a[m] == 0.0) continue;
        for (std::size_t n = 1; m * n <= N; ++n) out[m * n] += a[m] * b[n];
    }
    return out;
}

inline std::vector<int> mobius_table(std::size_t N) {
    std::vector<int> mu(N + 1, 1);
    std::vector<bool> composite(N + 1, false);
    mu[0] = 0;
    for (std::size_t p = 2; p <= N; ++p) {
        if (composite[p]) continue;
        for (std::size_t m = p; m <= N; m += p) {
            if (m > p) composite[m] = true;
            mu[m] = -mu[m];
        }
        if (p <= N / p)
            for (std::size_t m = p * p; m <= N; m += p * p) mu[m] = 0;
    }
    return mu;
}

inline Dense von_mangoldt_table(std::size_t N) {
    Dense lam(N + 1, 0.0);
    for (u64 p : primes_up_to(N)) {
        const double lp = std::log(static_cast<double>(p));
        for (u64 pk = p; pk <= N; pk *= p) {
            lam[pk] = lp;
            if (pk > N / p) break;
        }
    }
    return lam;
}

/// Largest integer T >= 0 with T^K <= X.
inline u64 integer_root_floor(double X, unsigned K) {
    if (X < 1.0) return 0;
    u64 t = static_cast<u64>(std::floor(std::pow(X, 1.0 / K)));
    auto pw = [&](u64 v) {
        long double r = 1;
        for (unsigned i = 0; i < K; ++i) r *= v;
        return r;
    };
    while (t > 0 && pw(t) > X) --t;
    while (pw(t + 1) <= X) ++t;
    return t;
}

}  // namespace detail

/// Heath-Brown terms T_j(n) = (-1)^{j-1} C(K,j) (mu_<=^{*j} * 1^{*(j-1)} * L)(n) for n in [lo, hi].
struct HeathBrownTable {
    unsigned K;
    double x;
    u64 lo, hi;
    u64 truncation;                        // mu_<= supported on n <= truncation
    std::vector<std::vector<double>> terms;  // terms[n - lo][j - 1]
    std::vector<double> lambda;            // Lambda(n)

    double sum(u64 n) const {
        double s = 0.0;
        for (double t : terms[n - lo]) s += t;
        return s;
    }
    double residual(u64 n) const { return std::abs(sum(n) - lambda[n - lo]); }
    double max_residual() const {
        double m = 0.0;
        for (u64 n = lo; n <= hi; ++n) m = std::max(m, residual(n));
        return m;
    }
};

inline HeathBrownTable heath_brown_table(unsigned K, double x, u64 lo, u64 hi) {
    if (K < 1 || K > 10) throw std::invalid_argument("heath_brown: K must be in [1, 10]");
    if (!(x >= 1.0) || x > 1e6) throw std::invalid_argument("heath_brown: x must be in [1, 1e6]");
    if (static_cast<double>(lo) < x || static_cast<double>(hi) > 2 * x || lo > hi)
        throw std::invalid_argument("heath_brown: n must lie in [x, 2x]");
    const std::size_t N = hi;
    const u64 T = detail::integer_root_floor(2 * x, K);
    const auto mu = detail::mobius_table(N);
    detail::Dense muT(N + 1, 0.0), one(N + 1, 1.0), L(N + 1, 0.0);
    one[0] = 0.0;
    for (std::size_t n = 1; n <= N; ++n) {
        if (n <= T) muT[n] = mu[n];
        L[n] = std::log(static_cast<double>(n));
    }
    HeathBrownTable tab{K, x, lo, hi, T, std::vector<std::vector<double>>(hi - lo + 1), {}};
    const auto lam = detail::von_mangoldt_table(N);
    tab.lambda.assign(lam.begin() + static_cast<std::ptrdiff_t>(lo), lam.end());
    detail::Dense A = detail::dense_convolve(muT, L);
    double binom = 1.0;
    for (unsigned j = 1; j <= K; ++j) {
        if (j > 1) A = detail::dense_convolve(muT, detail::dense_convolve(one, A));
        binom = binom * (K - j + 1) / j;
        const double sign = (j % 2 == 1) ? 1.0 : -1.0;
        for (u64 n = lo; n <= hi; ++n) tab.terms[n - lo].push_back(sign * binom * A[n]);
    }
    return tab;
}

struct HeathBrownTerms {
    std::vector<double> terms;
    double lambda;
    double residual;
};

inline HeathBrownTerms heath_brown_terms(unsigned K, double x, u64 n) {
    const HeathBrownTable t = heath_brown_table(K, x, n, n);
    return {t.terms[0], t.lambda[0], t.residual(n)};
}

struct VaughanTerms {
    double t1, t2, t3;  // mu_< * L, -(mu_< * Lambda_< * 1), mu_>= * Lambda_>= * 1
    double lambdaGe;    // Lambda(n) 1_{n >= V}
    double residual;
};

/// Vaughan's identity evaluated at one n by divisor enumeration.
inline VaughanTerms vaughan_terms(double U, double V, u64 n) {
    if (!(U > 1.0) || !(V > 1.0)) throw std::invalid_argument("vaughan: U, V must exceed 1");
    if (n == 0) throw std::invalid_argument("vaughan: n must be positive");
    const FactoredModulus fn = factor(n);
    const auto divs = fn.divisors();
    auto lam = [](u64 m) { return m == 1 ? 0.0 : von_mangoldt(factor(m)); };
    VaughanTerms v{0.0, 0.0, 0.0, 0.0, 0.0};
    for (u64 d : divs) {
        const int mu = factor(d).mobius();
        if (mu == 0) continue;
        const bool small_d = static_cast<double>(d) < U;
        if (small_d) v.t1 += mu * std::log(static_cast<double>(n / d));
        for (u64 e : factor(n / d).divisors()) {
            const double le = lam(e);
            if (le == 0.0) continue;
            const bool small_e = static_cast<double>(e) < V;
            if (small_d && small_e) v.t2 -= mu * le;
            if (!small_d && !small_e) v.t3 += mu * le;
        }
    }
    v.lambdaGe = static_cast<double>(n) >= V ? lam(n) : 0.0;
    v.residual = std::abs(v.t1 + v.t2 + v.t3 - v.lambdaGe);
    return v;
}

// ---------------------------------------------------------------------------
// Type classification

using Rational = boost::multiprecision::cpp_rational;

namespace detail {

/// Signed decimal integer, leading zeros allowed.
inline boost::multiprecision::cpp_int parse_decimal_int(std::string body, const std::string& literal) {
    const bool neg = !body.empty() && body[0] == '-';
    if (!body.empty() && (body[0] == '-' || body[0] == '+')) body.erase(0, 1);
    if (body.empty() || body.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("bad rational literal: " + literal);
    body.erase(0, std::min(body.find_first_not_of('0'), body.size() - 1));
    const boost::multiprecision::cpp_int v(body);
    return neg ? boost::multiprecision::cpp_int(-v) : v;
}

}  // namespace detail

/// Parses "p/q", "p" or a decimal literal into an exact rational.
inline Rational parse_rational(const std::string& s) {
    auto trim = [](std::string v) {
        const auto b = v.find_first_not_of(" \t");
        const auto e = v.find_last_not_of(" \t");
        return b == std::string::npos ? std::string{} : v.substr(b, e - b + 1);
    };
    const std::string t = trim(s);
    if (t.empty()) throw std::invalid_argument("empty rational literal");
    if (auto slash = t.find('/'); slash != std::string::npos) {
        const auto num = detail::parse_decimal_int(trim(t.substr(0, slash)), t);
        const auto den = detail::parse_decimal_int(trim(t.substr(slash + 1)), t);
        if (den == 0) throw std::invalid_argument("zero denominator in " + t);
        return Rational(num, den);
    }
    if (auto dot = t.find('.'); dot != std::string::npos) {
        boost::multiprecision::cpp_int den = 1;
        for (std::size_t i = dot + 1; i < t.size(); ++i) den *= 10;
        return Rational(detail::parse_decimal_int(t.substr(0, dot) + t.substr(dot + 1), t), den);
    }
    return Rational(detail::parse_decimal_int(t, t));
}

class InvalidSigma : public std::invalid_argument {
public:
    explicit InvalidSigma(const std::string& what) : std::invalid_argument(what) {}
};

enum class TypeKind { Type0, TypeI_II, TypeIII, TypeIV, TypeV, Infeasible };

inline const char* type_name(TypeKind k) {
    switch (k) {
        case TypeKind::Type0: return "Type0";
        case TypeKind::TypeI_II: return "TypeI/II";
        case TypeKind::TypeIII: return "TypeIII";
        case TypeKind::TypeIV: return "TypeIV";
        case TypeKind::TypeV: return "TypeV";
        case TypeKind::Infeasible: return "infeasible";
    }
    return "?";
}

/// Witness indices are 0-based. For Type I/II, S is the part with the smaller sum;
/// for Types III-V the indices are ordered by increasing t (ties by index).
struct TypeClassification {
    TypeKind kind = TypeKind::Infeasible;
    std::vector<std::size_t> indices;
    std::vector<std::size_t> S, T;
    bool typeIVandVCoexist = false;
};

namespace detail {

inline void check_tuple(const std::vector<Rational>& t) {
    Rational s = 0;
    for (const auto& x : t) {
        if (x < 0) throw std::invalid_argument("classify: entries must be non-negative");
        s += x;
    }
    if (s != 1) throw std::invalid_argument("classify: entries must sum to 1");
    if (t.size() > 20) throw std::invalid_argument("classify: at most 20 entries supported");
}

inline std::optional<TypeClassification> find_type0(const std::vector<Rational>& t, const Rational& sigma) {
    const Rational hi = Rational(1, 2) + sigma;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= hi) return TypeClassification{TypeKind::Type0, {i}, {}, {}, false};
    return std::nullopt;
}

inline std::optional<TypeClassification> find_type12(const std::vector<Rational>& t, const Rational& sigma) {
    const Rational lo = Rational(1, 2) - sigma, hi = Rational(1, 2) + sigma;
    const std::size_t n = t.size();
    for (u64 mask = 0; mask < (u64{1} << n); ++mask) {
        Rational s = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) s += t[i];
        if (s > lo && s < hi) {
            TypeClassification c{TypeKind::TypeI_II, {}, {}, {}, false};
            std::vector<std::size_t> in, out;
            for (std::size_t i = 0; i < n; ++i) (mask >> i & 1 ? in : out).push_back(i);
            // 1 - s is also in the gap; S is the lighter side
            if (s <= 1 - s) {
                c.S = in;
                c.T = out;
            } else {
                c.S = out;
                c.T = in;
            }
            return c;
        }
    }
    return std::nullopt;
}

inline std::vector<std::size_t> sorted_by_value(const std::vector<Rational>& t, std::vector<std::size_t> idx) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });
    return idx;
}

inline std::vector<std::size_t> band(const std::vector<Rational>& t, const Rational& sigma) {
    std::vector<std::size_t> b;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= 2 * sigma && t[i] <= Rational(1, 2) - sigma) b.push_back(i);
    return sorted_by_value(t, b);
}

inline std::optional<TypeClassification> find_type3(const std::vector<Rational>& t, const Rational& sigma) {
    const auto b = band(t, sigma);
    const Rational hi = Rational(1, 2) + sigma;
    for (std::size_t x = 0; x < b.size(); ++x)
        for (std::size_t y = x + 1; y < b.size(); ++y)
            for (std::size_t z = y + 1; z < b.size(); ++z)
                // ascending order: the smallest pair sum decides
                if (t[b[x]] + t[b[y]] >= hi) return TypeClassification{TypeKind::TypeIII, {b[x], b[y], b[z]}, {}, {}, false};
    return std::nullopt;
}

inline std::optional<TypeClassification> find_type4(const std::vector<Rational>& t, const Rational& sigma) {
    const auto b = band(t, sigma);
    const Rational hi = Rational(1, 2) + sigma;
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t l = i + 3; l < b.size(); ++l)
            if (t[b[i]] + t[b[l]] >= hi)
                return TypeClassification{TypeKind::TypeIV, {b[i], b[i + 1], b[i + 2], b[l]}, {}, {}, false};
    return std::nullopt;
}

inline std::optional<TypeClassification> find_type5(const std::vector<Rational>& t, const Rational& sigma) {
    const auto b = band(t, sigma);
    const Rational hi = Rational(1, 2) + sigma;
    // the three smallest of the five decide; take the two largest band elements as the top pair
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j)
            for (std::size_t k = j + 1; k + 2 < b.size(); ++k)
                if (t[b[i]] + t[b[j]] + t[b[k]] >= hi)
                    return TypeClassification{TypeKind::TypeV, {b[i], b[j], b[k], b[k + 1], b[k + 2]}, {}, {}, false};
    return std::nullopt;
}

}  // namespace detail

/// Type 0 / I/II / III classification for 1/10 < sigma < 1/2, following the
/// powerful-element argument once Types 0 and I/II are excluded.
inline TypeClassification classify(const std::vector<Rational>& t, const Rational& sigma) {
    if (!(sigma > Rational(1, 10) && sigma < Rational(1, 2))) throw InvalidSigma("classify: sigma must lie in (1/10, 1/2)");
    detail::check_tuple(t);
    if (auto c = detail::find_type0(t, sigma)) return *c;
    if (auto c = detail::find_type12(t, sigma)) return *c;

    // Every subset is now small (<= 1/2 - sigma) or large (>= 1/2 + sigma).
    const std::size_t n = t.size();
    const Rational lo = Rational(1, 2) - sigma;
    std::vector<Rational> sums(std::size_t{1} << n, Rational(0));
    for (u64 mask = 1; mask < (u64{1} << n); ++mask) {
        const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(mask));
        sums[mask] = sums[mask & (mask - 1)] + t[low];
    }
    std::vector<std::size_t> powerful;
    for (std::size_t i = 0; i < n; ++i) {
        const u64 bit = u64{1} << i;
        for (u64 mask = 0; mask < (u64{1} << n); ++mask) {
            if (mask & bit) continue;
            if (sums[mask] <= lo && sums[mask | bit] > lo) {
                powerful.push_back(i);
                break;
            }
        }
    }
    if (powerful.size() != 3)
        throw std::logic_error("classify: expected exactly three powerful elements, found " + std::to_string(powerful.size()));
    return TypeClassification{TypeKind::TypeIII, detail::sorted_by_value(t, powerful), {}, {}, false};
}

/// Extended classification for 1/14 < sigma < 1/2 by exhaustive search in the order
/// 0, I/II, III, IV, V; flags tuples admitting both a Type IV and a Type V witness.
inline TypeClassification classify_extended(const std::vector<Rational>& t, const Rational& sigma) {
    if (!(sigma > Rational(1, 14) && sigma < Rational(1, 2)))
        throw InvalidSigma("classify_extended: sigma must lie in (1/14, 1/2)");
    detail::check_tuple(t);
    if (auto c = detail::find_type0(t, sigma)) return *c;
    if (auto c = detail::find_type12(t, sigma)) return *c;
    if (auto c = detail::find_type3(t, sigma)) return *c;
    auto c4 = detail::find_type4(t, sigma);
    auto c5 = detail::find_type5(t, sigma);
    if (c4) {
        c4->typeIVandVCoexist = c5.has_value();
        return *c4;
    }
    if (c5) return *c5;
    return TypeClassification{};
}

inline std::vector<Rational> parse_tuple(const std::string& csv) {
    std::vector<Rational> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const auto comma = csv.find(',', start);
        const std::string item = csv.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        out.push_back(parse_rational(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace eqdist
