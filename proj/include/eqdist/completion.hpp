#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eqdist/arith/factor.hpp"
#include "eqdist/arith/phase.hpp"
#include "eqdist/fourier.hpp"

namespace eqdist {

/// Truncated Taylor series a_0 + a_1 t + ... + a_{Order} t^{Order}.
template <int Order>
struct Jet {
    std::array<double, Order + 1> a{};

    static Jet variable(double t0) {
        Jet j;
        j.a[0] = t0;
        if constexpr (Order >= 1) j.a[1] = 1.0;
        return j;
    }
    static Jet constant(double c) {
        Jet j;
        j.a[0] = c;
        return j;
    }

    friend Jet operator+(const Jet& x, const Jet& y) {
        Jet r;
        for (int i = 0; i <= Order; ++i) r.a[i] = x.a[i] + y.a[i];
        return r;
    }
    friend Jet operator-(const Jet& x, const Jet& y) {
        Jet r;
        for (int i = 0; i <= Order; ++i) r.a[i] = x.a[i] - y.a[i];
        return r;
    }
    friend Jet operator*(const Jet& x, const Jet& y) {
        Jet r;
        for (int i = 0; i <= Order; ++i)
            for (int j = 0; i + j <= Order; ++j) r.a[i + j] += x.a[i] * y.a[j];
        return r;
    }
    Jet reciprocal() const {
        Jet r;
        r.a[0] = 1.0 / a[0];
        for (int n = 1; n <= Order; ++n) {
            double s = 0.0;
            for (int k = 1; k <= n; ++k) s += a[k] * r.a[n - k];
            r.a[n] = -s / a[0];
        }
        return r;
    }
    Jet exp() const {
        // e' = a' e, solved coefficientwise
        Jet r;
        r.a[0] = std::exp(a[0]);
        for (int n = 1; n <= Order; ++n) {
            double s = 0.0;
            for (int k = 1; k <= n; ++k) s += k * a[k] * r.a[n - k];
            r.a[n] = s / n;
        }
        return r;
    }
    double derivative(int j) const {
        double f = 1.0;
        for (int i = 2; i <= j; ++i) f *= i;
        return a[j] * f;
    }
};

enum class CutoffShape { bump };

/// psi_N(x) = psi((x - x0)/N) with psi supported on [c, C].
class SmoothCutoff {
public:
    static constexpr int kMaxDerivative = 8;

    SmoothCutoff(double x0, double N, CutoffShape shape = CutoffShape::bump) : x0_(x0), N_(N), shape_(shape) {
        if (!(N >= 1.0)) throw std::invalid_argument("SmoothCutoff: N must be >= 1");
    }

    double x0() const { return x0_; }
    double N() const { return N_; }
    CutoffShape shape() const { return shape_; }
    double c() const { return 0.0; }
    double C() const { return 1.0; }

    /// The base profile psi(t) = exp(4 - 1/(t(1-t))), so psi(1/2) = 1.
    static double profile(double t) {
        if (t <= 0.0 || t >= 1.0) return 0.0;
        return std::exp(4.0 - 1.0 / (t * (1.0 - t)));
    }

    /// psi^{(j)}(t) for j <= 8.
    static double profile_derivative(double t, int j) {
        if (j < 0 || j > kMaxDerivative) throw std::invalid_argument("SmoothCutoff: derivative order must be in [0, 8]");
        if (t <= 0.0 || t >= 1.0) return 0.0;
        using J = Jet<kMaxDerivative>;
        const J x = J::variable(t);
        const J u = x - x * x;
        const J g = (J::constant(4.0) - u.reciprocal()).exp();
        return g.derivative(j);
    }

    double operator()(double x) const { return profile((x - x0_) / N_); }

    /// d^j/dx^j psi_N(x) = N^{-j} psi^{(j)}((x - x0)/N).
    double derivative(double x, int j) const { return profile_derivative((x - x0_) / N_, j) / std::pow(N_, j); }

    /// Integers m with psi_N(m) possibly nonzero: [first, last].
    std::pair<i64, i64> integer_range() const {
        const double lo = x0_ + c() * N_, hi = x0_ + C() * N_;
        return {static_cast<i64>(std::floor(lo)), static_cast<i64>(std::ceil(hi))};
    }

    /// M' = sum_m psi_N(m).
    double mass() const {
        auto [lo, hi] = integer_range();
        double s = 0.0;
        for (i64 m = lo; m <= hi; ++m) s += (*this)(static_cast<double>(m));
        return s;
    }

private:
    double x0_;
    double N_;
    CutoffShape shape_;
};

inline SmoothCutoff make_cutoff(double x0, double N, const std::string& shape = "bump") {
    if (shape != "bump") throw std::invalid_argument("unknown cutoff shape: " + shape);
    return SmoothCutoff(x0, N, CutoffShape::bump);
}

struct Congruence {
    i64 a;
    u64 d;
};

/// sum over integers m (optionally m = a mod d) of psi(m) f(m mod q).
inline cplx incomplete_sum(const PeriodicFunction& f, const SmoothCutoff& psi,
                           std::optional<Congruence> cong = std::nullopt) {
    if (cong && (cong->d == 0 || f.modulus() % cong->d != 0))
        throw std::invalid_argument("incomplete_sum: congruence modulus must divide q");
    auto [lo, hi] = psi.integer_range();
    cplx acc{0.0, 0.0};
    for (i64 m = lo; m <= hi; ++m) {
        if (cong && mod(m - cong->a, cong->d) != 0) continue;
        const double w = psi(static_cast<double>(m));
        if (w != 0.0) acc += w * f(m);
    }
    return acc;
}

/// Periodization psi_{M,q}(x) = sum_n psi_M(x + q n).
inline PeriodicFunction periodize(const SmoothCutoff& psi, const FactoredModulus& q) {
    std::vector<cplx> v(q.value(), 0.0);
    auto [lo, hi] = psi.integer_range();
    for (i64 m = lo; m <= hi; ++m) v[mod(m, q.value())] += psi(static_cast<double>(m));
    return PeriodicFunction(q, std::move(v));
}

struct CompletionReport {
    cplx incomplete;
    cplx mainTerm;
    cplx exactError;
    cplx plancherelRhs;
    double plancherelResidual;
    double boundPolyaVinogradov;  // q^{1/2} sup_{h != 0} |FT_q f(h)|
    double boundTruncated;        // M q^{-1/2} sum_{0 < |h| <= q/M} |FT_q f(h)|
};

inline CompletionReport completion_estimate(const PeriodicFunction& f, const SmoothCutoff& psi) {
    const u64 q = f.modulus();
    CompletionReport rep{};
    rep.incomplete = incomplete_sum(f, psi);
    cplx total{0.0, 0.0};
    for (const auto& v : f.values) total += v;
    const bool constant = std::all_of(f.values.begin(), f.values.end(), [&](const cplx& v) { return v == f.values[0]; });
    const cplx mean = constant ? f.values[0] : total / static_cast<double>(q);
    rep.mainTerm = psi.mass() * mean;
    // sum_m psi(m) (f(m) - mean): vanishes identically for constant f
    auto [lo, hi] = psi.integer_range();
    for (i64 m = lo; m <= hi; ++m) {
        const double w = psi(static_cast<double>(m));
        if (w != 0.0) rep.exactError += w * (f(m) - mean);
    }

    const PeriodicFunction Ff = ft_q(f);
    const PeriodicFunction Fpsi = ft_q(periodize(psi, f.q));
    cplx rhs{0.0, 0.0};
    for (u64 h = 0; h < q; ++h) rhs += Ff.values[h] * Fpsi.values[(q - h) % q];
    rep.plancherelRhs = rhs;
    rep.plancherelResidual = std::abs(rhs - rep.incomplete);

    double sup = 0.0;
    for (u64 h = 1; h < q; ++h) sup = std::max(sup, std::abs(Ff.values[h]));
    const double sq = std::sqrt(static_cast<double>(q));
    rep.boundPolyaVinogradov = sq * sup;
    const double M = psi.N();
    const i64 H = static_cast<i64>(std::floor(static_cast<double>(q) / M));
    double trunc = 0.0;
    for (i64 h = 1; h <= H && 2 * h <= static_cast<i64>(q); ++h) {
        trunc += std::abs(Ff(h));
        if (2 * h != static_cast<i64>(q)) trunc += std::abs(Ff(-h));
    }
    rep.boundTruncated = M / sq * trunc;
    return rep;
}

/// Measured sum against a named estimate.
struct BoundReport {
    cplx actual{0.0, 0.0};
    double actualAbs = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
    std::string boundFormula;

    static BoundReport make(cplx actual, double bound, std::string formula) {
        BoundReport r;
        r.actual = actual;
        r.actualAbs = std::abs(actual);
        r.bound = bound;
        r.ratio = bound > 0.0 ? r.actualAbs / bound : std::numeric_limits<double>::infinity();
        r.boundFormula = std::move(formula);
        return r;
    }
};

struct VdcReport {
    BoundReport report;
    std::vector<u64> factors;  // r_1, ..., r_l used in the bound
    u64 K = 0;                 // floor(N / r), capped for the diagnostics
    double diagonal = 0.0;     // sum_k |A(k, k)|
    double offDiagonal = 0.0;  // sum_{k != l} |A(k, l)|
};

namespace detail {

inline double vdc_iterated_bound(double N, const std::vector<u64>& r) {
    // sum_{i<l} N^{1-2^-i} r_i^{2^-i} + N^{1-2^{-(l-1)}} r_l^{2^-l}
    const std::size_t l = r.size();
    double b = 0.0;
    for (std::size_t i = 1; i < l; ++i) {
        const double w = std::ldexp(1.0, -static_cast<int>(i));
        b += std::pow(N, 1.0 - w) * std::pow(static_cast<double>(r[i - 1]), w);
    }
    b += std::pow(N, 1.0 - std::ldexp(1.0, -static_cast<int>(l - 1))) *
         std::pow(static_cast<double>(r[l - 1]), std::ldexp(1.0, -static_cast<int>(l)));
    return b;
}

}  // namespace detail

/// q-van der Corput audit: |sum psi_N(n) f(n)| against N^{1/2} r^{1/2} + N^{1/2} s^{1/4}
/// (+ (N/q) |sum f| when N >= q). Depth 2 splits s = s1 s2 with the divisor s1 minimizing
/// the three-factor bound. The prefactor q^eps is taken as 1.
inline VdcReport vdc_estimate(const PeriodicFunction& f, const SmoothCutoff& psi, u64 r, u64 s, int depth = 1,
                              u64 maxK = 64) {
    const u64 q = f.modulus();
    if (r == 0 || s == 0 || checked::mul(r, s) != q) throw std::invalid_argument("vdc_estimate: r s must equal q");
    if (psi.N() > static_cast<double>(q)) throw std::invalid_argument("vdc_estimate: N must not exceed q");
    if (depth != 1 && depth != 2) throw std::invalid_argument("vdc_estimate: depth must be 1 or 2");
    const double N = psi.N();
    VdcReport out;
    const cplx actual = incomplete_sum(f, psi);

    std::vector<u64> factors{r, s};
    if (depth == 2) {
        double best = std::numeric_limits<double>::infinity();
        for (u64 s1 : factor(s).divisors()) {
            const std::vector<u64> cand{r, s1, s / s1};
            const double b = detail::vdc_iterated_bound(N, cand);
            if (b < best) {
                best = b;
                factors = cand;
            }
        }
    }
    double bound = detail::vdc_iterated_bound(N, factors);
    if (N >= static_cast<double>(q)) {
        cplx total{0.0, 0.0};
        for (const auto& v : f.values) total += v;
        bound += N / static_cast<double>(q) * std::abs(total);
    }
    out.report = BoundReport::make(actual, bound, depth == 1 ? "vdc-1" : "vdc-iterated-3");
    out.factors = factors;

    // A(k,l) = sum_n psi(n+kr) psi(n+lr) f(n+kr) conj f(n+lr)
    out.K = std::min<u64>(static_cast<u64>(std::floor(N / static_cast<double>(r))), maxK);
    auto [lo, hi] = psi.integer_range();
    const i64 ri = static_cast<i64>(r);
    for (u64 k = 1; k <= out.K; ++k) {
        for (u64 l = 1; l <= out.K; ++l) {
            cplx A{0.0, 0.0};
            const i64 kr = static_cast<i64>(k) * ri, lr = static_cast<i64>(l) * ri;
            for (i64 n = lo - std::max(kr, lr); n <= hi; ++n) {
                const double w = psi(static_cast<double>(n + kr)) * psi(static_cast<double>(n + lr));
                if (w != 0.0) A += w * f(n + kr) * std::conj(f(n + lr));
            }
            (k == l ? out.diagonal : out.offDiagonal) += std::abs(A);
        }
    }
    return out;
}

}  // namespace eqdist
