#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "eqdist/arith/checked.hpp"
#include "eqdist/arith/factor.hpp"
#include "eqdist/arith/phase.hpp"

namespace eqdist {

/// A function Z/qZ -> C stored by residue.
struct PeriodicFunction {
    FactoredModulus q;
    std::vector<cplx> values;

    PeriodicFunction() = default;
    PeriodicFunction(FactoredModulus modulus, std::vector<cplx> vals) : q(std::move(modulus)), values(std::move(vals)) {
        if (values.size() != q.value()) throw std::invalid_argument("PeriodicFunction: length must equal q");
    }

    u64 modulus() const { return q.value(); }
    const cplx& operator()(i64 x) const { return values[mod(x, q.value())]; }
};

namespace detail {

inline constexpr std::size_t kDirectDftLimit = 2048;

inline void fft_pow2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? -1.0 : 1.0);
        std::vector<cplx> w(len / 2);
        for (std::size_t k = 0; k < len / 2; ++k) w[k] = {std::cos(ang * k), std::sin(ang * k)};
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k], v = a[i + k + len / 2] * w[k];
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

inline std::vector<cplx> dft_direct(const std::vector<cplx>& x, int sign) {
    const std::size_t n = x.size();
    std::vector<cplx> roots(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        roots[k] = {std::cos(t), std::sin(t)};
    }
    std::vector<cplx> out(n);
    for (std::size_t h = 0; h < n; ++h) {
        cplx acc{0.0, 0.0};
        std::size_t idx = 0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += x[j] * roots[idx];
            idx += h;
            if (idx >= n) idx -= n;
        }
        out[h] = acc;
    }
    return out;
}

inline std::vector<cplx> dft_bluestein(const std::vector<cplx>& x, int sign) {
    const std::size_t n = x.size();
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;
    std::vector<cplx> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const u64 k2 = static_cast<u64>(static_cast<u128>(k) * k % (2 * n));
        const double t = sign * std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = {std::cos(t), std::sin(t)};
    }
    std::vector<cplx> a(m, 0.0), b(m, 0.0);
    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
    b[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);
    fft_pow2(a, false);
    fft_pow2(b, false);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    fft_pow2(a, true);
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k];
    return out;
}

}  // namespace detail

/// Unnormalized DFT: out[h] = sum_x in[x] exp(sign 2 pi i h x / n).
inline std::vector<cplx> dft(const std::vector<cplx>& x, int sign = 1) {
    if (x.empty()) return {};
    return x.size() < detail::kDirectDftLimit ? detail::dft_direct(x, sign) : detail::dft_bluestein(x, sign);
}

/// FT_q(f)(h) = q^{-1/2} sum_x f(x) e_q(hx).
inline PeriodicFunction ft_q(const PeriodicFunction& f) {
    std::vector<cplx> out = dft(f.values, +1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(f.modulus()));
    for (auto& v : out) v *= scale;
    return PeriodicFunction(f.q, std::move(out));
}

inline cplx inner(const PeriodicFunction& f, const PeriodicFunction& g) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < f.values.size(); ++i) acc += f.values[i] * std::conj(g.values[i]);
    return acc;
}

}  // namespace eqdist
