#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "eqdist/arith/checked.hpp"
#include "eqdist/arith/factor.hpp"

namespace eqdist {

/// Scale parameter y >= 1 held exactly as num/den.
class DDScale {
public:
    DDScale(u64 num, u64 den) : num_(num), den_(den) {
        if (den == 0 || num < den) throw std::invalid_argument("dense divisibility needs y >= 1");
        const u64 g = gcd(num_, den_);
        num_ /= g;
        den_ /= g;
    }

    /// Exact dyadic value of a double y >= 1; values beyond 2^62 saturate (every n <= 2^62 then qualifies).
    static DDScale from_double(double y) {
        if (!(y >= 1.0) || std::isnan(y)) throw std::invalid_argument("dense divisibility needs y >= 1");
        if (y >= 4611686018427387904.0) return DDScale(u64{1} << 62, 1);
        int e = 0;
        const double m = std::frexp(y, &e);  // y = m 2^e, m in [1/2, 1)
        const u64 mant = static_cast<u64>(std::ldexp(m, 53));
        const int shift = e - 53;
        if (shift >= 0) return DDScale(mant << shift, 1);
        // strip common powers of two before building the denominator
        u64 num = mant;
        int s = -shift;
        while (s > 0 && (num & 1) == 0) {
            num >>= 1;
            --s;
        }
        return DDScale(num, u64{1} << s);
    }

    u64 num() const { return num_; }
    u64 den() const { return den_; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// a <= y * b
    bool le_times(u64 a, u64 b) const { return static_cast<u128>(a) * den_ <= static_cast<u128>(num_) * b; }

    /// y * factor, exact when it fits.
    DDScale times(u64 factor) const { return DDScale(checked::mul(num_, factor), den_); }

    friend bool operator==(const DDScale&, const DDScale&) = default;

private:
    u64 num_;
    u64 den_;
};

struct DenseDivQuery {
    u64 n;
    unsigned i;
    double y;
};

namespace detail {

struct DDKey {
    u64 n, num, den;
    unsigned i;
    friend bool operator==(const DDKey&, const DDKey&) = default;
};

struct DDKeyHash {
    std::size_t operator()(const DDKey& k) const noexcept {
        u64 h = k.n * 0x9E3779B97F4A7C15ULL;
        h ^= k.num + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
        h ^= k.den + 0x85EBCA77C2B2AE63ULL + (h << 6) + (h >> 2);
        h ^= k.i + 0x27D4EB2F165667C5ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

/// Divisor together with its own factorization.
struct FacDivisor {
    u64 value;
    std::vector<PrimePower> primes;
};

inline std::vector<FacDivisor> factored_divisors(const std::vector<PrimePower>& pf) {
    std::vector<FacDivisor> out{{1, {}}};
    for (const auto& pp : pf) {
        const std::size_t base = out.size();
        u64 pk = 1;
        for (unsigned e = 1; e <= pp.exponent; ++e) {
            pk *= pp.prime;
            for (std::size_t t = 0; t < base; ++t) {
                FacDivisor d = out[t];
                d.value *= pk;
                d.primes.push_back({pp.prime, e});
                out.push_back(std::move(d));
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const FacDivisor& a, const FacDivisor& b) { return a.value < b.value; });
    return out;
}

inline std::vector<PrimePower> cofactor(const std::vector<PrimePower>& n, const std::vector<PrimePower>& d) {
    std::vector<PrimePower> out;
    std::size_t t = 0;
    for (const auto& pp : n) {
        unsigned e = pp.exponent;
        if (t < d.size() && d[t].prime == pp.prime) e -= d[t++].exponent;
        if (e > 0) out.push_back({pp.prime, e});
    }
    return out;
}

}  // namespace detail

/// Memoized evaluator of i-tuply y-dense divisibility. Not thread-safe; use one per thread.
class DenseDivisibility {
public:
    bool is_dd(const FactoredModulus& n, unsigned i, const DDScale& y) { return eval(n.value(), n.primes(), i, y); }
    bool is_dd(u64 n, unsigned i, const DDScale& y) { return is_dd(factor(n), i, y); }

    /// Good divisors r of n for the split (j, k): n/r is j-tuply and r is k-tuply y-densely divisible.
    std::vector<u64> good_divisors(const FactoredModulus& n, unsigned j, unsigned k, const DDScale& y) {
        std::vector<u64> out;
        for (const auto& d : detail::factored_divisors(n.primes())) {
            if (eval(n.value() / d.value, detail::cofactor(n.primes(), d.primes), j, y) &&
                eval(d.value, d.primes, k, y))
                out.push_back(d.value);
        }
        return out;
    }

    std::size_t memo_size() const { return memo_.size(); }
    void clear() { memo_.clear(); }

private:
    bool eval(u64 n, const std::vector<PrimePower>& pf, unsigned i, const DDScale& y) {
        if (i == 0 || n == 1) return true;
        if (y.le_times(n, 1)) return true;  // y >= n: every divisor chain has ratio <= y
        const detail::DDKey key{n, y.num(), y.den(), i};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        const auto divs = detail::factored_divisors(pf);
        bool ok = true;
        for (unsigned j = 0; j < i && ok; ++j) {
            const unsigned k = i - 1 - j;
            // The windows [r, y r] of admissible r must cover [1, y n].
            u64 prev = 0;
            for (const auto& d : divs) {
                const bool good =
                    eval(n / d.value, detail::cofactor(pf, d.primes), j, y) && eval(d.value, d.primes, k, y);
                if (!good) continue;
                if (prev == 0 ? d.value != 1 : !y.le_times(d.value, prev)) {
                    ok = false;
                    break;
                }
                prev = d.value;
            }
            if (ok && prev != n) ok = false;
        }
        memo_.emplace(key, ok);
        return ok;
    }

    std::unordered_map<detail::DDKey, bool, detail::DDKeyHash> memo_;
};

inline DenseDivisibility& thread_dd_cache() {
    thread_local DenseDivisibility cache;
    return cache;
}

inline bool is_dd(u64 n, unsigned i, const DDScale& y) { return thread_dd_cache().is_dd(n, i, y); }
inline bool is_dd(const FactoredModulus& n, unsigned i, const DDScale& y) { return thread_dd_cache().is_dd(n, i, y); }
inline bool is_dd(const DenseDivQuery& q) { return is_dd(q.n, q.i, DDScale::from_double(q.y)); }

struct DDWitness {
    u64 q;
    u64 r;
};

/// A factorization n = q r with R/y <= r <= R, q j-tuply and r k-tuply y-densely divisible.
/// Returns the largest admissible r, or nothing when n is not i-tuply y-densely divisible.
inline std::optional<DDWitness> dd_witness(u64 n, unsigned i, unsigned j, unsigned k, const DDScale& y, double R) {
    if (i == 0 || j + k + 1 != i) throw std::invalid_argument("dd_witness needs i >= 1 and j + k = i - 1");
    const long double yn = static_cast<long double>(y.num()) / y.den() * n;
    if (!(R >= 1.0) || static_cast<long double>(R) > yn * (1 + 1e-15L))
        throw std::invalid_argument("dd_witness needs 1 <= R <= y n");
    const FactoredModulus fn = factor(n);
    auto& dd = thread_dd_cache();
    if (!dd.is_dd(fn, i, y)) return std::nullopt;
    using boost::multiprecision::cpp_int;
    int e = 0;
    const double m = std::frexp(R, &e);
    const cpp_int Rnum = cpp_int(static_cast<u64>(std::ldexp(m, 53)));
    const int shift = e - 53;
    // R = Rnum * 2^shift exactly
    auto r_le_R = [&](u64 r) {
        cpp_int lhs = r, rhs = Rnum;
        if (shift >= 0) rhs <<= shift;
        else lhs <<= -shift;
        return lhs <= rhs;
    };
    auto ry_ge_R = [&](u64 r) {  // r * num / den >= R
        cpp_int lhs = cpp_int(r) * y.num(), rhs = Rnum * y.den();
        if (shift >= 0) rhs <<= shift;
        else lhs <<= -shift;
        return lhs >= rhs;
    };
    const auto good = dd.good_divisors(fn, j, k, y);
    for (auto it = good.rbegin(); it != good.rend(); ++it) {
        if (!r_le_R(*it)) continue;
        if (ry_ge_R(*it)) return DDWitness{n / *it, *it};
        break;
    }
    return std::nullopt;
}

inline std::optional<DDWitness> dd_witness(u64 n, unsigned i, unsigned j, unsigned k, double y, double R) {
    return dd_witness(n, i, j, k, DDScale::from_double(y), R);
}

struct ModuliInterval {
    double lo = 1.0;
    double hi = std::numeric_limits<double>::infinity();
    u64 limit = 1;
};

enum class ModuliMode { denselyDivisible, smooth, allSquarefree };

/// Squarefree q <= limit whose prime factors p satisfy lo < p <= hi, filtered by mode:
/// denselyDivisible keeps i-tuply y-densely divisible q, smooth keeps q with all p <= y.
inline std::vector<FactoredModulus> enumerate_moduli(const ModuliInterval& I, unsigned i, double y, ModuliMode mode) {
    if (I.limit > 1000000000ULL) throw std::invalid_argument("enumerate_moduli: limit must be <= 1e9");
    if (!(I.lo < I.hi)) throw std::invalid_argument("enumerate_moduli: empty prime interval");
    double pmax = std::min(static_cast<double>(I.limit), I.hi);
    if (mode == ModuliMode::smooth) pmax = std::min(pmax, y);
    std::vector<u64> ps;
    if (pmax >= 2)
        for (u64 p : primes_up_to(static_cast<u64>(std::floor(pmax))))
            if (static_cast<double>(p) > I.lo) ps.push_back(p);

    std::vector<FactoredModulus> out;
    std::vector<PrimePower> stack;
    auto dfs = [&](auto&& self, std::size_t start, u64 value) -> void {
        out.emplace_back(value, stack);
        for (std::size_t t = start; t < ps.size(); ++t) {
            if (value > I.limit / ps[t]) break;
            stack.push_back({ps[t], 1});
            self(self, t + 1, value * ps[t]);
            stack.pop_back();
        }
    };
    dfs(dfs, 0, 1);
    std::sort(out.begin(), out.end(), [](const FactoredModulus& a, const FactoredModulus& b) { return a.value() < b.value(); });
    if (mode == ModuliMode::denselyDivisible) {
        const DDScale ys = DDScale::from_double(y);
        std::erase_if(out, [&](const FactoredModulus& q) { return !is_dd(q, i, ys); });
    }
    return out;
}

}  // namespace eqdist
