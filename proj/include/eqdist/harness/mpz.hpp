#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "eqdist/arith/modular.hpp"
#include "eqdist/decomp.hpp"
#include "eqdist/dense_div.hpp"
#include "eqdist/harness/parallel.hpp"
#include "eqdist/harness/report.hpp"
#include "eqdist/harness/sieve.hpp"

namespace eqdist::harness {

struct MpzExperimentConfig {
    double x = 1e4;
    Rational varpi = 0;
    Rational delta = Rational(1, 10);
    unsigned i = 1;
    i64 a = 1;
    ModuliMode mode = ModuliMode::denselyDivisible;
    std::vector<double> Alist{1.0, 2.0};
    double intervalLo = 1.0;  // primes p with lo < p <= hi
    double intervalHi = std::numeric_limits<double>::infinity();
    bool excludeExceptional = false;  // drop q whose primes below exp(log^{1/3} x) multiply past exp(log^{2/3} x)
};

/// a_q composed by CRT from a_p = a mod p over the primes of q; nullopt if some a_p is 0.
inline std::optional<u64> compose_residue(i64 a, const FactoredModulus& q) {
    u64 acc = 0, m = 1;
    for (const auto& pp : q.primes()) {
        const u64 ap = mod(a, pp.prime);
        if (ap == 0) return std::nullopt;
        acc = crt_pair(acc, m, ap, pp.prime);
        m *= pp.prime;
    }
    return acc;
}

inline const char* mode_name(ModuliMode m) {
    switch (m) {
        case ModuliMode::denselyDivisible: return "denselyDivisible";
        case ModuliMode::smooth: return "smooth";
        case ModuliMode::allSquarefree: return "allSquarefree";
    }
    return "?";
}

inline ModuliMode parse_mode(const std::string& s) {
    if (s == "denselyDivisible" || s == "dd") return ModuliMode::denselyDivisible;
    if (s == "smooth") return ModuliMode::smooth;
    if (s == "allSquarefree" || s == "squarefree") return ModuliMode::allSquarefree;
    throw std::invalid_argument("unknown moduli mode: " + s);
}

inline bool exceptional_modulus(const FactoredModulus& q, double x) {
    const double L = std::log(x);
    const double D0 = std::exp(std::cbrt(L));
    const double limit = std::cbrt(L) * std::cbrt(L);  // log of exp(log^{2/3} x)
    double logProd = 0.0;
    for (const auto& pp : q.primes())
        if (static_cast<double>(pp.prime) <= D0) logProd += std::log(static_cast<double>(pp.prime));
    return logProd > limit;
}

/// D(x) = sum_q |Delta(Lambda 1_[x,2x]; a_q (q))| over the enumerated q >= 2, with the trivial
/// comparator T(x) = sum_q phi(q)^{-1} sum_{(n,q)=1} Lambda(n).
inline ExperimentReport run_mpz(const MpzExperimentConfig& c) {
    if (!(c.x >= 2.0) || c.x > 1e7) throw std::invalid_argument("run_mpz: need 2 <= x <= 1e7");
    const auto t0 = std::chrono::steady_clock::now();
    const double w = c.varpi.convert_to<double>(), d = c.delta.convert_to<double>();
    const double Q = std::pow(c.x, 0.5 + 2.0 * w);
    const double y = std::pow(c.x, d);
    const u64 lo = static_cast<u64>(std::ceil(c.x)), hi = static_cast<u64>(std::floor(2.0 * c.x));

    std::vector<FactoredModulus> moduli;
    if (Q >= 2.0) {
        ModuliInterval I{c.intervalLo, c.intervalHi, static_cast<u64>(std::floor(Q))};
        for (auto& q : enumerate_moduli(I, c.i, std::max(1.0, y), c.mode))
            if (q.value() >= 2 && !(c.excludeExceptional && exceptional_modulus(q, c.x))) moduli.push_back(std::move(q));
    }

    std::vector<double> lambda(hi - lo + 1, 0.0);
    KahanSum totalK;
    for (const auto& v : lambda_support(lo, hi)) {
        lambda[v.n - lo] = v.lambda;
        totalK.add(v.lambda);
    }
    const double total = totalK.value();

    struct Row {
        bool skipped = false;
        u64 aq = 0;
        double inClass = 0, coprime = 0, disc = 0, trivial = 0;
    };
    const auto rows = parallel_map(moduli.size(), [&](std::size_t k) {
        const FactoredModulus& q = moduli[k];
        Row r;
        const auto aq = compose_residue(c.a, q);
        if (!aq) {
            r.skipped = true;
            return r;
        }
        r.aq = *aq;
        const u64 qv = q.value();
        KahanSum cls;
        for (u64 n = lo + (r.aq + qv - lo % qv) % qv; n <= hi; n += qv) cls.add(lambda[n - lo]);
        KahanSum cop;
        cop.add(total);
        for (const auto& pp : q.primes()) {
            const double lp = std::log(static_cast<double>(pp.prime));
            for (u64 v = pp.prime; v <= hi; v *= pp.prime) {
                if (v >= lo) cop.add(-lp);
                if (v > hi / pp.prime) break;
            }
        }
        r.inClass = cls.value();
        r.coprime = cop.value();
        const double phi = static_cast<double>(q.euler_phi());
        r.disc = r.inClass - r.coprime / phi;
        r.trivial = r.coprime / phi;
        return r;
    });

    ExperimentReport rep;
    rep.columns = {"q", "a_q", "phi", "psi_class", "psi_coprime", "delta", "abs_delta", "trivial"};
    KahanSum D, T;
    std::size_t skipped = 0;
    for (std::size_t k = 0; k < moduli.size(); ++k) {
        const Row& r = rows[k];
        if (r.skipped) {
            ++skipped;
            continue;
        }
        D.add(std::abs(r.disc));
        T.add(r.trivial);
        rep.add_row({std::to_string(moduli[k].value()), std::to_string(r.aq), std::to_string(moduli[k].euler_phi()),
                     fmt(r.inClass), fmt(r.coprime), fmt(r.disc), fmt(std::abs(r.disc)), fmt(r.trivial)});
    }
    rep.meta = {{"experiment", "mpz"},
                {"x", c.x},
                {"varpi", c.varpi.str()},
                {"delta", c.delta.str()},
                {"i", c.i},
                {"a", c.a},
                {"mode", mode_name(c.mode)},
                {"Q", Q},
                {"y", y},
                {"excludeExceptional", c.excludeExceptional}};
    rep.summary["moduli"] = moduli.size() - skipped;
    rep.summary["skipped"] = skipped;
    rep.summary["D"] = D.value();
    rep.summary["T"] = T.value();
    rep.summary["ratio"] = T.value() > 0 ? D.value() / T.value() : 0.0;
    json norm = json::object();
    for (double A : c.Alist) norm[fmt(A)] = D.value() * std::pow(std::log(c.x), A) / c.x;
    rep.summary["D_logA_over_x"] = norm;
    rep.meta["seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace eqdist::harness
