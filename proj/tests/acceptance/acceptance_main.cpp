// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "support/properties.hpp"

using namespace eqdist;
using namespace eqdist::harness;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::pair<int, std::string> run_cli(const std::string& args) {
    const std::string cmd = std::string(EQDIST_CLI) + " " + args;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, ""};
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    const int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

Cell positive_cell(Rational cw, Rational cd, Rational rhs) {
    return {LinearConstraint{cw, cd, 0, Rel::Less, rhs}, LinearConstraint{1, 0, 0, Rel::Greater, 0},
            LinearConstraint{0, 1, 0, Rel::Greater, 0}};
}

void criterion1(Check& c) {
    const auto t0 = Clock::now();
    const auto [status, out] = run_cli("exponents max --claims newtypeFull --i 4 --delta-policy zero");
    const double cliSeconds = seconds_since(t0);
    c.require(status == 0, "cli exit status");
    c.require(out.rfind("7/300", 0) == 0 && (out == "7/300\n" || out == "7/300 (open)\n"), "cli output '" + out + "'");

    const auto t1 = Clock::now();
    const auto full = mpz_region(claim_sets("newtypeFull"), 4);
    c.require(full.cells.size() == 1 && same_cell(full.cells[0], positive_cell(600, 180, 7)), "newtypeFull region");
    const auto elem = mpz_region(claim_sets("newtypeElementary"), 2);
    c.require(elem.cells.size() == 1 && same_cell(elem.cells[0], positive_cell(168, 48, 1)), "newtypeElementary region");
    const Rational v(1, 1168);
    c.require(mpz_region(claim_sets("zhangOriginal"), 1).contains(v, v), "zhangOriginal at 1/1168");
    const auto sup = max_distribution_exponent(claim_sets("newtypeFull"), 4, {});
    c.require(!sup.empty && sup.value == Rational(7, 300), "sup 7/300");
    const double libSeconds = seconds_since(t1);
    c.require(libSeconds < 1.0 && cliSeconds < 1.0, "runtime");
    c.detail << "cli=\"" << out.substr(0, out.find('\n')) << "\" cli_s=" << cliSeconds << " lib_s=" << libSeconds;
}

void criterion2(Check& c) {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (double x : {1e3, 1e4})
        for (unsigned K = 1; K <= 4; ++K) {
            const u64 lo = static_cast<u64>(x), hi = static_cast<u64>(2 * x);
            worst = std::max(worst, heath_brown_table(K, x, lo, hi).max_residual());
        }
    const double hbSeconds = seconds_since(t0);
    double vworst = 0.0;
    for (u64 n = 2; n <= 10000; ++n) {
        const double U = std::cbrt(static_cast<double>(n));
        const auto v = vaughan_terms(U, U, n);
        vworst = std::max(vworst, std::abs(v.t1 + v.t2 + v.t3 - oracle::lambda(n)));
    }
    c.require(worst < 1e-6, "Heath-Brown residual");
    c.require(vworst < 1e-6, "Vaughan residual");
    c.require(hbSeconds < 60.0, "runtime");
    c.detail << "hb_max_residual=" << worst << " vaughan_max_residual=" << vworst << " hb_s=" << hbSeconds;
}

void criterion3(Check& c) {
    const auto t0 = Clock::now();
    double klWorst = 0.0, zeroErr = 0.0;
    for (u64 p : primes_up_to(199))
        for (unsigned m = 2; m <= 4; ++m) {
            const HKTable t = hk_table(m, p);
            for (u64 x = 1; x < p; ++x) klWorst = std::max(klWorst, std::abs(t.values[x]) - m);
            const double expect = (m % 2 ? 1.0 : -1.0) * std::pow(static_cast<double>(p), -(m - 1.0) / 2.0);
            zeroErr = std::max(zeroErr, std::abs(t.values[0] - cplx(expect, 0.0)));
        }
    c.require(klWorst <= 1e-9, "Deligne bound");
    c.require(zeroErr < 1e-12, "Kl_m(0) closed form");

    // S(a, b; p) = S(1, ab; p) for units a, b; the reduction is checked directly for p <= 61
    double weil = 0.0, reduction = 0.0;
    std::size_t pairs = 0;
    for (u64 p : primes_up_to(499)) {
        const FactoredModulus fp = factor(p);
        std::vector<cplx> S1(p);
        for (u64 c0 = 1; c0 < p; ++c0) S1[c0] = kloosterman2(1, static_cast<i64>(c0), fp);
        const double bound = 2.0 * std::sqrt(static_cast<double>(p));
        for (u64 a = 1; a < p; ++a)
            for (u64 b = 1; b < p; ++b) {
                weil = std::max(weil, std::abs(S1[mulmod(a, b, p)]) - bound);
                ++pairs;
            }
        if (p <= 61)
            for (u64 a = 1; a < p; ++a)
                for (u64 b = 1; b < p; ++b)
                    reduction = std::max(reduction, std::abs(oracle::kloosterman(a, b, p) - S1[mulmod(a, b, p)]));
    }
    c.require(weil <= 1e-9, "Weil bound");
    c.require(reduction < 1e-9, "S(a,b) = S(1,ab)");

    double ram = 0.0, ramOracle = 0.0;
    for (u64 q = 1; q <= 2000; ++q) {
        if (!oracle::squarefree(q)) continue;
        const FactoredModulus fq = factor(q);
        for (u64 b = 0; b < q; ++b) {
            const cplx v = ramanujan(static_cast<i64>(b), fq);
            ram = std::max(ram, std::abs(v) - static_cast<double>(gcd(b, q)));
            if (q <= 200) ramOracle = std::max(ramOracle, std::abs(v - oracle::ramanujan(static_cast<i64>(b), q)));
        }
    }
    c.require(ram <= 1e-9, "Ramanujan bound");
    c.require(ramOracle < 1e-9, "Ramanujan closed form vs unit sum");
    const double s = seconds_since(t0);
    c.require(s < 300.0, "runtime");
    c.detail << "deligne_excess=" << klWorst << " kl0_err=" << zeroErr << " weil_excess=" << weil << " pairs=" << pairs
             << " ramanujan_excess=" << ram << " s=" << s;
}

void criterion4(Check& c) {
    std::mt19937_64 rng(20241);
    double eqErr = 0.0, klErr = 0.0;
    for (int t = 0; t < 10000;) {
        const u64 q1 = 2 + rng() % 400, q2 = 2 + rng() % 400;
        if (gcd(q1, q2) != 1) continue;
        const i64 a = static_cast<i64>(rng() % 1000000) - 500000;
        const i64 b = 1 + static_cast<i64>(rng() % 100000);
        if (gcd_signed(b, q1 * q2) != 1) continue;
        const auto [whole, p1, p2] = crt_factor_eval(Ratio{a, b}, factor(q1), factor(q2));
        eqErr = std::max(eqErr, std::abs(whole - p1 * p2));
        eqErr = std::max(eqErr, std::abs(whole - oracle::e_ratio(a, b, q1 * q2)));
        ++t;
    }
    for (int t = 0; t < 10000;) {
        const unsigned m = t % 4 == 0 ? 3 : 2;
        const u64 q = 6 + rng() % (m == 3 ? 30 : 120);
        if (!oracle::squarefree(q) || oracle::prime(q)) continue;
        const i64 x = static_cast<i64>(rng() % q);
        const cplx lib = hyper_kloosterman(m, x, factor(q));
        const cplx brute = oracle::kl_composite(m, x, q);
        klErr = std::max(klErr, std::abs(lib - brute) / std::max(1.0, std::abs(brute)));
        ++t;
    }
    c.require(eqErr < 1e-10, "e_q CRT");
    c.require(klErr < 1e-10, "Kl_m CRT");

    double fErr = 0.0;
    std::size_t fCases = 0;
    for (u64 q = 2; q <= 300; ++q) {
        if (!oracle::squarefree(q)) continue;
        for (int t = 0; t < 2;) {
            i64 h[3], a;
            for (auto& v : h) v = 1 + static_cast<i64>(rng() % q);
            a = 1 + static_cast<i64>(rng() % q);
            if (gcd_signed(h[0] * h[1] * h[2] * a, q) != 1) continue;
            const cplx F = triple_sum_F(h[0], h[1], h[2], a, factor(q));
            fErr = std::max(fErr, std::abs(F - hyper_kloosterman(3, a * h[0] * h[1] * h[2], factor(q))));
            if (q <= 60) fErr = std::max(fErr, std::abs(F - oracle::triple_F(h[0], h[1], h[2], a, q)));
            ++fCases;
            ++t;
        }
    }
    c.require(fErr < 1e-9, "F = Kl_3");

    const auto ps = primes_up_to(97);
    double kfErr = 0.0, degenerateErr = 0.0;
    std::size_t boundary = 0, degenerate = 0;
    for (int t = 0; t < 100; ++t) {
        const u64 p = ps[1 + rng() % (ps.size() - 1)];
        i64 v[5];
        do
            for (auto& x : v) x = static_cast<i64>(rng() % p);
        while (v[0] == v[2]);
        std::vector<cplx> K(p);
        for (u64 x = 0; x < p; ++x) K[x] = kf_sum(KfParams{v[0], v[1], v[2], v[3], v[4]}, static_cast<i64>(x), factor(p));
        const auto F = ft_psi(K);
        // the boundary points z' in {0, e} of the normalized family
        const u64 zb0 = oracle::md(v[0] * v[4], p), zb1 = oracle::md(v[2] * v[4], p);
        for (u64 z = 0; z < p; ++z) {
            if (oracle::kf_doubly_degenerate(v[4], static_cast<i64>(z), p)) {
                ++degenerate;
                degenerateErr = std::max(degenerateErr, std::abs(F[z] - cplx(1.0 / double(p) - 1.0, 0.0)));
                continue;
            }
            boundary += z == zb0 || z == zb1;
            kfErr = std::max(kfErr, std::abs(F[z] - oracle::kf_fourier_expected(v[0], v[1], v[2], v[3], v[4], z, p)));
        }
    }
    c.require(kfErr < 1e-9, "K_f Fourier identity");
    c.require(degenerateErr < 1e-9, "z = e = 0 value 1/p - 1");
    c.detail << "eq_err=" << eqErr << " kl_rel_err=" << klErr << " F_err=" << fErr << " F_cases=" << fCases
             << " kf_err=" << kfErr << " kf_boundary_points=" << boundary << " kf_z=e=0_points=" << degenerate
             << " (transform 1/p-1 there, not Kl_3(0)=1/p)";
}

void criterion5(Check& c) {
    std::mt19937_64 rng(5150);
    std::normal_distribution<double> G;
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const u64 q = 2 + rng() % 2047;
        std::vector<cplx> v(q);
        for (auto& x : v) x = {G(rng), G(rng)};
        const PeriodicFunction f(factor(q), std::move(v));
        const SmoothCutoff psi(U(rng) * 4000.0 - 2000.0, 1.0 + U(rng) * 2.0 * static_cast<double>(q));
        worst = std::max(worst, completion_estimate(f, psi).plancherelResidual / static_cast<double>(q));
    }
    bool constExact = true;
    for (int t = 0; t < 20; ++t) {
        const u64 q = 2 + rng() % 2047;
        const PeriodicFunction f(factor(q), std::vector<cplx>(q, cplx{G(rng), G(rng)}));
        constExact &= completion_estimate(f, SmoothCutoff(U(rng) * 100.0, 1.0 + U(rng) * 5000.0)).exactError == cplx(0.0, 0.0);
    }
    c.require(worst < 1e-9, "Plancherel residual");
    c.require(constExact, "constant f exact");
    c.detail << "max_residual_over_q=" << worst;
}

void criterion6(Check& c) {
    std::mt19937_64 rng(606);
    const std::size_t v0 = props::fq_monotone(rng, 10000);
    const std::size_t v1 = props::fq_divisors_multiples(rng, 10000);
    const std::size_t v2 = props::fq_lcm(rng, 1000);
    const std::size_t v3 = props::fq_smooth(rng, 10000);
    const std::size_t v4 = props::fq_smooth_squarefree(rng, 10000);
    const std::size_t w = props::dd_witness_failures(rng, 10000);
    const std::size_t o = props::dd_oracle_mismatches(rng, 3000);
    c.require(v0 + v1 + v2 + v3 + v4 == 0, "dense divisibility properties");
    c.require(w == 0, "witness re-verification");
    c.require(o == 0, "definition oracle");
    c.detail << "violations(0,i,ii,iii,iv)=" << v0 << "," << v1 << "," << v2 << "," << v3 << "," << v4
             << " witness_failures=" << w << " oracle_mismatches=" << o;
}

void criterion7(Check& c) {
    std::mt19937_64 rng(707);
    std::string first;
    const std::size_t bad = props::classifier_mismatches(rng, 10000, &first);
    c.require(bad == 0, "exhaustive agreement " + first);
    using R = Rational;
    const R s3(1, 8), s4(1, 12), s5(1, 10);
    const bool e3 = classify({2 * s3, R(1, 2) - s3, R(1, 2) - s3}, s3).kind == TypeKind::TypeIII;
    const bool e4 = classify_extended({2 * s4, 2 * s4, R(1, 2) - 3 * s4, R(1, 2) - s4}, s4).kind == TypeKind::TypeIV;
    const bool e5 = classify_extended({2 * s5, 2 * s5, 2 * s5, 2 * s5, 1 - 8 * s5}, s5).kind == TypeKind::TypeV;
    c.require(e3 && e4 && e5, "example tuples");
    c.detail << "mismatches=" << bad << " examples(III,IV,V)=" << e3 << e4 << e5;
}

void criterion8(Check& c) {
    const auto t0 = Clock::now();
    double kls = 0.0;
    u64 argmax = 0;
    for (u64 p : primes_up_to(499)) {
        if (p < 3) continue;
        const double r = kl_correlation_max_ratio(3, p);
        if (r > kls) {
            kls = r;
            argmax = p;
        }
    }
    c.require(kls <= 10.0, "KLS ratio <= 10");

    std::vector<double> ratios;
    for (double x : {1e4, 1e5, 3e5}) {
        MpzExperimentConfig cfg;
        cfg.x = x;
        cfg.delta = Rational(1, 4);
        ratios.push_back(run_mpz(cfg).summary["ratio"].get<double>());
    }
    c.require(ratios[1] <= 1.2 * ratios[0] && ratios[2] <= 1.2 * ratios[1], "MPZ ratio trend");

    const auto full = run_satotate(factor(10007), 10006);
    const u64 lim = static_cast<u64>(std::ceil(std::pow(10007.0, 0.6)));
    const auto shortRange = run_satotate(factor(10007), lim);
    const double ksFull = full.summary["ks"].get<double>(), ksShort = shortRange.summary["ks"].get<double>();
    c.require(ksFull < 0.02, "KS full range");
    c.require(ksShort < 0.1, "KS short range");
    c.detail << "kls_max=" << kls << "@p=" << argmax << " mpz_ratio=" << ratios[0] << "," << ratios[1] << ","
             << ratios[2] << " ks_full=" << ksFull << " ks_p^0.6=" << ksShort << " s=" << seconds_since(t0);
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
        {"exponent reproduction", criterion1},    {"Heath-Brown and Vaughan identities", criterion2},
        {"Deligne/Weil hard bounds", criterion3}, {"identity suite", criterion4},
        {"completion identity", criterion5},      {"dense divisibility properties", criterion6},
        {"classifier equivalence", criterion7},   {"measured-cancellation guards", criterion8},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Check c;
        const auto t0 = Clock::now();
        try {
            criteria[k].second(c);
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail << " [exception: " << e.what() << "]";
        }
        std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << k + 1 << " (" << criteria[k].first
                  << "): " << c.detail.str() << " wall=" << seconds_since(t0) << "s" << std::endl;
        failures += !c.ok;
    }
    return failures == 0 ? 0 : 1;
}
