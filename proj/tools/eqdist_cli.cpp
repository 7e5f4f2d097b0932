#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eqdist/eqdist.hpp"

using namespace eqdist;
using namespace eqdist::harness;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Result of a leaf command: lines already printed, optionally a report for --out.
struct Outcome {
    std::optional<ExperimentReport> report;
    int failures = 0;
};

std::string outPath;

void print(const json& j) { std::cout << j.dump() << "\n"; }

json cplx_json(cplx v) { return {{"re", v.real()}, {"im", v.imag()}, {"abs", std::abs(v)}}; }

json bound_json(const BoundReport& b) {
    json j = cplx_json(b.actual);
    j["bound"] = b.bound;
    j["ratio"] = b.ratio;
    j["formula"] = b.boundFormula;
    return j;
}

FactoredModulus modulus(i64 q) {
    if (q < 1) throw UsageError("modulus must be positive");
    return factor(static_cast<u64>(q));
}

DDScale parse_scale(const std::string& s) {
    if (auto slash = s.find('/'); slash != std::string::npos)
        return DDScale(std::stoull(s.substr(0, slash)), std::stoull(s.substr(slash + 1)));
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw UsageError("bad y: " + s);
    if (v == std::floor(v) && v < 1e18) return DDScale(static_cast<u64>(v), 1);
    return DDScale::from_double(v);
}

ClaimSet resolve_claims(const std::string& name) {
    if (std::filesystem::exists(name)) return load_claims_file(name);
    return claim_sets(name);
}

std::pair<double, double> parse_interval(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw UsageError("interval must be LO:HI");
    const std::string hi = s.substr(colon + 1);
    return {std::stod(s.substr(0, colon)),
            hi.empty() || hi == "inf" ? std::numeric_limits<double>::infinity() : std::stod(hi)};
}

/// Fills options not given on the command line from the config map.
void apply_config(CLI::App* cmd, const std::map<std::string, std::string>& cfg) {
    for (CLI::Option* opt : cmd->get_options()) {
        if (opt->count() > 0 || opt->get_lnames().empty()) continue;
        for (const auto& name : opt->get_lnames()) {
            auto it = cfg.find(name);
            if (it == cfg.end()) continue;
            if (opt->get_type_size() == 0) {
                if (it->second == "true" || it->second == "1") opt->add_result("true");
            } else {
                opt->add_result(it->second);
            }
            opt->run_callback();
            break;
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eqdist: exponential sums, dense divisibility and distribution exponents", "eqdist_cli"};
    app.require_subcommand(1);
    std::string configPath;
    app.add_option("--config", configPath, "key = value file supplying option values");
    app.add_option("--out", outPath, "write the report to PATH (.json for JSON, CSV otherwise)");

    std::function<Outcome()> action;
    auto leaf = [&](CLI::App* sub, std::function<Outcome()> fn) { sub->callback([&action, fn] { action = fn; }); };

    // densediv
    auto* dd = app.add_subcommand("densediv", "dense divisibility")->require_subcommand(1);
    struct {
        i64 n = 1, i = 1, j = 0, k = 0, limit = 1;
        std::string y = "1", mode = "denselyDivisible", interval;
        double R = 1;
        bool asJson = false;
    } ddo;
    auto* ddc = dd->add_subcommand("check", "is n i-tuply y-densely divisible");
    ddc->add_option("--n", ddo.n)->required();
    ddc->add_option("--i", ddo.i)->required();
    ddc->add_option("--y", ddo.y, "y >= 1, decimal or p/q")->required();
    ddc->add_flag("--json", ddo.asJson, "print a JSON record instead of true/false");
    leaf(ddc, [&] {
        if (ddo.n < 1 || ddo.i < 0) throw UsageError("need n >= 1 and i >= 0");
        const bool r = is_dd(static_cast<u64>(ddo.n), static_cast<unsigned>(ddo.i), parse_scale(ddo.y));
        if (ddo.asJson) print({{"n", ddo.n}, {"i", ddo.i}, {"y", ddo.y}, {"dd", r}});
        else std::cout << (r ? "true" : "false") << "\n";
        return Outcome{};
    });
    auto* ddw = dd->add_subcommand("witness", "factorization n = q r with R/y <= r <= R");
    ddw->add_option("--n", ddo.n)->required();
    ddw->add_option("--i", ddo.i)->required();
    ddw->add_option("--j", ddo.j)->required();
    ddw->add_option("--k", ddo.k)->required();
    ddw->add_option("--y", ddo.y)->required();
    ddw->add_option("--r", ddo.R, "target R in [1, y n]")->required();
    leaf(ddw, [&] {
        if (ddo.n < 1 || ddo.i < 1 || ddo.j < 0 || ddo.k < 0) throw UsageError("need n >= 1, i >= 1, j, k >= 0");
        const auto w = dd_witness(static_cast<u64>(ddo.n), static_cast<unsigned>(ddo.i), static_cast<unsigned>(ddo.j),
                                  static_cast<unsigned>(ddo.k), parse_scale(ddo.y), ddo.R);
        json j{{"n", ddo.n}, {"i", ddo.i}, {"j", ddo.j}, {"k", ddo.k}, {"y", ddo.y}, {"R", ddo.R}};
        if (w) {
            j["q"] = w->q;
            j["r"] = w->r;
        } else {
            j["witness"] = nullptr;
        }
        print(j);
        return Outcome{};
    });
    auto* dde = dd->add_subcommand("enum", "enumerate squarefree moduli");
    dde->add_option("--limit", ddo.limit)->required();
    dde->add_option("--mode", ddo.mode, "denselyDivisible | smooth | allSquarefree");
    dde->add_option("--i", ddo.i);
    dde->add_option("--y", ddo.y);
    dde->add_option("--interval", ddo.interval, "prime interval LO:HI (primes lo < p <= hi)");
    leaf(dde, [&] {
        ModuliInterval I{1.0, std::numeric_limits<double>::infinity(), static_cast<u64>(std::max<i64>(ddo.limit, 1))};
        if (!ddo.interval.empty()) std::tie(I.lo, I.hi) = parse_interval(ddo.interval);
        const double y = parse_scale(ddo.y).value();
        Outcome o;
        ExperimentReport rep;
        rep.columns = {"q", "primes"};
        for (const auto& q : enumerate_moduli(I, static_cast<unsigned>(ddo.i), y, parse_mode(ddo.mode))) {
            json ps = json::array();
            std::string pj;
            for (const auto& pp : q.primes()) {
                ps.push_back(pp.prime);
                pj += (pj.empty() ? "" : " ") + std::to_string(pp.prime);
            }
            print({{"q", q.value()}, {"primes", ps}});
            rep.add_row({std::to_string(q.value()), pj});
        }
        o.report = rep;
        return o;
    });

    // sum
    auto* sum = app.add_subcommand("sum", "complete and incomplete exponential sums")->require_subcommand(1);
    struct {
        i64 a = 1, b = 0, c = 0, d = 0, e = 1, q = 1, m = 2, x = 1, h1 = 1, h2 = 1, h3 = 1, p = 2;
        i64 s = 0, r1 = 1, r2 = 1, a1 = 1, a2 = 1, n = 0;
        i64 alpha = 1, beta = 0, gamma1 = 0, gamma2 = 1, l = 1, q0 = 1, d0 = 0, n0 = 0;
        double D = 1, N = 1, xD = 0, xN = 0, y = 1;
        std::string norm = "minus";
        bool first = false;
    } so;
    auto* sr = sum->add_subcommand("ramanujan", "c_q(b)");
    sr->add_option("--b", so.b)->required();
    sr->add_option("--q", so.q)->required();
    leaf(sr, [&] {
        const auto q = modulus(so.q);
        const cplx v = ramanujan(so.b, q);
        json j = cplx_json(v);
        j["gcd"] = gcd_signed(so.b, q.value());
        print(j);
        return Outcome{std::nullopt, std::abs(v) > static_cast<double>(gcd_signed(so.b, q.value())) + 1e-9};
    });
    auto* sk = sum->add_subcommand("kloosterman", "S(a, b; q)");
    sk->add_option("--a", so.a)->required();
    sk->add_option("--b", so.b)->required();
    sk->add_option("--q", so.q)->required();
    leaf(sk, [&] {
        print(cplx_json(kloosterman2(so.a, so.b, modulus(so.q))));
        return Outcome{};
    });
    auto* sh = sum->add_subcommand("hyperkloosterman", "Kl_m(x; q), normalized");
    sh->add_option("--m", so.m)->required();
    sh->add_option("--x", so.x)->required();
    sh->add_option("--q", so.q)->required();
    leaf(sh, [&] {
        if (so.m < 1 || so.m > 8) throw UsageError("m must be in [1, 8]");
        const auto q = modulus(so.q);
        const cplx v = hyper_kloosterman(static_cast<unsigned>(so.m), so.x, q);
        print(cplx_json(v));
        const bool prime = q.omega() == 1 && q.squarefree();
        return Outcome{std::nullopt, prime && mod(so.x, q.value()) != 0 && std::abs(v) > so.m + 1e-9};
    });
    auto* sF = sum->add_subcommand("F", "triple sum F(h, a; q)");
    sF->add_option("--h1", so.h1)->required();
    sF->add_option("--h2", so.h2)->required();
    sF->add_option("--h3", so.h3)->required();
    sF->add_option("--a", so.a)->required();
    sF->add_option("--q", so.q)->required();
    leaf(sF, [&] {
        const auto q = modulus(so.q);
        json j = cplx_json(triple_sum_F(so.h1, so.h2, so.h3, so.a, q));
        if (gcd_signed(checked::mul(so.h1, checked::mul(so.h2, so.h3)), q.value()) == 1)
            j["kl3"] = cplx_json(hyper_kloosterman(3, checked::mul(so.a, checked::mul(so.h1, checked::mul(so.h2, so.h3))), q));
        print(j);
        return Outcome{};
    });
    auto* sK = sum->add_subcommand("kf", "K_f(x; q)");
    for (auto [name, ref] : {std::pair{"--a", &so.a}, {"--b", &so.b}, {"--c", &so.c}, {"--d", &so.d}, {"--e", &so.e}})
        sK->add_option(name, *ref)->required();
    sK->add_option("--x", so.x)->required();
    sK->add_option("--q", so.q)->required();
    sK->add_option("--norm", so.norm, "minus | plus");
    leaf(sK, [&] {
        if (so.norm != "minus" && so.norm != "plus") throw UsageError("norm must be minus or plus");
        print(cplx_json(kf_sum({so.a, so.b, so.c, so.d, so.e}, so.x, modulus(so.q),
                               so.norm == "minus" ? KfNormalization::minus : KfNormalization::plus)));
        return Outcome{};
    });
    auto* sc = sum->add_subcommand("correlation", "Kl_m correlation mod p, or composite Kl_3 correlation with --s");
    sc->add_option("--m", so.m);
    sc->add_option("--a", so.a);
    sc->add_option("--b", so.b);
    sc->add_option("--p", so.p);
    sc->add_flag("--first-moment", so.first, "sum Kl_m(x) e_p(bx) without the conjugate factor");
    sc->add_option("--s", so.s);
    sc->add_option("--r1", so.r1);
    sc->add_option("--r2", so.r2);
    sc->add_option("--a1", so.a1);
    sc->add_option("--a2", so.a2);
    sc->add_option("--n", so.n);
    sc->add_option("--N", so.N, "smoothed variant length");
    sc->add_option("--x0", so.xN);
    leaf(sc, [&] {
        if (so.s > 0) {
            std::optional<SmoothCutoff> cut;
            if (sc->count("--N")) cut = make_cutoff(so.xN, so.N);
            print(bound_json(composite_correlation({static_cast<u64>(so.s), static_cast<u64>(so.r1), static_cast<u64>(so.r2),
                                                    so.a1, so.a2, so.n},
                                                   cut)));
        } else {
            if (so.m < 1 || so.p < 2) throw UsageError("need --m >= 1 and a prime --p");
            print(bound_json(kl_correlation(static_cast<unsigned>(so.m), so.a, so.b, static_cast<u64>(so.p), !so.first)));
        }
        return Outcome{};
    });
    auto* st = sum->add_subcommand("twovar", "two-variable sum against both bounds");
    st->add_option("--m", so.m)->required();
    for (auto [name, ref] : {std::pair{"--alpha", &so.alpha}, {"--beta", &so.beta}, {"--gamma1", &so.gamma1},
                             {"--gamma2", &so.gamma2}, {"--l", &so.l}, {"--q0", &so.q0}, {"--d0", &so.d0}, {"--n0", &so.n0}})
        st->add_option(name, *ref);
    st->add_option("--D", so.D)->required();
    st->add_option("--N", so.N)->required();
    st->add_option("--xD", so.xD);
    st->add_option("--xN", so.xN);
    st->add_option("--y", so.y);
    leaf(st, [&] {
        TwoVarSumSpec S;
        S.m = static_cast<u64>(so.m);
        S.alpha = so.alpha;
        S.beta = so.beta;
        S.gamma1 = so.gamma1;
        S.gamma2 = so.gamma2;
        S.l = so.l;
        S.q0 = static_cast<u64>(so.q0);
        S.d0 = so.d0;
        S.n0 = so.n0;
        S.cutoffD = make_cutoff(so.xD, so.D);
        S.cutoffN = make_cutoff(so.xN, so.N);
        S.y = so.y;
        const TwoVarReport r = two_var_sum(S);
        json j = cplx_json(r.actual);
        j["lode1"] = bound_json(r.lode1);
        j["lode2"] = bound_json(r.lode2);
        print(j);
        return Outcome{};
    });

    // audit
    struct {
        std::string family, grid;
    } ao;
    auto* au = app.add_subcommand("audit", "sweep a bound-audit family over a grid file");
    au->add_option("--family", ao.family, "weil | dork | kls | corr2 | lode | vdc | inctraceQ")->required();
    au->add_option("--grid", ao.grid, "grid file")->required();
    leaf(au, [&] {
        const Grid g = load_grid(ao.grid);
        ExperimentReport rep = run_bound_audit(ao.family, g);
        if (outPath.empty()) std::cout << to_csv(rep);
        for (const auto& e : rep.summary["errors"]) std::cerr << "skipped " << e.get<std::string>() << "\n";
        return Outcome{rep, rep.assertionFailures};
    });

    // complete / vdc
    struct {
        std::string f;
        i64 q = 1, r = 1, s = 1, depth = 1, maxK = 16;
        double n = 0, x0 = 0;
    } co;
    auto* cp = app.add_subcommand("complete", "completion of an incomplete sum");
    cp->add_option("--f", co.f, "function spec, e.g. \"rationalPhase P=1,0,1 Q=0,1\"")->required();
    cp->add_option("--q", co.q)->required();
    cp->add_option("--n", co.n, "cutoff length N")->required();
    cp->add_option("--x0", co.x0);
    leaf(cp, [&] {
        const auto q = modulus(co.q);
        const CompletionReport r = completion_estimate(make_function(parse_fspec(co.f), q), make_cutoff(co.x0, co.n));
        print({{"incomplete", cplx_json(r.incomplete)},
               {"mainTerm", cplx_json(r.mainTerm)},
               {"error", cplx_json(r.exactError)},
               {"plancherelRhs", cplx_json(r.plancherelRhs)},
               {"plancherelResidual", r.plancherelResidual},
               {"boundPolyaVinogradov", r.boundPolyaVinogradov},
               {"boundTruncated", r.boundTruncated}});
        return Outcome{std::nullopt, r.plancherelResidual > 1e-9 * static_cast<double>(q.value())};
    });
    auto* vd = app.add_subcommand("vdc", "q-van der Corput audit for q = r s");
    vd->add_option("--f", co.f)->required();
    vd->add_option("--r", co.r)->required();
    vd->add_option("--s", co.s)->required();
    vd->add_option("--n", co.n, "cutoff length N (default sqrt(q) r^{1/2})");
    vd->add_option("--x0", co.x0);
    vd->add_option("--depth", co.depth, "1 or 2");
    vd->add_option("--max-k", co.maxK, "diagnostic A(k,l) range cap");
    leaf(vd, [&] {
        if (co.r < 1 || co.s < 1) throw UsageError("r, s must be positive");
        const auto q = modulus(checked::mul(co.r, co.s));
        const double N = co.n > 0 ? co.n
                                  : std::min(static_cast<double>(q.value()),
                                             std::floor(std::sqrt(static_cast<double>(q.value()) * static_cast<double>(co.r))));
        const VdcReport v = vdc_estimate(make_function(parse_fspec(co.f), q), make_cutoff(co.x0, N), static_cast<u64>(co.r),
                                         static_cast<u64>(co.s), static_cast<int>(co.depth), static_cast<u64>(co.maxK));
        json j = bound_json(v.report);
        j["N"] = N;
        j["factors"] = v.factors;
        j["K"] = v.K;
        j["diagonal"] = v.diagonal;
        j["offDiagonal"] = v.offDiagonal;
        print(j);
        return Outcome{};
    });

    // decomp
    auto* dc = app.add_subcommand("decomp", "combinatorial decompositions")->require_subcommand(1);
    struct {
        i64 K = 1, n = 0, q = 1, a = 1;
        double x = 1000;
        std::string t, sigma, alpha = "vonMangoldt";
        bool extended = false;
    } dco;
    auto* hb = dc->add_subcommand("hb", "Heath-Brown identity on [x, 2x]");
    hb->add_option("--K", dco.K)->required();
    hb->add_option("--x", dco.x)->required();
    hb->add_option("--n", dco.n, "report the terms at one n");
    leaf(hb, [&] {
        if (dco.K < 1) throw UsageError("K must be >= 1");
        if (dco.n > 0) {
            const auto t = heath_brown_terms(static_cast<unsigned>(dco.K), dco.x, static_cast<u64>(dco.n));
            print({{"n", dco.n}, {"terms", t.terms}, {"lambda", t.lambda}, {"residual", t.residual}});
            return Outcome{std::nullopt, t.residual >= 1e-6};
        }
        const u64 lo = static_cast<u64>(std::ceil(dco.x)), hi = static_cast<u64>(std::floor(2 * dco.x));
        const auto tab = heath_brown_table(static_cast<unsigned>(dco.K), dco.x, lo, hi);
        const double r = tab.max_residual();
        print({{"K", dco.K}, {"x", dco.x}, {"truncation", tab.truncation}, {"maxResidual", r}});
        return Outcome{std::nullopt, r >= 1e-6};
    });
    auto* va = dc->add_subcommand("vaughan", "Vaughan identity for 2 <= n <= x with U = V = n^{1/3}");
    va->add_option("--x", dco.x)->required();
    leaf(va, [&] {
        double worst = 0.0;
        for (u64 n = 2; static_cast<double>(n) <= dco.x; ++n) {
            const double U = std::cbrt(static_cast<double>(n));
            worst = std::max(worst, vaughan_terms(U, U, n).residual);
        }
        print({{"x", dco.x}, {"maxResidual", worst}});
        return Outcome{std::nullopt, worst >= 1e-6};
    });
    auto* cl = dc->add_subcommand("classify", "Type 0 / I/II / III classification of a tuple");
    cl->add_option("--t", dco.t, "comma-separated t_i summing to 1 (fractions allowed)")->required();
    cl->add_option("--sigma", dco.sigma)->required();
    cl->add_flag("--extended", dco.extended, "also try Types IV and V");
    leaf(cl, [&] {
        const auto t = parse_tuple(dco.t);
        const Rational s = parse_rational(dco.sigma);
        const TypeClassification c = dco.extended ? classify_extended(t, s) : classify(t, s);
        json j{{"type", type_name(c.kind)}, {"indices", c.indices}, {"S", c.S}, {"T", c.T}};
        if (dco.extended) j["typeIVandVCoexist"] = c.typeIVandVCoexist;
        print(j);
        return Outcome{};
    });
    auto* di = dc->add_subcommand("discrepancy", "Delta(alpha 1_[x,2x]; a (q))");
    di->add_option("--alpha", dco.alpha, "vonMangoldt | mobius | one");
    di->add_option("--x", dco.x);
    di->add_option("--q", dco.q)->required();
    di->add_option("--a", dco.a)->required();
    leaf(di, [&] {
        const u64 lo = static_cast<u64>(std::ceil(dco.x)), hi = static_cast<u64>(std::floor(2 * dco.x));
        std::function<double(u64)> fn;
        if (dco.alpha == "vonMangoldt") fn = [](u64 n) { return n == 1 ? 0.0 : von_mangoldt(factor(n)); };
        else if (dco.alpha == "mobius") fn = [](u64 n) { return static_cast<double>(factor(n).mobius()); };
        else if (dco.alpha == "one") fn = [](u64) { return 1.0; };
        else throw UsageError("unknown alpha family: " + dco.alpha);
        const auto seq = CoefficientSeq::from_function(lo, hi, [&](u64 n) { return cplx{fn(n), 0.0}; });
        print({{"alpha", dco.alpha}, {"q", dco.q}, {"a", dco.a}, {"delta", cplx_json(discrepancy(seq, dco.a, modulus(dco.q)))}});
        return Outcome{};
    });

    // exponents
    auto* ex = app.add_subcommand("exponents", "exact exponent regions")->require_subcommand(1);
    struct {
        std::string claims = "newtypeFull", policy = "zero", varpi, delta;
        unsigned i = 4;
    } eo;
    auto* er = ex->add_subcommand("region", "MPZ region after eliminating sigma");
    er->add_option("--claims", eo.claims, "newtypeFull | newtypeElementary | zhangOriginal | FILE")->required();
    er->add_option("--i", eo.i)->required();
    leaf(er, [&] {
        const ExponentRegion reg = mpz_region(resolve_claims(eo.claims), eo.i);
        if (reg.empty()) std::cout << "empty\n";
        for (const auto& cell : reg.cells) {
            std::string line;
            for (const auto& k : cell) line += (line.empty() ? "" : ", ") + k.str();
            std::cout << line << "\n";
        }
        return Outcome{};
    });
    auto* em = ex->add_subcommand("max", "supremum of 2 varpi");
    em->add_option("--claims", eo.claims)->required();
    em->add_option("--i", eo.i)->required();
    em->add_option("--delta-policy", eo.policy, "zero | ray:C (delta = C varpi)");
    leaf(em, [&] {
        DeltaPolicy pol;
        if (eo.policy.rfind("ray:", 0) == 0) {
            pol.kind = DeltaPolicy::Kind::ray;
            pol.c = parse_rational(eo.policy.substr(4));
        } else if (eo.policy != "zero") {
            throw UsageError("delta policy must be zero or ray:C");
        }
        std::cout << sup_str(max_distribution_exponent(resolve_claims(eo.claims), eo.i, pol)) << "\n";
        return Outcome{};
    });
    auto* ec = ex->add_subcommand("check", "feasibility at a point");
    ec->add_option("--varpi", eo.varpi)->required();
    ec->add_option("--delta", eo.delta)->required();
    ec->add_option("--claims", eo.claims);
    ec->add_option("--i", eo.i);
    leaf(ec, [&] {
        const ClaimSet cs = resolve_claims(eo.claims);
        const Rational w = parse_rational(eo.varpi), d = parse_rational(eo.delta);
        const auto iv = sigma_interval(cs, eo.i, w, d);
        const bool inRegion = mpz_region(cs, eo.i).contains(w, d);
        json ivs = json::array();
        for (const auto& s : iv)
            ivs.push_back({{"lo", eqdist::detail::rational_str(s.lo)}, {"hi", eqdist::detail::rational_str(s.hi)},
                           {"loOpen", s.loOpen}, {"hiOpen", s.hiOpen}});
        print({{"claims", cs.name}, {"i", eo.i}, {"varpi", w.str()}, {"delta", d.str()}, {"feasible", inRegion},
               {"sigma", ivs}});
        return Outcome{};
    });

    // mpz
    struct {
        double x = 1e4;
        std::string varpi = "0", delta = "1/10", mode = "denselyDivisible", interval;
        unsigned i = 1;
        i64 a = 1;
        std::vector<double> A{1.0, 2.0};
        bool exceptional = false;
    } mo;
    auto* mp = app.add_subcommand("mpz", "discrepancy of Lambda over densely divisible moduli");
    mp->add_option("--x", mo.x);
    mp->add_option("--varpi", mo.varpi);
    mp->add_option("--delta", mo.delta);
    mp->add_option("--i", mo.i);
    mp->add_option("--a", mo.a);
    mp->add_option("--mode", mo.mode);
    mp->add_option("--A", mo.A, "normalization exponents")->delimiter(',');
    mp->add_option("--interval", mo.interval, "prime interval LO:HI");
    mp->add_flag("--exclude-exceptional", mo.exceptional);
    leaf(mp, [&] {
        MpzExperimentConfig c;
        c.x = mo.x;
        c.varpi = parse_rational(mo.varpi);
        c.delta = parse_rational(mo.delta);
        c.i = mo.i;
        c.a = mo.a;
        c.mode = parse_mode(mo.mode);
        c.Alist = mo.A;
        if (!mo.interval.empty()) std::tie(c.intervalLo, c.intervalHi) = parse_interval(mo.interval);
        c.excludeExceptional = mo.exceptional;
        ExperimentReport rep = run_mpz(c);
        print(rep.summary);
        return Outcome{rep, 0};
    });

    // satotate
    struct {
        i64 p = 0, r = 0, s = 0, limit = 0;
        double limitExp = 0;
    } sto;
    auto* sa = app.add_subcommand("satotate", "Kloosterman angle equidistribution");
    sa->add_option("--p", sto.p, "prime modulus");
    sa->add_option("--r", sto.r, "first prime of q = r s");
    sa->add_option("--s", sto.s, "second prime of q = r s");
    sa->add_option("--limit", sto.limit, "use 1 <= n <= limit");
    sa->add_option("--limit-exp", sto.limitExp, "use limit = ceil(q^E)");
    leaf(sa, [&] {
        u64 q = 0;
        if (sto.p > 0) q = static_cast<u64>(sto.p);
        else if (sto.r > 0 && sto.s > 0) q = checked::mul(static_cast<u64>(sto.r), static_cast<u64>(sto.s));
        else throw UsageError("give --p or both --r and --s");
        u64 limit = sto.limit > 0 ? static_cast<u64>(sto.limit) : q - 1;
        if (sto.limitExp > 0) limit = static_cast<u64>(std::ceil(std::pow(static_cast<double>(q), sto.limitExp)));
        ExperimentReport rep = run_satotate(factor(q), limit);
        print(rep.summary);
        return Outcome{rep, rep.assertionFailures};
    });

    if (argc <= 1) {
        std::cerr << app.help();
        return 2;
    }
    try {
        app.parse(argc, argv);
        if (!configPath.empty()) {
            const auto cfg = load_config(configPath);
            CLI::App* cur = &app;
            while (!cur->get_subcommands().empty()) cur = cur->get_subcommands().front();
            apply_config(cur, cfg);
        }
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (!action) {
        std::cerr << app.help();
        return 2;
    }
    try {
        Outcome o = action();
        if (!outPath.empty()) {
            if (!o.report) throw UsageError("--out is not supported for this command");
            write_report(*o.report, outPath);
        }
        if (o.failures > 0) {
            std::cerr << "assertion failures: " << o.failures << "\n";
            return 1;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
