#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eqdist/completion.hpp"
#include "eqdist/expsums.hpp"
#include "eqdist/harness/fspec.hpp"
#include "eqdist/harness/parallel.hpp"
#include "eqdist/harness/report.hpp"

namespace eqdist::harness {

/// Ordered key=value pairs of one expanded grid row.
using GridRow = std::vector<std::pair<std::string, std::string>>;

struct Grid {
    std::vector<GridRow> rows;
    std::vector<std::string> errors;
};

namespace detail {

inline std::vector<std::string> expand_value(const std::string& v) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ',')) {
        bool primesOnly = false;
        std::string body = item;
        if (body.rfind("primes:", 0) == 0) {
            primesOnly = true;
            body = body.substr(7);
        }
        const auto dots = body.find("..");
        if (dots == std::string::npos) {
            if (primesOnly) throw std::invalid_argument("primes: needs a range lo..hi");
            out.push_back(item);
            continue;
        }
        std::size_t u1 = 0, u2 = 0;
        const std::string a = body.substr(0, dots), b = body.substr(dots + 2);
        const long long lo = std::stoll(a, &u1), hi = std::stoll(b, &u2);
        if (u1 != a.size() || u2 != b.size() || lo > hi) throw std::invalid_argument("bad range '" + item + "'");
        if (hi - lo > 1000000) throw std::invalid_argument("range too long '" + item + "'");
        for (long long k = lo; k <= hi; ++k)
            if (!primesOnly || (k > 1 && is_prime(static_cast<u64>(k)))) out.push_back(std::to_string(k));
    }
    return out;
}

}  // namespace detail

/// Grid text: one row per line as whitespace-separated key=value tokens. A value may be a
/// comma list, an integer range lo..hi, or primes:lo..hi; lists expand as a Cartesian product.
inline Grid parse_grid(const std::string& text) {
    Grid g;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::vector<std::pair<std::string, std::vector<std::string>>> fields;
        std::string tok;
        bool bad = false;
        try {
            while (ls >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos || eq == 0 || eq + 1 == tok.size()) {
                    g.errors.push_back("line " + std::to_string(n) + ": malformed token '" + tok + "'");
                    bad = true;
                    break;
                }
                fields.push_back({tok.substr(0, eq), detail::expand_value(tok.substr(eq + 1))});
            }
        } catch (const std::exception& e) {
            g.errors.push_back("line " + std::to_string(n) + ": " + e.what());
            bad = true;
        }
        if (bad || fields.empty()) continue;
        std::vector<GridRow> acc{GridRow{}};
        for (const auto& [k, vals] : fields) {
            std::vector<GridRow> next;
            for (const auto& r : acc)
                for (const auto& v : vals) {
                    GridRow nr = r;
                    nr.emplace_back(k, v);
                    next.push_back(std::move(nr));
                }
            acc = std::move(next);
        }
        for (auto& r : acc) g.rows.push_back(std::move(r));
    }
    return g;
}

inline Grid load_grid(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open grid " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_grid(ss.str());
}

struct AuditResult {
    BoundReport report;
    bool invariantOk = true;  // explicit-constant bounds only
    std::string note;
};

inline const std::vector<std::string>& audit_families() {
    static const std::vector<std::string> f{"weil", "dork", "kls", "corr2", "lode", "vdc", "inctraceQ"};
    return f;
}

inline AuditResult audit_row(const std::string& family, const Params& p) {
    AuditResult out;
    if (family == "weil") {
        const FactoredModulus q = factor(static_cast<u64>(param_int(p, "q")));
        const bool inverse = !p.count("P");
        const i64 b = inverse ? param_int(p, "b") : 0;
        const RationalPhase f = inverse ? RationalPhase({b}, {0, 1}) : RationalPhase(parse_poly(param(p, "P")), parse_poly(param(p, "Q", "1")));
        out.report = complete_phase_sum(f, q, param_real(p, "C", 10.0));
        if (inverse) {
            // c_q(b) sums over units only; the complete sum differs at primes dividing b
            const u64 qv = q.value();
            cplx units{0.0, 0.0};
            for (u64 n = 1; n < qv || (qv == 1 && n == 1); ++n)
                if (gcd(n, qv) == 1) units += eq_int(static_cast<i64>(mulmod(mod(b, qv), mod_inverse(static_cast<i64>(n), qv), qv)), qv);
            const cplx c = ramanujan(b, q);
            const double err = std::abs(units - c);
            const double g = static_cast<double>(gcd_signed(b, q.value()));
            out.invariantOk = err < 1e-9 * static_cast<double>(q.value()) && std::abs(c) <= g + 1e-9;
            out.note = "ramanujan=" + fmt(c.real()) + " err=" + fmt(err);
        }
    } else if (family == "dork") {
        out.report = dork_sum(static_cast<u64>(param_int(p, "d1")), static_cast<u64>(param_int(p, "d2")),
                              param_int(p, "c1"), param_int(p, "c2"), param_int(p, "l1", 0), param_int(p, "l2", 0));
    } else if (family == "kls") {
        const u64 prime = static_cast<u64>(param_int(p, "p"));
        const unsigned m = static_cast<unsigned>(param_int(p, "m", 3));
        if (!is_prime(prime)) throw std::invalid_argument("kls: p must be prime");
        const double ratio = kl_correlation_max_ratio(m, prime);
        const double sq = std::sqrt(static_cast<double>(prime));
        out.report = BoundReport::make(ratio * sq, sq, "kls-max");
        double worst = 0.0;
        for (const auto& v : thread_hk_cache().get(m, prime).values) worst = std::max(worst, std::abs(v));
        out.invariantOk = worst <= m + 1e-9;
        out.note = "max|Kl|=" + fmt(worst);
    } else if (family == "corr2") {
        CorrelationSpec c{static_cast<u64>(param_int(p, "s")), static_cast<u64>(param_int(p, "r1", 1)),
                          static_cast<u64>(param_int(p, "r2", 1)), param_int(p, "a1", 1), param_int(p, "a2", 1),
                          param_int(p, "n", 0)};
        std::optional<SmoothCutoff> cut;
        if (p.count("N")) cut = make_cutoff(param_real(p, "x0", 0.0), param_real(p, "N"));
        out.report = composite_correlation(c, cut);
    } else if (family == "lode") {
        TwoVarSumSpec S;
        S.m = static_cast<u64>(param_int(p, "m"));
        S.alpha = param_int(p, "alpha", 1);
        S.beta = param_int(p, "beta", 0);
        S.gamma1 = param_int(p, "gamma1", 0);
        S.gamma2 = param_int(p, "gamma2", 1);
        S.l = param_int(p, "l", 1);
        S.q0 = static_cast<u64>(param_int(p, "q0", 1));
        S.d0 = param_int(p, "d0", 0);
        S.n0 = param_int(p, "n0", 0);
        S.cutoffD = make_cutoff(param_real(p, "xD", 0.0), param_real(p, "D"));
        S.cutoffN = make_cutoff(param_real(p, "xN", 0.0), param_real(p, "N"));
        S.y = param_real(p, "y", 1.0);
        const TwoVarReport r = two_var_sum(S);
        const double pre = param_real(p, "prefactor", 50.0);
        out.report = BoundReport::make(r.actual, pre * r.lode2.bound, "lode-2");
        out.note = "lode1_ratio=" + fmt(r.actual == cplx{} ? 0.0 : std::abs(r.actual) / (pre * r.lode1.bound));
    } else if (family == "vdc") {
        const u64 r = static_cast<u64>(param_int(p, "r")), s = static_cast<u64>(param_int(p, "s"));
        const FactoredModulus q = factor(checked::mul(r, s));
        const PeriodicFunction f = make_function(p, q);
        const SmoothCutoff psi = make_cutoff(param_real(p, "x0", 0.0), param_real(p, "N"));
        const VdcReport v = vdc_estimate(f, psi, r, s, static_cast<int>(param_int(p, "depth", 1)),
                                         static_cast<u64>(param_int(p, "maxK", 16)));
        out.report = v.report;
        out.note = "diag=" + fmt(v.diagonal) + " offdiag=" + fmt(v.offDiagonal);
    } else if (family == "inctraceQ") {
        const FactoredModulus q = factor(static_cast<u64>(param_int(p, "q")));
        Params fp = p;
        fp["kind"] = "kfTable";
        fp["norm"] = param(p, "norm", "plus");
        const PeriodicFunction f = make_function(fp, q);
        const SmoothCutoff psi = make_cutoff(param_real(p, "x0", 0.0), param_real(p, "N"));
        const cplx actual = incomplete_sum(f, psi);
        const double qd = static_cast<double>(q.value()), N = psi.N();
        double bound = std::sqrt(qd) * (1.0 + N / qd);
        std::string formula = "inctrace-0";
        if (p.count("r") && N <= qd) {
            const u64 r = static_cast<u64>(param_int(p, "r"));
            if (r == 0 || q.value() % r != 0) throw std::invalid_argument("inctraceQ: r must divide q");
            const double s = qd / static_cast<double>(r);
            const double b1 = std::sqrt(N) * (std::sqrt(static_cast<double>(r)) + std::pow(s, 0.25));
            if (b1 < bound) {
                bound = b1;
                formula = "inctrace-1";
            }
        }
        out.report = BoundReport::make(actual, bound, formula);
    } else {
        throw std::invalid_argument("unknown audit family: " + family);
    }
    return out;
}

inline ExperimentReport run_bound_audit(const std::string& family, const Grid& grid) {
    bool known = false;
    for (const auto& f : audit_families()) known = known || f == family;
    if (!known) throw std::invalid_argument("unknown audit family: " + family);

    std::vector<std::string> keys;
    for (const auto& row : grid.rows)
        for (const auto& kv : row)
            if (std::find(keys.begin(), keys.end(), kv.first) == keys.end()) keys.push_back(kv.first);

    struct Outcome {
        bool ok = false;
        AuditResult res;
        std::string error;
    };
    const auto outcomes = parallel_map(grid.rows.size(), [&](std::size_t k) {
        Outcome o;
        Params p;
        for (const auto& kv : grid.rows[k]) p[kv.first] = kv.second;
        try {
            o.res = audit_row(family, p);
            o.ok = true;
        } catch (const std::exception& e) {
            o.error = e.what();
        }
        return o;
    });

    ExperimentReport rep;
    rep.columns = keys;
    for (const char* c : {"actual_re", "actual_im", "abs", "bound", "ratio", "formula", "note"}) rep.columns.push_back(c);
    json errors = json::array();
    for (const auto& e : grid.errors) errors.push_back(e);
    double maxRatio = 0.0;
    std::size_t evaluated = 0;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        const Outcome& o = outcomes[k];
        if (!o.ok) {
            errors.push_back("row " + std::to_string(k + 1) + ": " + o.error);
            continue;
        }
        std::vector<std::string> row;
        for (const auto& key : keys) {
            std::string v;
            for (const auto& kv : grid.rows[k])
                if (kv.first == key) v = kv.second;
            row.push_back(v);
        }
        const BoundReport& b = o.res.report;
        for (const std::string& v : {fmt(b.actual.real()), fmt(b.actual.imag()), fmt(b.actualAbs), fmt(b.bound),
                                     fmt(b.ratio), b.boundFormula, o.res.note})
            row.push_back(v);
        rep.add_row(std::move(row));
        ++evaluated;
        maxRatio = std::max(maxRatio, b.ratio);
        if (!o.res.invariantOk) ++rep.assertionFailures;
    }
    rep.meta = {{"experiment", "audit"}, {"family", family}, {"gridRows", grid.rows.size()}};
    rep.summary["evaluated"] = evaluated;
    rep.summary["maxRatio"] = maxRatio;
    rep.summary["errors"] = errors;
    return rep;
}

}  // namespace eqdist::harness
