#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "eqdist/arith/poly.hpp"
#include "eqdist/expsums.hpp"
#include "eqdist/fourier.hpp"

namespace eqdist::harness {

using Params = std::map<std::string, std::string>;

inline std::string param(const Params& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw std::invalid_argument("missing parameter '" + key + "'");
    return it->second;
}

inline std::string param(const Params& p, const std::string& key, const std::string& dflt) {
    auto it = p.find(key);
    return it == p.end() ? dflt : it->second;
}

inline i64 param_int(const Params& p, const std::string& key) {
    const std::string v = param(p, key);
    std::size_t used = 0;
    const long long r = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument("parameter '" + key + "' is not an integer: " + v);
    return r;
}

inline i64 param_int(const Params& p, const std::string& key, i64 dflt) {
    return p.count(key) ? param_int(p, key) : dflt;
}

inline double param_real(const Params& p, const std::string& key) {
    const std::string v = param(p, key);
    std::size_t used = 0;
    const double r = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("parameter '" + key + "' is not a number: " + v);
    return r;
}

inline double param_real(const Params& p, const std::string& key, double dflt) {
    return p.count(key) ? param_real(p, key) : dflt;
}

/// Coefficients low to high, separated by ',' or ';'.
inline IntPoly parse_poly(const std::string& s) {
    IntPoly out;
    std::string tok;
    std::istringstream is(s);
    while (std::getline(is, tok, s.find(';') != std::string::npos ? ';' : ',')) {
        if (tok.empty()) throw std::invalid_argument("empty polynomial coefficient in '" + s + "'");
        std::size_t used = 0;
        out.push_back(std::stoll(tok, &used));
        if (used != tok.size()) throw std::invalid_argument("bad polynomial coefficient '" + tok + "'");
    }
    return out;
}

/// "family key=value ..." into a parameter map with "kind" set to the family.
inline Params parse_fspec(const std::string& spec) {
    std::istringstream is(spec);
    Params p;
    std::string tok;
    if (!(is >> tok)) throw std::invalid_argument("empty function spec");
    p["kind"] = tok;
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0) throw std::invalid_argument("function spec token '" + tok + "' is not key=value");
        p[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return p;
}

/// Builds f: Z/qZ -> C for the named families rationalPhase (P, Q), klTable (m, a) and kfTable (a..e, norm).
inline PeriodicFunction make_function(const Params& p, const FactoredModulus& q) {
    const std::string kind = param(p, "kind");
    std::vector<cplx> v(q.value());
    if (kind == "rationalPhase") {
        const RationalPhase f(parse_poly(param(p, "P")), parse_poly(param(p, "Q", "1")));
        const ReducedPhase rp(f, q);
        for (u64 n = 0; n < q.value(); ++n) v[n] = rp.eval(static_cast<i64>(n));
    } else if (kind == "klTable") {
        const unsigned m = static_cast<unsigned>(param_int(p, "m", 3));
        const i64 a = param_int(p, "a", 1);
        for (u64 n = 0; n < q.value(); ++n) v[n] = hyper_kloosterman(m, checked::mul(a, static_cast<i64>(n)), q);
    } else if (kind == "kfTable") {
        const KfParams k{param_int(p, "a"), param_int(p, "b", 0), param_int(p, "c"), param_int(p, "d", 0),
                         param_int(p, "e", 1)};
        const std::string norm = param(p, "norm", "minus");
        if (norm != "minus" && norm != "plus") throw std::invalid_argument("norm must be minus or plus");
        const auto nm = norm == "minus" ? KfNormalization::minus : KfNormalization::plus;
        for (u64 n = 0; n < q.value(); ++n) v[n] = kf_sum(k, static_cast<i64>(n), q, nm);
    } else {
        throw std::invalid_argument("unknown function family: " + kind);
    }
    return PeriodicFunction(q, std::move(v));
}

}  // namespace eqdist::harness
