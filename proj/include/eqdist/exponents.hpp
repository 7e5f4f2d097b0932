#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "eqdist/decomp.hpp"

namespace eqdist {

enum class Rel { Less, LessEq, Greater, GreaterEq };

/// cw w + cd d + cs s REL rhs, with w = varpi, d = delta, s = sigma.
struct LinearConstraint {
    Rational cw = 0, cd = 0, cs = 0;
    Rel rel = Rel::Less;
    Rational rhs = 0;

    bool holds(const Rational& w, const Rational& d, const Rational& s) const {
        const Rational lhs = cw * w + cd * d + cs * s;
        switch (rel) {
            case Rel::Less: return lhs < rhs;
            case Rel::LessEq: return lhs <= rhs;
            case Rel::Greater: return lhs > rhs;
            case Rel::GreaterEq: return lhs >= rhs;
        }
        return false;
    }

    std::string str() const;
    friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
};

enum class ClaimType { I, II, III };

struct Claim {
    ClaimType type;
    unsigned multiplicity;
    bool deligne = false;
    std::vector<LinearConstraint> constraints;
};

struct ClaimSet {
    std::string name;
    std::vector<LinearConstraint> domain;      // conditions on (w, d) alone
    std::vector<LinearConstraint> structural;  // side conditions involving s
    std::optional<Rational> omitIIIAbove;      // Type III not needed when s > this
    std::vector<Claim> claims;
};

/// Open cell: conjunction of constraints in (w, d).
using Cell = std::vector<LinearConstraint>;

struct ExponentRegion {
    std::vector<Cell> cells;  // union of cells; empty means empty region

    bool empty() const { return cells.empty(); }
    bool contains(const Rational& w, const Rational& d) const {
        for (const auto& c : cells)
            if (std::all_of(c.begin(), c.end(), [&](const LinearConstraint& k) { return k.holds(w, d, 0); })) return true;
        return false;
    }
};

namespace detail {

/// a . (w, d, s) < b  (or <= b when !strict)
struct Ineq {
    std::array<Rational, 3> a{};
    Rational b = 0;
    bool strict = true;
};

inline Ineq to_ineq(const LinearConstraint& c) {
    Ineq q;
    const bool flip = c.rel == Rel::Greater || c.rel == Rel::GreaterEq;
    const int sg = flip ? -1 : 1;
    q.a = {c.cw * sg, c.cd * sg, c.cs * sg};
    q.b = c.rhs * sg;
    q.strict = c.rel == Rel::Less || c.rel == Rel::Greater;
    return q;
}

/// Scales to coprime integer coefficients (positive factor), so identical half-spaces compare equal.
inline Ineq normalize(Ineq q) {
    using boost::multiprecision::cpp_int;
    cpp_int l = 1;
    for (const auto& x : q.a) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(x));
    l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(q.b));
    cpp_int g = 0;
    for (auto& x : q.a) {
        x *= l;
        g = boost::multiprecision::gcd(g, boost::multiprecision::numerator(x));
    }
    q.b *= l;
    g = boost::multiprecision::gcd(g, boost::multiprecision::numerator(q.b));
    if (g != 0) {
        for (auto& x : q.a) x /= Rational(g);
        q.b /= Rational(g);
    }
    return q;
}

inline LinearConstraint to_constraint(const Ineq& raw) {
    const Ineq q = normalize(raw);
    int neg = 0, pos = 0;
    for (const auto& x : q.a) (x < 0 ? neg : (x > 0 ? pos : neg)) += (x == 0 ? 0 : 1);
    LinearConstraint c;
    if (neg > pos) {
        c.cw = -q.a[0];
        c.cd = -q.a[1];
        c.cs = -q.a[2];
        c.rhs = -q.b;
        c.rel = q.strict ? Rel::Greater : Rel::GreaterEq;
    } else {
        c.cw = q.a[0];
        c.cd = q.a[1];
        c.cs = q.a[2];
        c.rhs = q.b;
        c.rel = q.strict ? Rel::Less : Rel::LessEq;
    }
    return c;
}

inline bool trivially_true(const Ineq& q) {
    return q.a[0] == 0 && q.a[1] == 0 && q.a[2] == 0 && (q.strict ? q.b > 0 : q.b >= 0);
}
inline bool trivially_false(const Ineq& q) {
    return q.a[0] == 0 && q.a[1] == 0 && q.a[2] == 0 && !(q.strict ? q.b > 0 : q.b >= 0);
}

/// Fourier-Motzkin elimination of variable v, preserving strictness.
inline std::vector<Ineq> eliminate(const std::vector<Ineq>& sys, int v) {
    std::vector<Ineq> pos, neg, out;
    for (const auto& q : sys) {
        if (q.a[v] > 0) pos.push_back(q);
        else if (q.a[v] < 0) neg.push_back(q);
        else out.push_back(q);
    }
    for (const auto& p : pos) {
        for (const auto& n : neg) {
            // p/p_v + n/|n_v|
            const Rational sp = 1 / p.a[v], sn = -1 / n.a[v];
            Ineq c;
            for (int k = 0; k < 3; ++k) c.a[k] = p.a[k] * sp + n.a[k] * sn;
            c.a[v] = 0;
            c.b = p.b * sp + n.b * sn;
            c.strict = p.strict || n.strict;
            out.push_back(normalize(c));
        }
    }
    // drop duplicates and tautologies
    std::vector<Ineq> dedup;
    for (const auto& q : out) {
        if (trivially_true(q)) continue;
        const Ineq nq = normalize(q);
        bool seen = false;
        for (const auto& e : dedup)
            if (e.a == nq.a && e.b == nq.b && e.strict == nq.strict) seen = true;
        if (!seen) dedup.push_back(nq);
    }
    return dedup;
}

inline bool feasible(std::vector<Ineq> sys) {
    for (int v = 2; v >= 0; --v) {
        sys = eliminate(sys, v);
        for (const auto& q : sys)
            if (trivially_false(q)) return false;
    }
    return std::none_of(sys.begin(), sys.end(), trivially_false);
}

inline Ineq negate(const Ineq& q) {
    // not (a x < b)  <=>  -a x <= -b
    Ineq n;
    for (int k = 0; k < 3; ++k) n.a[k] = -q.a[k];
    n.b = -q.b;
    n.strict = !q.strict;
    return n;
}

/// Removes constraints implied by the others.
inline std::vector<Ineq> prune(std::vector<Ineq> sys) {
    for (std::size_t i = 0; i < sys.size();) {
        std::vector<Ineq> rest;
        for (std::size_t j = 0; j < sys.size(); ++j)
            if (j != i) rest.push_back(sys[j]);
        rest.push_back(negate(sys[i]));
        if (!feasible(rest)) sys.erase(sys.begin() + static_cast<std::ptrdiff_t>(i));
        else ++i;
    }
    return sys;
}

inline std::vector<Ineq> to_system(const Cell& c) {
    std::vector<Ineq> s;
    for (const auto& k : c) s.push_back(to_ineq(k));
    return s;
}

/// outer contains inner (both as open/closed polyhedra)
inline bool contains(const Cell& outer, const Cell& inner) {
    const auto in = to_system(inner);
    for (const auto& k : outer) {
        auto sys = in;
        sys.push_back(negate(to_ineq(k)));
        if (feasible(sys)) return false;
    }
    return true;
}

inline std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(r);
    if (boost::multiprecision::denominator(r) != 1) os << "/" << boost::multiprecision::denominator(r);
    return os.str();
}

/// One choice of claims per type (nullptr for an omitted Type III).
struct Choice {
    const Claim* I;
    const Claim* II;
    const Claim* III;
};

inline std::vector<Choice> choices(const ClaimSet& cs, unsigned i) {
    std::vector<const Claim*> by[3];
    for (const auto& c : cs.claims)
        if (c.multiplicity <= i) by[static_cast<int>(c.type)].push_back(&c);
    std::vector<const Claim*> third = by[2];
    if (cs.omitIIIAbove) third.push_back(nullptr);
    std::vector<Choice> out;
    for (auto* a : by[0])
        for (auto* b : by[1])
            for (auto* c : third) out.push_back({a, b, c});
    return out;
}

inline std::vector<Ineq> choice_system(const ClaimSet& cs, const Choice& ch, bool withDomain) {
    std::vector<Ineq> sys;
    if (withDomain)
        for (const auto& k : cs.domain) sys.push_back(to_ineq(k));
    for (const auto& k : cs.structural) sys.push_back(to_ineq(k));
    for (const Claim* c : {ch.I, ch.II, ch.III})
        if (c)
            for (const auto& k : c->constraints) sys.push_back(to_ineq(k));
    if (!ch.III) sys.push_back(to_ineq({0, 0, 1, Rel::Greater, *cs.omitIIIAbove}));
    return sys;
}

}  // namespace detail

inline std::string LinearConstraint::str() const {
    std::string out;
    auto term = [&](const Rational& c, const char* v) {
        if (c == 0) return;
        Rational a = c;
        if (!out.empty()) out += a < 0 ? " - " : " + ";
        else if (a < 0) out += "-";
        if (a < 0) a = -a;
        if (a != 1) out += detail::rational_str(a) + "*";
        out += v;
    };
    term(cw, "w");
    term(cd, "d");
    term(cs, "s");
    if (out.empty()) out = "0";
    static const char* rels[] = {"<", "<=", ">", ">="};
    return out + " " + rels[static_cast<int>(rel)] + " " + detail::rational_str(rhs);
}

/// Open sigma interval (lo, hi) with strictness flags.
struct SigmaInterval {
    Rational lo, hi;
    bool loOpen = true, hiOpen = true;
};

/// The set of sigma satisfying the structural conditions and, for some choice of claims at
/// multiplicity <= i (Type III replaced by sigma > threshold when omitted), all their constraints.
/// Returned as disjoint sorted intervals.
inline std::vector<SigmaInterval> sigma_interval(const ClaimSet& cs, unsigned i, const Rational& w, const Rational& d) {
    std::vector<SigmaInterval> pieces;
    for (const auto& ch : detail::choices(cs, i)) {
        const auto sys = detail::choice_system(cs, ch, false);
        std::optional<Rational> lo, hi;
        bool loOpen = true, hiOpen = true, ok = true;
        for (const auto& q : sys) {
            const Rational rhs = q.b - q.a[0] * w - q.a[1] * d;
            if (q.a[2] == 0) {
                if (q.strict ? !(rhs > 0) : !(rhs >= 0)) ok = false;
                continue;
            }
            const Rational bound = rhs / q.a[2];
            if (q.a[2] > 0) {  // s < bound
                if (!hi || bound < *hi || (bound == *hi && q.strict)) {
                    hiOpen = (hi && bound == *hi) ? (hiOpen || q.strict) : q.strict;
                    hi = bound;
                }
            } else {  // s > bound
                if (!lo || bound > *lo || (bound == *lo && q.strict)) {
                    loOpen = (lo && bound == *lo) ? (loOpen || q.strict) : q.strict;
                    lo = bound;
                }
            }
        }
        if (!ok || !lo || !hi) continue;
        if (*lo > *hi || (*lo == *hi && (loOpen || hiOpen))) continue;
        pieces.push_back({*lo, *hi, loOpen, hiOpen});
    }
    std::sort(pieces.begin(), pieces.end(), [](const SigmaInterval& a, const SigmaInterval& b) {
        return a.lo < b.lo || (a.lo == b.lo && !a.loOpen && b.loOpen);
    });
    std::vector<SigmaInterval> merged;
    for (const auto& p : pieces) {
        if (!merged.empty()) {
            auto& m = merged.back();
            const bool touches = p.lo < m.hi || (p.lo == m.hi && !(p.loOpen && m.hiOpen));
            if (touches) {
                if (p.hi > m.hi || (p.hi == m.hi && !p.hiOpen)) {
                    m.hiOpen = p.hi == m.hi ? (m.hiOpen && p.hiOpen) : p.hiOpen;
                    m.hi = p.hi;
                }
                continue;
            }
        }
        merged.push_back(p);
    }
    return merged;
}

/// Eliminates sigma from every claim choice; the region is the union of the resulting
/// cells with empty cells, redundant constraints and cells inside other cells removed.
inline ExponentRegion mpz_region(const ClaimSet& cs, unsigned i) {
    std::vector<Cell> cells;
    for (const auto& ch : detail::choices(cs, i)) {
        auto sys = detail::choice_system(cs, ch, true);
        if (!detail::feasible(sys)) continue;
        auto elim = detail::prune(detail::eliminate(sys, 2));
        Cell c;
        for (const auto& q : elim) c.push_back(detail::to_constraint(q));
        cells.push_back(std::move(c));
    }
    std::vector<Cell> kept;
    for (std::size_t a = 0; a < cells.size(); ++a) {
        bool inside = false;
        for (std::size_t b = 0; b < cells.size() && !inside; ++b) {
            if (a == b || !detail::contains(cells[b], cells[a])) continue;
            // equal cells: keep the first copy
            inside = !detail::contains(cells[a], cells[b]) || b < a;
        }
        if (!inside) kept.push_back(cells[a]);
    }
    return {kept};
}

/// Whether two cells describe the same set.
inline bool same_cell(const Cell& a, const Cell& b) { return detail::contains(a, b) && detail::contains(b, a); }

struct ExponentSup {
    bool empty = true;
    Rational value = 0;  // supremum of 2 w
    bool open = true;    // not attained
};

struct DeltaPolicy {
    enum class Kind { zero, ray } kind = Kind::zero;
    Rational c = 0;  // ray: d = c w
};

/// sup of 2w over the region with d -> 0+ (zero) or on the ray d = c w.
inline ExponentSup max_distribution_exponent(const ClaimSet& cs, unsigned i, const DeltaPolicy& pol) {
    const ExponentRegion reg = mpz_region(cs, i);
    ExponentSup best;
    for (const auto& cell : reg.cells) {
        // reduce to constraints a w (<) b in the single variable w
        std::optional<Rational> lo, hi;
        bool hiOpen = true, ok = true;
        bool loOpen = true;
        for (const auto& k : cell) {
            detail::Ineq q = detail::to_ineq(k);
            if (pol.kind == DeltaPolicy::Kind::zero) q.strict = false;  // closure, then d = 0
            const Rational a = q.a[0] + (pol.kind == DeltaPolicy::Kind::ray ? q.a[1] * pol.c : Rational(0));
            if (a == 0) {
                if (q.strict ? !(q.b > 0) : !(q.b >= 0)) ok = false;
                continue;
            }
            const Rational bound = q.b / a;
            if (a > 0) {
                if (!hi || bound < *hi || (bound == *hi && q.strict)) {
                    hiOpen = (hi && bound == *hi) ? (hiOpen || q.strict) : q.strict;
                    hi = bound;
                }
            } else {
                if (!lo || bound > *lo || (bound == *lo && q.strict)) {
                    loOpen = (lo && bound == *lo) ? (loOpen || q.strict) : q.strict;
                    lo = bound;
                }
            }
        }
        if (!ok || !hi) continue;
        if (lo && (*lo > *hi || (*lo == *hi && (loOpen || hiOpen)))) continue;
        const Rational v = 2 * *hi;
        const bool open = pol.kind == DeltaPolicy::Kind::zero ? true : hiOpen;
        if (best.empty || v > best.value || (v == best.value && !open)) {
            best.value = v;
            best.open = open;
            best.empty = false;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Claims text format

class ClaimsParseError : public std::runtime_error {
public:
    ClaimsParseError(int line, const std::string& what)
        : std::runtime_error("claims line " + std::to_string(line) + ": " + what) {}
};

/// Parses "w 160/3 d 16 s 34/9 < 1" style constraint lines.
inline LinearConstraint parse_constraint(const std::string& text, int lineNo = 0) {
    std::istringstream is(text);
    std::vector<std::string> tok;
    for (std::string t; is >> t;) tok.push_back(t);
    LinearConstraint c;
    std::size_t k = 0;
    bool any = false;
    while (k + 1 < tok.size() && (tok[k] == "w" || tok[k] == "d" || tok[k] == "s")) {
        Rational v;
        try {
            v = parse_rational(tok[k + 1]);
        } catch (const std::exception& e) {
            throw ClaimsParseError(lineNo, e.what());
        }
        (tok[k] == "w" ? c.cw : tok[k] == "d" ? c.cd : c.cs) += v;
        k += 2;
        any = true;
    }
    if (!any || k + 2 != tok.size()) throw ClaimsParseError(lineNo, "expected '<var> <coef> ... REL rhs'");
    const std::string& r = tok[k];
    if (r == "<") c.rel = Rel::Less;
    else if (r == "<=") c.rel = Rel::LessEq;
    else if (r == ">") c.rel = Rel::Greater;
    else if (r == ">=") c.rel = Rel::GreaterEq;
    else throw ClaimsParseError(lineNo, "unknown relation '" + r + "'");
    try {
        c.rhs = parse_rational(tok[k + 1]);
    } catch (const std::exception& e) {
        throw ClaimsParseError(lineNo, e.what());
    }
    return c;
}

inline ClaimSet parse_claims(const std::string& text) {
    ClaimSet cs;
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    enum class Block { none, domain, structural, claim } block = Block::none;
    while (std::getline(in, line)) {
        ++lineNo;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "name") {
            ls >> cs.name;
        } else if (head == "domain") {
            block = Block::domain;
        } else if (head == "structural") {
            block = Block::structural;
        } else if (head == "omitIII") {
            std::string v;
            if (!(ls >> v)) throw ClaimsParseError(lineNo, "omitIII needs a threshold");
            cs.omitIIIAbove = parse_rational(v);
        } else if (head == "claim") {
            std::string type, flag;
            unsigned mult = 0;
            if (!(ls >> type >> mult) || mult == 0) throw ClaimsParseError(lineNo, "expected 'claim typeX <multiplicity>'");
            Claim c;
            if (type == "typeI") c.type = ClaimType::I;
            else if (type == "typeII") c.type = ClaimType::II;
            else if (type == "typeIII") c.type = ClaimType::III;
            else throw ClaimsParseError(lineNo, "unknown claim type '" + type + "'");
            c.multiplicity = mult;
            while (ls >> flag) {
                if (flag == "deligne") c.deligne = true;
                else throw ClaimsParseError(lineNo, "unknown claim flag '" + flag + "'");
            }
            cs.claims.push_back(std::move(c));
            block = Block::claim;
        } else {
            const LinearConstraint k = parse_constraint(line, lineNo);
            switch (block) {
                case Block::domain:
                    if (k.cs != 0) throw ClaimsParseError(lineNo, "domain constraints cannot involve s");
                    cs.domain.push_back(k);
                    break;
                case Block::structural: cs.structural.push_back(k); break;
                case Block::claim: cs.claims.back().constraints.push_back(k); break;
                case Block::none: throw ClaimsParseError(lineNo, "constraint outside a block");
            }
        }
    }
    return cs;
}

inline ClaimSet load_claims_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open claims file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_claims(ss.str());
}

namespace claims_text {

inline constexpr const char* kCommon = R"(domain
  w 1 > 0
  d 1 > 0
  w 1 < 1/4
  d 1 w -1 < 1/4
structural
  s 1 > 1/10
  s 1 < 1/2
  s 1 w -2 > 0
omitIII 1/6
# A claim at multiplicity i also serves every multiplicity i' >= i,
# since i'-tuply densely divisible moduli are i-tuply densely divisible.
)";

inline const std::string newtypeFull = std::string("name newtypeFull\n") + kCommon + R"(claim typeI 1
  w 54 d 15 s 5 < 1
claim typeI 2
  w 56 d 16 s 4 < 1
claim typeI 4 deligne
  w 160/3 d 16 s 34/9 < 1
  w 64 d 18 s 2 < 1
claim typeII 1
  w 68 d 14 < 1
claim typeIII 1 deligne
  s 1 w -28/9 d -2/9 > 1/18
  w 1 < 1/12
)";

inline const std::string newtypeElementary = std::string("name newtypeElementary\n") + kCommon + R"(claim typeI 1
  w 54 d 15 s 5 < 1
claim typeI 2
  w 56 d 16 s 4 < 1
claim typeII 1
  w 68 d 14 < 1
)";

// Stated without multiplicity; encoded at multiplicity 1.
inline const std::string zhangOriginal = std::string("name zhangOriginal\n") + kCommon + R"(claim typeI 1
  w 44 d 12 s 8 < 1
claim typeII 1
  w 116 d 20 < 1
claim typeIII 1
  s 1 w -32/13 d -2/13 > 3/26
)";

}  // namespace claims_text

inline ClaimSet claim_sets(const std::string& name) {
    if (name == "newtypeFull") return parse_claims(claims_text::newtypeFull);
    if (name == "newtypeElementary") return parse_claims(claims_text::newtypeElementary);
    if (name == "zhangOriginal") return parse_claims(claims_text::zhangOriginal);
    throw std::invalid_argument("unknown claim set: " + name);
}

inline std::string sup_str(const ExponentSup& s) {
    if (s.empty) return "empty";
    return detail::rational_str(s.value) + (s.open ? " (open)" : " (attained)");
}

}  // namespace eqdist
