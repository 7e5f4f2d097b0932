#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "eqdist/expsums.hpp"
#include "eqdist/harness/report.hpp"

namespace eqdist::harness {

/// CDF of (2/pi) sin^2 t dt on [0, pi].
inline double st_cdf(double t) {
    t = std::clamp(t, 0.0, std::numbers::pi);
    return (t - std::sin(2.0 * t) / 2.0) / std::numbers::pi;
}

inline double st_density(double t) { return 2.0 / std::numbers::pi * std::sin(t) * std::sin(t); }

/// CDF of acos(cos t cos t') for independent Sato-Tate angles, tabulated by composite Simpson
/// over t with the inner probability in closed form.
class StProductCdf {
public:
    explicit StProductCdf(std::size_t grid = 2000, std::size_t table = 2001) : table_(table) {
        if (grid % 2) ++grid;
        const double h = std::numbers::pi / static_cast<double>(grid);
        for (std::size_t k = 0; k < table; ++k) {
            const double phi = std::numbers::pi * static_cast<double>(k) / static_cast<double>(table - 1);
            const double c = std::cos(phi);
            double acc = 0.0;
            for (std::size_t j = 0; j <= grid; ++j) {
                const double t = h * static_cast<double>(j);
                const double wgt = (j == 0 || j == grid) ? 1.0 : (j % 2 ? 4.0 : 2.0);
                acc += wgt * st_density(t) * inner(std::cos(t), c);
            }
            table_[k] = std::clamp(acc * h / 3.0, 0.0, 1.0);
        }
        table_.front() = 0.0;
        table_.back() = 1.0;
    }

    double operator()(double phi) const {
        phi = std::clamp(phi, 0.0, std::numbers::pi);
        const double pos = phi / std::numbers::pi * static_cast<double>(table_.size() - 1);
        const std::size_t k = std::min(static_cast<std::size_t>(pos), table_.size() - 2);
        const double f = pos - static_cast<double>(k);
        return table_[k] * (1.0 - f) + table_[k + 1] * f;
    }

private:
    // P(ct * cos t' >= c) for t' Sato-Tate distributed
    static double inner(double ct, double c) {
        // treat |x| < 1e-12 as zero
        if (std::abs(ct) < 1e-12) ct = 0.0;
        if (std::abs(c) < 1e-12) c = 0.0;
        if (ct == 0.0) return c < 0.0 ? 1.0 : (c > 0.0 ? 0.0 : 0.5);
        const double u = c / ct;
        if (ct > 0.0) {
            if (u > 1.0) return 0.0;
            if (u < -1.0) return 1.0;
            return st_cdf(std::acos(u));
        }
        if (u > 1.0) return 1.0;
        if (u < -1.0) return 0.0;
        return 1.0 - st_cdf(std::acos(u));
    }

    std::vector<double> table_;
};

/// sup |F_emp - F| for samples against a continuous CDF.
template <class Cdf>
double ks_distance(std::vector<double> xs, const Cdf& F) {
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double f = F(xs[k]);
        d = std::max({d, f - static_cast<double>(k) / n, static_cast<double>(k + 1) / n - f});
    }
    return d;
}

/// sym_k(t) = sin((k+1) t) / sin t.
inline double sym_k(unsigned k, double t) {
    const double s = std::sin(t);
    if (std::abs(s) < 1e-12) {
        const double sign = (std::cos(t) > 0.0 || k % 2 == 0) ? 1.0 : -1.0;
        return sign * static_cast<double>(k + 1);
    }
    return std::sin(static_cast<double>(k + 1) * t) / s;
}

struct AngleSample {
    FactoredModulus q;
    std::vector<double> angles;
    u64 limit = 0;
    double maxReconstructionError = 0.0;
};

/// theta(n; q) in [0, pi] with 2^{omega(q)} cos theta = Kl_2(n; q), for 1 <= n <= limit.
inline AngleSample kloosterman_angles(const FactoredModulus& q, u64 limit) {
    if (!q.squarefree() || q.omega() < 1 || q.omega() > 2)
        throw std::invalid_argument("kloosterman_angles: q must be squarefree with 1 or 2 prime factors");
    if (limit < 1 || limit > q.value()) throw std::invalid_argument("kloosterman_angles: need 1 <= limit <= q");
    AngleSample s{q, {}, limit, 0.0};
    const double scale = std::ldexp(1.0, static_cast<int>(q.omega()));
    for (u64 n = 1; n <= limit; ++n) {
        if (gcd(n, q.value()) != 1) continue;
        const double kl = hyper_kloosterman(2, static_cast<i64>(n), q).real();
        const double t = std::acos(std::clamp(kl / scale, -1.0, 1.0));
        s.maxReconstructionError = std::max(s.maxReconstructionError, std::abs(scale * std::cos(t) - kl));
        s.angles.push_back(t);
    }
    return s;
}

inline ExperimentReport run_satotate(const FactoredModulus& q, u64 limit) {
    const AngleSample s = kloosterman_angles(q, limit);
    ExperimentReport rep;
    rep.meta = {{"experiment", "satotate"}, {"q", q.value()}, {"omega", q.omega()}, {"limit", limit}};
    double ks = 0.0;
    if (q.omega() == 1) {
        ks = ks_distance(s.angles, [](double t) { return st_cdf(t); });
        rep.summary["reference"] = "mu_ST";
    } else {
        const StProductCdf F2;
        ks = ks_distance(s.angles, F2);
        rep.summary["reference"] = "mu_ST2";
        const auto& pp = q.primes();
        rep.summary["window_ok"] = std::sqrt(static_cast<double>(pp[1].prime)) <= static_cast<double>(pp[0].prime) &&
                                   static_cast<double>(pp[0].prime) <= 2.0 * std::sqrt(static_cast<double>(pp[1].prime));
    }
    rep.summary["samples"] = s.angles.size();
    rep.summary["ks"] = ks;
    rep.summary["maxReconstructionError"] = s.maxReconstructionError;
    rep.columns = {"k", "weyl_mean", "abs"};
    json weyl = json::object();
    for (unsigned k = 1; k <= 6; ++k) {
        double acc = 0.0;
        for (double t : s.angles) acc += sym_k(k, t);
        const double mean = s.angles.empty() ? 0.0 : acc / static_cast<double>(s.angles.size());
        weyl[std::to_string(k)] = mean;
        rep.add_row({std::to_string(k), fmt(mean), fmt(std::abs(mean))});
    }
    rep.summary["weyl"] = weyl;
    if (s.maxReconstructionError > 1e-9) ++rep.assertionFailures;
    return rep;
}

}  // namespace eqdist::harness
