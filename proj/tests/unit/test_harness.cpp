#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "support/properties.hpp"

using namespace eqdist;
using namespace eqdist::harness;

namespace {

struct RunResult {
    int status;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(EQDIST_CLI) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    const int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("eqdist_test_" + std::to_string(::getpid()) + "_" + name);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Sieve, MatchesDirectFactorization) {
    const auto support = lambda_support(1, 100000, 4096);
    double sieve = 0.0, direct = 0.0;
    std::size_t idx = 0;
    for (u64 n = 1; n <= 100000; ++n) {
        const double l = oracle::lambda(n);
        direct += l;
        if (l > 0) {
            ASSERT_LT(idx, support.size());
            EXPECT_EQ(support[idx].n, n);
            EXPECT_NEAR(support[idx].lambda, l, 1e-12);
            ++idx;
        }
    }
    EXPECT_EQ(idx, support.size());
    for (const auto& v : support) sieve += v.lambda;
    EXPECT_NEAR(sieve, direct, 1e-6);
    const auto mid = lambda_support(99990, 100030, 7);
    for (const auto& v : mid) EXPECT_NEAR(v.lambda, oracle::lambda(v.n), 1e-12);
}

TEST(Mpz, ComposedResidueIsCongruentEverywhere) {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 2000; ++t) {
        const u64 q = props::squarefree_sample(rng, 1000000);
        const i64 a = static_cast<i64>(rng() % 2000000) - 1000000;
        const auto aq = compose_residue(a, factor(q));
        bool unit = true;
        for (u64 p : oracle::prime_factors(q)) unit &= oracle::md(a, p) != 0;
        ASSERT_EQ(aq.has_value(), unit);
        if (!aq) continue;
        EXPECT_LT(*aq, q);
        for (u64 p : oracle::prime_factors(q)) EXPECT_EQ(*aq % p, oracle::md(a, p));
    }
}

TEST(Mpz, SmallRunMatchesDirectSums) {
    MpzExperimentConfig c;
    c.x = 1000;
    // y = 1000^{1/10} < 2 leaves only q = 1, which is excluded
    EXPECT_EQ(run_mpz(c).summary["moduli"].get<std::size_t>(), 0u);
    c.delta = Rational(1, 4);
    const auto rep = run_mpz(c);
    double D = 0.0;
    for (const auto& row : rep.rows) {
        const u64 q = std::stoull(row[0]), aq = std::stoull(row[1]);
        double cls = 0.0, cop = 0.0;
        u64 phi = 0;
        for (u64 a = 1; a <= q; ++a) phi += std::gcd(a, q) == 1;
        for (u64 n = 1000; n <= 2000; ++n) {
            if (n % q == aq) cls += oracle::lambda(n);
            if (std::gcd(n, q) == 1) cop += oracle::lambda(n);
        }
        EXPECT_NEAR(std::stod(row[5]), cls - cop / double(phi), 1e-8) << q;
        D += std::abs(cls - cop / double(phi));
    }
    EXPECT_GT(rep.rows.size(), 0u);
    EXPECT_NEAR(rep.summary["D"].get<double>(), D, 1e-6);
    MpzExperimentConfig tiny;
    tiny.x = 3;
    EXPECT_EQ(run_mpz(tiny).summary["D"].get<double>(), 0.0);
    MpzExperimentConfig neg;
    neg.a = 6;
    neg.x = 1000;
    neg.delta = Rational(1, 4);
    EXPECT_GT(run_mpz(neg).summary["skipped"].get<std::size_t>(), 0u);
}

TEST(Determinism, ReportsIndependentOfThreadCount) {
    MpzExperimentConfig c;
    c.x = 20000;
    c.delta = Rational(1, 4);
    ::setenv("EQDIST_THREADS", "1", 1);
    const std::string a = to_csv(run_mpz(c));
    const std::string ka = to_csv(run_bound_audit("kls", parse_grid("p=primes:3..60 m=3")));
    ::setenv("EQDIST_THREADS", "4", 1);
    const std::string b = to_csv(run_mpz(c));
    const std::string kb = to_csv(run_bound_audit("kls", parse_grid("p=primes:3..60 m=3")));
    ::unsetenv("EQDIST_THREADS");
    EXPECT_EQ(a, b);
    EXPECT_EQ(ka, kb);
}

TEST(Parallel, MapPreservesOrderAndRethrows) {
    ::setenv("EQDIST_THREADS", "3", 1);
    const auto v = parallel_map(100, [](std::size_t k) { return k * k; });
    for (std::size_t k = 0; k < 100; ++k) EXPECT_EQ(v[k], k * k);
    EXPECT_THROW(parallel_map(10, [](std::size_t k) -> int {
                     if (k == 7) throw std::runtime_error("boom");
                     return 0;
                 }),
                 std::runtime_error);
    ::unsetenv("EQDIST_THREADS");
}

TEST(Report, CsvQuotingAndJsonSchema) {
    ExperimentReport r;
    r.columns = {"a", "b,c"};
    r.add_row({"plain", "has \"quote\""});
    r.add_row({"line\nbreak", ""});
    EXPECT_EQ(to_csv(r), "a,\"b,c\"\r\nplain,\"has \"\"quote\"\"\"\r\n\"line\nbreak\",\r\n");
    EXPECT_THROW(r.add_row({"x"}), std::logic_error);
    r.summary["k"] = 1;
    const json j = to_json(r);
    EXPECT_TRUE(j.contains("meta") && j.contains("rows") && j.contains("summary"));
    EXPECT_EQ(j["rows"][0]["b,c"], "has \"quote\"");
    EXPECT_EQ(j["summary"]["assertionFailures"], 0);
    EXPECT_EQ(fmt(0.1), "0.10000000000000001");
}

TEST(Config, ParsesKeyValueLines) {
    std::istringstream in("# header\nx = 1e5\n  mode=dd   # trailing\n\nA = 1,2\n");
    const auto c = parse_config(in);
    EXPECT_EQ(c.at("x"), "1e5");
    EXPECT_EQ(c.at("mode"), "dd");
    EXPECT_EQ(c.at("A"), "1,2");
    std::istringstream bad("novalue\n");
    EXPECT_THROW(parse_config(bad), std::invalid_argument);
}

TEST(Grid, ExpandsListsRangesAndPrimes) {
    const auto g = parse_grid("p=primes:10..20 m=2,3\n# comment\nq=1..3\nbroken token\n");
    EXPECT_EQ(g.rows.size(), 4u * 2u + 3u);
    EXPECT_EQ(g.errors.size(), 1u);
    EXPECT_EQ(g.rows[0], (GridRow{{"p", "11"}, {"m", "2"}}));
    const auto rep = run_bound_audit("weil", parse_grid("q=1..30 b=0..5\nq=x b=1\n"));
    EXPECT_EQ(rep.assertionFailures, 0);
    EXPECT_GT(rep.summary["errors"].size(), 0u);
}

TEST(Audit, EveryShippedGridRuns) {
    for (const auto& fam : audit_families()) {
        const std::string path = std::string(EQDIST_SOURCE_DIR) + "/data/grids/" + fam + ".grid";
        Grid g = load_grid(path);
        if (fam == "kls") g = parse_grid("p=primes:3..97 m=3");
        const auto rep = run_bound_audit(fam, g);
        EXPECT_EQ(rep.assertionFailures, 0) << fam;
        EXPECT_EQ(rep.summary["errors"].size(), 0u) << fam;
        EXPECT_GT(rep.rows.size(), 0u) << fam;
    }
    EXPECT_THROW(run_bound_audit("nonsense", Grid{}), std::invalid_argument);
}

TEST(SatoTate, ReferenceMeasures) {
    EXPECT_NEAR(st_cdf(std::numbers::pi / 2), 0.5, 1e-15);
    EXPECT_EQ(st_cdf(0.0), 0.0);
    EXPECT_NEAR(st_cdf(std::numbers::pi), 1.0, 1e-15);
    const StProductCdf F2;
    EXPECT_NEAR(F2(std::numbers::pi / 2), 0.5, 1e-6);
    EXPECT_EQ(F2(0.0), 0.0);
    EXPECT_EQ(F2(std::numbers::pi), 1.0);
    // Monte Carlo check of the product measure via rejection sampling
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto draw = [&] {
        while (true) {
            const double t = U(rng) * std::numbers::pi;
            if (U(rng) <= std::sin(t) * std::sin(t)) return t;
        }
    };
    std::vector<double> xs;
    for (int k = 0; k < 40000; ++k) xs.push_back(std::acos(std::cos(draw()) * std::cos(draw())));
    EXPECT_LT(ks_distance(xs, F2), 0.012);
    EXPECT_NEAR(sym_k(2, 0.0), 3.0, 1e-12);
    EXPECT_NEAR(sym_k(3, std::numbers::pi), -4.0, 1e-12);
}

TEST(SatoTate, AnglesReconstructKloostermanValues) {
    const auto s = kloosterman_angles(factor(1009), 1008);
    EXPECT_EQ(s.angles.size(), 1008u);
    EXPECT_LT(s.maxReconstructionError, 1e-9);
    for (std::size_t k = 0; k < 50; ++k)
        EXPECT_NEAR(2.0 * std::cos(s.angles[k]), oracle::kloosterman(1, k + 1, 1009).real() / std::sqrt(1009.0), 1e-9);
    const auto rep = run_satotate(factor(31 * 37), 200);
    EXPECT_EQ(rep.summary["reference"], "mu_ST2");
    EXPECT_EQ(rep.assertionFailures, 0);
    EXPECT_THROW(kloosterman_angles(factor(30), 10), std::invalid_argument);
    EXPECT_THROW(kloosterman_angles(factor(101), 102), std::invalid_argument);
}

TEST(Fspec, ParsesFamilies) {
    const auto p = parse_fspec("rationalPhase P=0,1,0,1 Q=1");
    EXPECT_EQ(p.at("kind"), "rationalPhase");
    EXPECT_EQ(parse_poly("1;-2;3"), (IntPoly{1, -2, 3}));
    const auto f = make_function(parse_fspec("klTable m=2 a=1"), factor(13));
    EXPECT_LT(std::abs(f.values[5] - oracle::kl(2, 5, 13)), 1e-9);
    EXPECT_THROW(parse_fspec("kfTable broken"), std::invalid_argument);
    EXPECT_THROW(make_function(parse_fspec("unknown"), factor(13)), std::invalid_argument);
}

TEST(Cli, ExitCodesAndCanonicalOutputs) {
    auto none = run_cli("");
    EXPECT_EQ(none.status, 2);
    EXPECT_NE(none.out.find("Usage"), std::string::npos);
    EXPECT_EQ(run_cli("bogus").status, 2);
    EXPECT_EQ(run_cli("densediv check --n 7 --i 1").status, 2);

    auto ex = run_cli("exponents max --claims newtypeFull --i 4 --delta-policy zero");
    EXPECT_EQ(ex.status, 0);
    EXPECT_EQ(ex.out, "7/300 (open)\n");
    auto dd = run_cli("densediv check --n 7 --i 1 --y 2");
    EXPECT_EQ(dd.status, 0);
    EXPECT_EQ(dd.out, "false\n");
    auto file = run_cli("exponents max --claims " + std::string(EQDIST_SOURCE_DIR) +
                        "/data/claims/newtypeElementary.claims --i 2");
    EXPECT_EQ(file.out, "1/84 (open)\n");
    auto cls = run_cli("decomp classify --t 1/4,3/8,3/8 --sigma 1/8");
    EXPECT_EQ(cls.status, 0);
    EXPECT_NE(cls.out.find("III"), std::string::npos);
    EXPECT_EQ(run_cli("sum kloosterman --a 1 --b 1 --q 0").status, 2);
}

TEST(Cli, ConfigFileAndReportFormats) {
    const auto cfg = temp_path("mpz.cfg");
    const auto csv = temp_path("out.csv"), js = temp_path("out.json");
    {
        std::ofstream f(cfg);
        f << "# mpz settings\nx = 2000\ndelta = 1/4\n";
    }
    auto r = run_cli("--config " + cfg.string() + " --out " + csv.string() + " mpz");
    EXPECT_EQ(r.status, 0) << r.out;
    const std::string text = slurp(csv);
    EXPECT_EQ(text.rfind("q,a_q,phi,psi_class,psi_coprime,delta,abs_delta,trivial\r\n", 0), 0u);
    r = run_cli("--config " + cfg.string() + " --out " + js.string() + " mpz --x 3000");
    EXPECT_EQ(r.status, 0) << r.out;
    const json j = json::parse(slurp(js));
    EXPECT_EQ(j["meta"]["x"].get<double>(), 3000.0);
    EXPECT_EQ(j["meta"]["delta"], "1/4");
    EXPECT_TRUE(j["summary"].contains("ratio"));
    std::filesystem::remove(cfg);
    std::filesystem::remove(csv);
    std::filesystem::remove(js);
}

TEST(Cli, AuditRunsFromGridFile) {
    const auto grid = temp_path("bad.grid");
    {
        std::ofstream f(grid);
        f << "p=7 m=3\n";
    }
    EXPECT_EQ(run_cli("audit --family kls --grid " + grid.string()).status, 0);
    std::filesystem::remove(grid);
}
