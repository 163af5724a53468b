#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qfsim_cli.hpp"

namespace fs = std::filesystem;
using qfsim::cli::json;

namespace {

struct Out {
    int code;
    std::string out, err;
};

Out call(std::vector<std::string> args) {
    std::ostringstream o, e;
    const int rc = qfsim::cli::run(args, o, e);
    return {rc, o.str(), e.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
    auto p = fs::path(::testing::TempDir()) / ("qfsim_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST(Cli, Fig1SmallEnsemble) {
    const auto r = call({"fig1", "--j", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(lines(r.out), 9u); // header + 8
    EXPECT_NE(r.out.find("25,5,5,1.000000000000"), std::string::npos);
    EXPECT_EQ(r.out.find('\r'), std::string::npos);
}

TEST(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(call({}).code, 1);
    EXPECT_EQ(call({"fig1", "--j", "three"}).code, 1);
    EXPECT_EQ(call({"ensemble"}).code, 1); // --j required
    const auto r = call({"trap", "plan", "--N", "1e9", "--particle", "muon"});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(json::parse(r.err)["error"]["kind"], "usage");
}

TEST(Cli, DomainErrorsExitTwo) {
    const auto r = call({"trap", "plan", "--N", "1e20"});
    EXPECT_EQ(r.code, 2);
    const auto e = json::parse(r.err);
    EXPECT_EQ(e["error"]["kind"], "domain");
    EXPECT_NE(e["error"]["message"].get<std::string>().find("omega_c'/omega_z"), std::string::npos);
    EXPECT_EQ(call({"ensemble", "--j", "5000000000"}).code, 2);
}

TEST(Cli, PlanSucceedsForSmallN) {
    const auto r = call({"trap", "plan", "--N", "1e6"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_LT(j["N_roundtrip_error"].get<double>(), 1e-9);
    EXPECT_TRUE(j["hierarchy_violations"].empty());
}

TEST(Cli, ConfigOverridesFlags) {
    const auto d = scratch("config");
    std::ofstream(d / "c.json") << R"({"j": 4})";
    const auto a = call({"fig1", "--j", "3", "--config", (d / "c.json").string()});
    const auto b = call({"fig1", "--j", "4"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(call({"fig1", "--config", (d / "missing.json").string()}).code, 1);
}

TEST(Cli, EnsembleCsvAndManifest) {
    const auto d = scratch("ensemble");
    const auto csv = d / "f.csv";
    ASSERT_EQ(call({"ensemble", "--j", "3", "--out", csv.string()}).code, 0);
    EXPECT_EQ(lines(slurp(csv)), 9u);
    const auto m = json::parse(slurp(csv.string() + ".manifest.json"));
    EXPECT_EQ(m["command"], "ensemble");
    EXPECT_EQ(m["inputs"]["j"], 3);
}

TEST(Cli, SieveRunIsThreadIndependent) {
    const auto d = scratch("sieve");
    auto run = [&](const std::string& threads, const std::string& name) {
        const auto p = d / name;
        const auto r = call({"sieve", "run", "--N", "1e8", "--j", "1229", "--T", "20", "--samples", "24", "--seed",
                             "7", "--threads", threads, "--out", p.string()});
        EXPECT_EQ(r.code, 0) << r.err;
        return std::make_pair(slurp(p), slurp(p.string() + ".manifest.json"));
    };
    const auto a = run("1", "a.csv");
    const auto b = run("4", "b.csv");
    EXPECT_GT(lines(a.first), 24u);
    EXPECT_EQ(a.first, b.first);
    auto ma = json::parse(a.second), mb = json::parse(b.second);
    ma["outputs"] = mb["outputs"] = nullptr;
    EXPECT_EQ(ma, mb);
    EXPECT_EQ(ma["seed"], 7);
}

TEST(Cli, CompareRejectsMismatchedBins) {
    const auto d = scratch("compare");
    std::ofstream(d / "a.csv") << "bin_E_lo,bin_E_hi,bin_x_lo,bin_x_hi,mass\n1,2,1,2,0.5\n2,3,1,2,0.5\n";
    std::ofstream(d / "b.csv") << "bin_E_lo,bin_E_hi,bin_x_lo,bin_x_hi,mass\n1,2,1,2,0.25\n2,3,1,2,0.75\n";
    std::ofstream(d / "c.csv") << "bin_E_lo,bin_E_hi,bin_x_lo,bin_x_hi,mass\n1,2,1,3,1\n";
    const auto ok = call({"sieve", "compare", "--a", (d / "a.csv").string(), "--b", (d / "b.csv").string()});
    ASSERT_EQ(ok.code, 0) << ok.err;
    EXPECT_NEAR(json::parse(ok.out)["overlap"].get<double>(), 0.75, 1e-15);
    EXPECT_EQ(call({"sieve", "compare", "--a", (d / "a.csv").string(), "--b", (d / "c.csv").string()}).code, 2);
}

TEST(Cli, Fig3WritesDeterministicFiles) {
    const auto d1 = scratch("fig3a"), d2 = scratch("fig3b");
    ASSERT_EQ(call({"fig3", "--out-dir", d1.string()}).code, 0);
    ASSERT_EQ(call({"fig3", "--out-dir", d2.string()}).code, 0);
    for (const char* f : {"zeromatch.csv", "densities.csv", "densities.svg", "manifest.json"})
        EXPECT_EQ(slurp(d1 / f), slurp(d2 / f)) << f;
    EXPECT_NE(slurp(d1 / "densities.svg").find("<path"), std::string::npos);
}

TEST(Cli, SvgEmptyInputIsAxesOnly) {
    const auto s = qfsim::svg::plot({}, {.title = "empty"});
    EXPECT_EQ(s.find("<circle"), std::string::npos);
    EXPECT_NE(s.find("</svg>"), std::string::npos);
    qfsim::density::Histogram2D h;
    const auto m = qfsim::svg::heatmap(h, {});
    EXPECT_EQ(m.find("<rect x="), std::string::npos);
}
