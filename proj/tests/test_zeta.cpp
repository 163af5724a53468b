#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <numbers>

#include "qfsim/primes.hpp"
#include "qfsim/zeta.hpp"

using namespace qfsim;
using namespace qfsim::zeta;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
    const std::string path = ::testing::TempDir() + name;
    std::ofstream(path) << body;
    return path;
}

// 50-point geometric grid on [1e3, 1e6], rounded to integers.
std::vector<double> error_grid() {
    std::vector<double> xs;
    for (int i = 0; i < 50; ++i) {
        const double x = std::round(std::pow(10.0, 3.0 + 3.0 * i / 49.0));
        if (xs.empty() || x != xs.back()) xs.push_back(x);
    }
    return xs;
}

} // namespace

TEST(ZetaZeros, BundledTable) {
    const auto& z = ZetaZerosTable::bundled();
    ASSERT_GE(z.count(), 1000u);
    EXPECT_NEAR(z[0], 14.134725, 1e-6);
    EXPECT_NEAR(z[999], 1419.42248094599568, 1e-9);
    for (std::size_t i = 1; i < z.count(); ++i) ASSERT_GT(z[i], z[i - 1]);
}

TEST(ZetaZeros, LoadValidates) {
    EXPECT_EQ(ZetaZerosTable::load(write_temp("z_ok.txt", "# h\n14.134725141734694\n\n21.022039638771555\n")).count(),
              2u);
    EXPECT_THROW(ZetaZerosTable::load(write_temp("z_first.txt", "14.2\n21.0\n")), DomainError);
    EXPECT_THROW(ZetaZerosTable::load(write_temp("z_order.txt", "14.134725141734694\n13.0\n")), DomainError);
    EXPECT_THROW(ZetaZerosTable::load(::testing::TempDir() + "no_such_file.txt"), Error);
}

TEST(Zeta, RealValues) {
    EXPECT_NEAR(zeta_real(2.0), std::numbers::pi * std::numbers::pi / 6.0, 1e-14);
    EXPECT_NEAR(zeta_real(3.0), 1.2020569031595942, 1e-14);
    EXPECT_EQ(mobius(1), 1);
    EXPECT_EQ(mobius(6), 1);
    EXPECT_EQ(mobius(12), 0);
    EXPECT_EQ(mobius(30), -1);
}

// R values frozen from tests/oracles/zeta_oracle.py (mpmath riemannr).
TEST(RiemannR, OracleValues) {
    EXPECT_NEAR(riemann_R(1000.0), 168.35944628116734806, 1e-9);
    EXPECT_NEAR(riemann_R(1e4), 1226.9312183434331086, 1e-8);
    EXPECT_NEAR(riemann_R(1e6), 78527.399429127704859, 1e-6);
    EXPECT_NEAR(riemann_R(1.0 + 1e-12), 1.0, 1e-9);
}

TEST(RiemannR, ExceedsPiByModestAmount) {
    const double pi = static_cast<double>(primes::pi_combinatorial(1000000));
    const double gap = riemann_R(1e6) - pi;
    EXPECT_GT(gap, 0.0);
    EXPECT_LT(gap, std::sqrt(1e6) / std::log(1e6));
}

TEST(RiemannR, StrictlyIncreasing) {
    double prev = riemann_R(2.0);
    for (double x = 2.5; x <= 1e6; x *= 1.05) {
        const double r = riemann_R(x);
        ASSERT_GT(r, prev) << x;
        prev = r;
    }
}

TEST(RiemannR, GramSeriesAgreesOnRealAxis) {
    const auto g = riemann_R_gram(cplx(std::log(1e5), 0.0));
    EXPECT_FALSE(g.precision_loss);
    EXPECT_NEAR(g.value.real(), riemann_R(1e5), 1e-8);
}

TEST(PiApprox, ZeroTermsIsR) {
    const auto& z = ZetaZerosTable::bundled();
    for (double x : {2.0, 10.0, 1234.5, 1e6}) EXPECT_EQ(pi_approx(x, z, 0), riemann_R(x));
    EXPECT_THROW(pi_approx(1.5, z, 0), DomainError);
    EXPECT_THROW(pi_approx(100.0, z, static_cast<int>(z.count()) + 1), LimitExceeded);
}

TEST(PiApprox, HundredZerosBeatR) {
    const auto& z = ZetaZerosTable::bundled();
    const double pi = 78498.0;
    EXPECT_LT(std::abs(pi_approx(1e6, z, 100) - pi), std::abs(riemann_R(1e6) - pi));
}

TEST(PiApprox, MeanErrorOracleAndMonotone) {
    const auto& z = ZetaZerosTable::bundled();
    primes::PrimeTable table(1000000);
    const auto xs = error_grid();
    ASSERT_EQ(xs.size(), 50u);
    const std::vector<std::pair<int, double>> want = {
        {0, 5.069001}, {50, 2.412282}, {100, 2.045930}, {300, 1.329207}, {1000, 0.825062}};
    double prev = 1e300;
    for (const auto& [T, ref] : want) {
        double sum = 0.0;
        for (double x : xs)
            sum += std::abs(pi_approx(x, z, T) - static_cast<double>(table.pi(static_cast<std::uint64_t>(x))));
        const double mean = sum / static_cast<double>(xs.size());
        EXPECT_NEAR(mean, ref, 1e-5) << "T=" << T;
        EXPECT_LT(mean, prev);
        prev = mean;
    }
}

TEST(ExplicitFormula, TabulationMatchesDirect) {
    const auto& z = ZetaZerosTable::bundled();
    ExplicitFormula ef(z, 100);
    EXPECT_FALSE(ef.tabulated());
    ef.tabulate(1e3, 1e5, 2);
    EXPECT_TRUE(ef.tabulated());
    for (double x = 1000.0; x < 1e5; x *= 1.37) EXPECT_NEAR(ef.pi(x), pi_approx(x, z, 100), 1e-4) << x;
    // outside the table it falls back to direct evaluation
    EXPECT_NEAR(ef.pi(2e5), pi_approx(2e5, z, 100), 1e-9);
    EXPECT_EQ(ExplicitFormula(z, 0).pi(5000.0), riemann_R(5000.0));
}
