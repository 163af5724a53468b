#include <gtest/gtest.h>

#include "qfsim/spectral.hpp"

using namespace qfsim;
using namespace qfsim::spectral;

// Frozen from tests/oracles/spectral_oracle.py (mpmath, 30 digits).

TEST(Spectral, MatchingConstantOracle) {
    const cplx d1 = solve_d(1.0);
    EXPECT_NEAR(d1.real(), -0.11309373875628298, 1e-10);
    EXPECT_NEAR(d1.imag(), -1.4887103627557764, 1e-10);
    const cplx d2 = solve_d(2.0);
    EXPECT_NEAR(d2.real(), 0.8121360564094973, 1e-10);
    EXPECT_NEAR(d2.imag(), -4.4366246782042034, 1e-10);
    EXPECT_THROW(solve_d(0.0), DomainError);
}

TEST(Spectral, WavefunctionZerosOracle) {
    const auto z1 = wavefunction_zeros(1.0, 4.7);
    ASSERT_EQ(z1.size(), 3u);
    EXPECT_NEAR(z1[0], 2.82764819940069, 1e-9);
    EXPECT_NEAR(z1[1], 3.81562079153406, 1e-9);
    EXPECT_NEAR(z1[2], 4.58466707313338, 1e-9);
    const auto z2 = wavefunction_zeros(2.0, 4.9);
    ASSERT_EQ(z2.size(), 3u);
    EXPECT_NEAR(z2[0], 3.11475710109261, 1e-9);
    EXPECT_NEAR(z2[1], 4.06378636200259, 1e-9);
    EXPECT_NEAR(z2[2], 4.80987449123119, 1e-9);
}

TEST(Spectral, WavefunctionBoundaryAndPhase) {
    Wavefunction w(1.0);
    EXPECT_LT(std::abs(w(1.0)), 1e-12);
    EXPECT_EQ(w(0.0), cplx(0.0));
    EXPECT_THROW(w(-1.0), DomainError);
    // Psi carries one global phase: after removing it the remainder is real.
    for (double q : {1.5, 2.3, 3.1, 5.0, 7.7}) {
        const cplx v = w(q) * std::polar(1.0, -std::arg(w(1.001)));
        EXPECT_LT(std::abs(v.imag()), 1e-8 * std::max(1.0, std::abs(v)));
    }
}

TEST(Spectral, ZerosAreIncreasingAndAboveBoundary) {
    const auto z = wavefunction_zeros(1.3, 12.0);
    ASSERT_GT(z.size(), 10u);
    EXPECT_GT(z.front(), std::sqrt(1.3));
    for (std::size_t i = 1; i < z.size(); ++i) EXPECT_GT(z[i], z[i - 1]);
    EXPECT_TRUE(wavefunction_zeros(4.0, 1.9).empty());
}

TEST(Spectral, QuantizationRatioOracle) {
    const cplx s1 = quantization_S(1.0, 5.0);
    EXPECT_NEAR(s1.real(), -0.57130339507834992, 1e-9);
    EXPECT_NEAR(s1.imag(), 1.4412868731164686, 1e-9);
    const cplx s2 = quantization_S(1.2, 10.0);
    EXPECT_NEAR(s2.real(), 0.97700311448486457, 1e-9);
    EXPECT_NEAR(s2.imag(), 1.968038718722261, 1e-9);
    EXPECT_EQ(quantization_residual(1.2, 10.0), s2 - 1.0);
}

TEST(Spectral, ArgumentModesDiffer) {
    const cplx a = quantization_S(1.0, 5.0, ArgumentMode::q_squared);
    const cplx b = quantization_S(1.0, 5.0, ArgumentMode::q_fourth);
    EXPECT_GT(std::abs(a - b), 1e-3);
    EXPECT_LT(std::abs(b - S_of_rho(1.0, 625.0)), 1e-12);
}

TEST(Spectral, EigenvaluesSatisfyQuantization) {
    const auto ev = eigenvalues_in(20.0, 0.5, 3.0, 200);
    ASSERT_FALSE(ev.empty());
    for (double E : ev) EXPECT_LT(std::abs(quantization_residual(E, 20.0)), 1e-6) << E;
}

TEST(Spectral, NewtonConvergesOntoAnEigenvalue) {
    const auto ev = eigenvalues_in(20.0, 0.5, 3.0, 200);
    ASSERT_FALSE(ev.empty());
    const auto sol = solve_energy(20.0, ev.front() + 1e-3);
    EXPECT_TRUE(sol.converged);
    EXPECT_NEAR(sol.E, ev.front(), 1e-6);
    EXPECT_LE(sol.residual, 1e-8);
    // the boundary q_m is a node of the eigenfunction
    ASSERT_FALSE(sol.zeros.empty());
    EXPECT_NEAR(sol.zeros.back(), 20.0, 1e-6);
    EXPECT_THROW(solve_energy(1.0, 1.0), DomainError);
}

TEST(Spectral, AsymptoticCorrectionFormula) {
    const double q = 10.0, phi0 = kConstants.phi0, L = std::log(q);
    const double phim = q * q - L - phi0;
    EXPECT_DOUBLE_EQ(epsilon_asymptotic(q, 0.0), (std::tan(phi0) + std::sin(phim) / std::cos(phi0)) / L);
    EXPECT_THROW(epsilon_asymptotic(2.7, 0.0), DomainError);
}

TEST(Spectral, Phi0FromEnvelope) {
    const auto a = extract_phi0(100.0, 140.0);
    EXPECT_NEAR(a.phi0, 1.11965, 1e-3);
    EXPECT_LT(a.spread, 1e-6);
    EXPECT_THROW(extract_phi0(10.0, 5.0), DomainError);
}
