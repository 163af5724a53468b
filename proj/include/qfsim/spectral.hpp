/*
 * spectral.hpp - simulator wavefunction and quantization condition.
 *
 *   Psi(q) = q e^{-i q^2/2} [ F(alpha, 3/2, i q^2) + d(E) U(alpha, 3/2, i q^2) ]
 *   alpha  = 3/4 - i E/4,   d(E) = -F(alpha, 3/2, iE) / U(alpha, 3/2, iE)
 *
 * Psi solves Psi'' + q^2 Psi = E Psi and vanishes at q = sqrt(E), so it is a
 * constant phase times a real function. Zeros and eigenvalues are located on
 * that real function.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "qfsim/error.hpp"
#include "qfsim/parallel.hpp"
#include "qfsim/special.hpp"

namespace qfsim::spectral {

using special::cplx;

/// Second argument of F and U at the outer boundary: i q_m^2, or i q_m^4 when
/// rho = q_m^2 is squared once more.
enum class ArgumentMode { q_squared, q_fourth };

struct SpectralConstants {
    double phi0 = 1.11965; // certified by extract_phi0
    double C = 0.0;        // arbitrary phase, absorbed into chi
};

inline constexpr SpectralConstants kConstants{};

inline cplx alpha(double E) { return {0.75, -E / 4.0}; }

inline cplx F(double E, double r) { return special::kummer_M(alpha(E), 1.5, cplx(0.0, r)); }
inline cplx U(double E, double r) { return special::kummer_U(alpha(E), 1.5, cplx(0.0, r)); }

/// Matching constant that makes Psi(sqrt E) = 0.
inline cplx solve_d(double E) {
    if (!(E > 0.0)) throw DomainError("solve_d: E must be > 0");
    const cplx u = U(E, E);
    const cplx f = F(E, E);
    if (std::abs(u) < 1e-14 * std::max(1.0, std::abs(f)))
        throw NumericalError("solve_d: U vanishes at the matching point");
    return -f / u;
}

inline cplx wavefunction(double q, double E, cplx d) {
    if (q < 0.0) throw DomainError("wavefunction: q must be >= 0");
    if (q == 0.0) return 0.0;
    const double r = q * q;
    const cplx bracket = F(E, r) + d * U(E, r);
    return q * std::exp(cplx(0.0, -r / 2.0)) * bracket;
}

/// Psi for a given E with d = solve_d(E), together with the constant phase
/// that makes it real.
class Wavefunction {
public:
    explicit Wavefunction(double E) : E_(E), d_(solve_d(E)) {
        // Psi(sqrt E + h) ~ h Psi'(sqrt E) carries the global phase.
        const double h = 1e-3;
        const cplx probe = wavefunction(std::sqrt(E) + h, E, d_);
        phase_ = std::polar(1.0, -std::arg(probe));
    }

    double E() const noexcept { return E_; }
    cplx d() const noexcept { return d_; }
    cplx operator()(double q) const { return wavefunction(q, E_, d_); }

    /// The real function Psi(q) e^{-i theta}.
    double real_part(double q) const { return (wavefunction(q, E_, d_) * phase_).real(); }

    /// Sign changes of real_part on (sqrt E, q_max], refined by bisection.
    std::vector<double> zeros(double q_max, double tol = 1e-12) const {
        std::vector<double> out;
        const double q0 = std::sqrt(E_);
        if (q_max <= q0) return out;
        auto step_at = [](double q) { return std::min(0.02, 0.1 * special::kPi / std::max(q, 1.0)); };
        double a = q0 + step_at(q0) * 1e-2;
        double fa = real_part(a);
        while (a < q_max) {
            const double b = std::min(q_max, a + step_at(a));
            const double fb = real_part(b);
            if (fb == 0.0) {
                out.push_back(b);
            } else if ((fa < 0.0) != (fb < 0.0) && fa != 0.0) {
                double lo = a, hi = b, flo = fa;
                while (hi - lo > tol * std::max(1.0, hi)) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = real_part(mid);
                    if ((fm < 0.0) == (flo < 0.0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                out.push_back(0.5 * (lo + hi));
            }
            a = b;
            fa = fb;
        }
        return out;
    }

private:
    double E_;
    cplx d_;
    cplx phase_;
};

inline std::vector<double> wavefunction_zeros(double E, double q_max) {
    return Wavefunction(E).zeros(q_max);
}

inline double outer_argument(double q_m, ArgumentMode mode) {
    const double r = q_m * q_m;
    return mode == ArgumentMode::q_squared ? r : r * r;
}

/// S(E, q_m) = F(iZ) U(iE) / (F(iE) U(iZ)) with Z from the argument mode.
inline cplx quantization_S(double E, double q_m, ArgumentMode mode = ArgumentMode::q_squared) {
    if (!(E > 0.0)) throw DomainError("quantization: E must be > 0");
    if (!(q_m > 0.0)) throw DomainError("quantization: q_m must be > 0");
    const double Z = outer_argument(q_m, mode);
    const cplx num = F(E, Z) * U(E, E);
    const cplx den = F(E, E) * U(E, Z);
    if (std::abs(den) < 1e-14 * std::max(1e-300, std::abs(num)))
        throw NumericalError("quantization: denominator vanishes");
    return num / den;
}

inline cplx quantization_residual(double E, double q_m, ArgumentMode mode = ArgumentMode::q_squared) {
    return quantization_S(E, q_m, mode) - 1.0;
}

/// S with the outer argument given directly as i rho.
inline cplx S_of_rho(double E, double rho) {
    const cplx num = F(E, rho) * U(E, E);
    const cplx den = F(E, E) * U(E, rho);
    return num / den;
}

struct SpectralSolution {
    double E = 0.0;
    cplx d;
    double q_m = 0.0;
    std::vector<double> zeros;
    double residual = 0.0; // |S - 1|
    int iterations = 0;
    bool converged = false;
};

struct SolveOptions {
    double derivative_step = 1e-6;
    double tolerance = 1e-8;
    int max_iterations = 50;
    ArgumentMode mode = ArgumentMode::q_squared;
    bool with_zeros = true;
};

/// Newton-Raphson on S(E, q_m) = 1 with a central-difference derivative.
/// The complex step (1 - S)/S' is real at a root; its real part is taken.
inline SpectralSolution solve_energy(double q_m, double guess, const SolveOptions& opt = {}) {
    if (!(q_m > 1.0)) throw DomainError("solve_energy: q_m must be > 1");
    if (!(guess > 0.0)) throw DomainError("solve_energy: guess must be > 0");
    SpectralSolution best;
    best.q_m = q_m;
    best.residual = std::numeric_limits<double>::infinity();
    double E = guess;
    for (int it = 0; it <= opt.max_iterations; ++it) {
        const cplx r = quantization_residual(E, q_m, opt.mode);
        const double res = std::abs(r);
        if (res < best.residual) {
            best.E = E;
            best.residual = res;
            best.iterations = it;
        }
        if (res <= opt.tolerance) {
            best.converged = true;
            break;
        }
        if (it == opt.max_iterations) break;
        const double h = opt.derivative_step;
        const cplx sp = quantization_S(E + h, q_m, opt.mode);
        const cplx sm = quantization_S(std::max(E - h, h / 2), q_m, opt.mode);
        const cplx deriv = (sp - sm) / (E + h - std::max(E - h, h / 2));
        if (std::abs(deriv) == 0.0) break;
        double step = (-r / deriv).real();
        // keep E positive
        while (E + step <= 0.0) step /= 2.0;
        E += step;
    }
    best.d = solve_d(best.E);
    if (opt.with_zeros && q_m > std::sqrt(best.E)) {
        best.zeros = Wavefunction(best.E).zeros(q_m * (1.0 + 1e-9));
    }
    return best;
}

/// Real eigenvalue functional for fixed q_m: Psi_E(q_m) with its phase
/// removed. Continuous in E; its zeros are the eigenvalues.
inline double eigen_functional(double E, double q_m) {
    Wavefunction w(E);
    return w.real_part(q_m) / std::max(q_m, 1.0);
}

/// All eigenvalues in (E_lo, E_hi) at fixed q_m by sign-change bracketing on
/// `samples` points plus bisection.
inline std::vector<double> eigenvalues_in(double q_m, double E_lo, double E_hi, int samples = 400,
                                          unsigned threads = 1) {
    if (!(E_hi > E_lo) || !(E_lo > 0.0)) throw DomainError("eigenvalues_in: bad energy interval");
    std::vector<double> Es(static_cast<std::size_t>(samples) + 1), g(Es.size());
    for (std::size_t i = 0; i < Es.size(); ++i) Es[i] = E_lo + (E_hi - E_lo) * static_cast<double>(i) / samples;
    parallel_for(Es.size(), threads, [&](std::size_t i) { g[i] = eigen_functional(Es[i], q_m); });
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < Es.size(); ++i) {
        if (g[i] == 0.0) {
            if (i > 0) out.push_back(Es[i]);
            continue;
        }
        if ((g[i] < 0.0) == (g[i + 1] < 0.0) || g[i + 1] == 0.0) continue;
        double lo = Es[i], hi = Es[i + 1], flo = g[i];
        for (int k = 0; k < 60 && hi - lo > 1e-13; ++k) {
            const double mid = 0.5 * (lo + hi);
            const double fm = eigen_functional(mid, q_m);
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;
}

/// First-order correction eps(q_m) = (tan phi0 + sin phi_m sec phi0) / log q_m
/// with phi_m = q_m^2 - log q_m - phi0 + chi.
inline double epsilon_asymptotic(double q_m, double chi, double phi0 = kConstants.phi0) {
    if (!(q_m > std::exp(1.0))) throw DomainError("epsilon_asymptotic: q_m must exceed e");
    const double L = std::log(q_m);
    const double phim = q_m * q_m - L - phi0 + chi;
    return (std::tan(phi0) + std::sin(phim) / std::cos(phi0)) / L;
}

struct Phi0Extraction {
    double phi0 = 0.0;
    double envelope_max = 0.0; // mean of local maxima of |S(1, rho)|
    double envelope_min = 0.0; // mean of local minima of |S(1, rho)|
    double spread = 0.0;       // max - min of the local maxima
    std::size_t maxima = 0;
    double rho_lo = 0.0, rho_hi = 0.0;
};

/// phi0 from the envelope of |S(1, rho)| over [rho_lo, rho_hi]. The local
/// maxima of |S| sit at sec(phi0); minima are reported alongside.
inline Phi0Extraction extract_phi0(double rho_lo = 1e2, double rho_hi = 1e4, double step = 0.25) {
    if (!(rho_hi > rho_lo) || !(rho_lo > 1.0)) throw DomainError("extract_phi0: bad window");
    auto absS = [](double rho) { return std::abs(S_of_rho(1.0, rho)); };
    // golden-section refinement of an interior extremum
    auto refine = [&](double a, double b, bool maximum) {
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = absS(c), fd = absS(d);
        for (int i = 0; i < 60 && b - a > 1e-10; ++i) {
            const bool left = maximum ? fc > fd : fc < fd;
            if (left) {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = absS(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = absS(d);
            }
        }
        return absS(0.5 * (a + b));
    };
    Phi0Extraction out;
    out.rho_lo = rho_lo;
    out.rho_hi = rho_hi;
    const std::size_t n = static_cast<std::size_t>((rho_hi - rho_lo) / step) + 1;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = absS(rho_lo + step * static_cast<double>(i));
    std::vector<double> maxima, minima;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double x = rho_lo + step * static_cast<double>(i);
        if (v[i] > v[i - 1] && v[i] >= v[i + 1]) maxima.push_back(refine(x - step, x + step, true));
        if (v[i] < v[i - 1] && v[i] <= v[i + 1]) minima.push_back(refine(x - step, x + step, false));
    }
    if (maxima.size() < 3) throw NumericalError("extract_phi0: envelope not resolved");
    double sum = 0.0, lo = maxima[0], hi = maxima[0];
    for (double m : maxima) {
        sum += m;
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    out.envelope_max = sum / static_cast<double>(maxima.size());
    out.spread = hi - lo;
    out.maxima = maxima.size();
    double msum = 0.0;
    for (double m : minima) msum += m;
    out.envelope_min = minima.empty() ? 0.0 : msum / static_cast<double>(minima.size());
    if (!(out.envelope_max > 1.0)) throw NumericalError("extract_phi0: envelope maximum below 1");
    out.phi0 = std::acos(1.0 / out.envelope_max);
    return out;
}

} // namespace qfsim::spectral
