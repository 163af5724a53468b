/*
 * special.hpp - complex Gamma, digamma, Kummer M and U, exponential integral.
 *
 * Kummer functions have two regimes:
 *   series      power series summed in __float128, |z| <= switch radius
 *   asymptotic  large-|z| expansions summed in double up to the smallest term
 * U in the series regime comes from the connection formula (non-integer b)
 * or the logarithmic series (b = 1).
 */
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "qfsim/error.hpp"

namespace qfsim::special {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kEulerGamma = std::numbers::egamma;

// ---------------------------------------------------------------------------
// Quad-precision complex arithmetic (only + - * / are needed)
// ---------------------------------------------------------------------------

struct qcomplex {
    __float128 re = 0;
    __float128 im = 0;

    qcomplex() = default;
    qcomplex(__float128 r, __float128 i = 0) : re(r), im(i) {}
    explicit qcomplex(cplx z) : re(z.real()), im(z.imag()) {}

    cplx to_cplx() const { return {static_cast<double>(re), static_cast<double>(im)}; }
    double abs() const {
        return std::hypot(static_cast<double>(re), static_cast<double>(im));
    }

    friend qcomplex operator+(qcomplex a, qcomplex b) { return {a.re + b.re, a.im + b.im}; }
    friend qcomplex operator-(qcomplex a, qcomplex b) { return {a.re - b.re, a.im - b.im}; }
    friend qcomplex operator*(qcomplex a, qcomplex b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend qcomplex operator/(qcomplex a, qcomplex b) {
        const __float128 d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    qcomplex& operator+=(qcomplex o) { return *this = *this + o; }
};

// ---------------------------------------------------------------------------
// Gamma and digamma
// ---------------------------------------------------------------------------

/// log Gamma(z) for Re z >= 0.5 (Lanczos, g = 7, n = 9). Imaginary part is
/// not reduced to the principal branch; only exp() of it is meaningful.
inline cplx log_gamma_lanczos(cplx z) {
    static constexpr double g = 7.0;
    static constexpr double coef[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                       771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                       -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    z -= 1.0;
    cplx x = coef[0];
    for (int i = 1; i < 9; ++i) x += coef[i] / (z + static_cast<double>(i));
    const cplx t = z + g + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

inline cplx gamma(cplx z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw DomainError("gamma: pole at non-positive integer");
    if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * gamma(1.0 - z));
    return std::exp(log_gamma_lanczos(z));
}

/// 1/Gamma(z), zero at the poles.
inline cplx rgamma(cplx z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) return 0.0;
    return 1.0 / gamma(z);
}

inline cplx digamma(cplx z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw DomainError("digamma: pole at non-positive integer");
    if (z.real() < 0.5) return digamma(1.0 - z) - kPi / std::tan(kPi * z);
    cplx shift = 0.0;
    while (std::abs(z) < 12.0) {
        shift -= 1.0 / z;
        z += 1.0;
    }
    const cplx iz2 = 1.0 / (z * z);
    const cplx tail =
        iz2 * (1.0 / 12 - iz2 * (1.0 / 120 - iz2 * (1.0 / 252 - iz2 * (1.0 / 240 - iz2 * (1.0 / 132)))));
    return shift + std::log(z) - 0.5 / z - tail;
}

// ---------------------------------------------------------------------------
// Kummer functions
// ---------------------------------------------------------------------------

enum class Regime { automatic, series, asymptotic };

struct KummerOptions {
    double switch_radius = 30.0;   // |z| at which the asymptotic regime takes over
    double series_max_radius = 60.0;
    Regime force = Regime::automatic;
};

struct KummerResult {
    cplx value;
    Regime regime = Regime::series;
    bool converged = false;
    double error = 0.0; // error estimate relative to the magnitude scale of the function
};

namespace detail {

inline bool is_nonpositive_integer(cplx b) {
    return b.imag() == 0.0 && b.real() <= 0.0 && b.real() == std::floor(b.real());
}

/// M(a, b, z) by its power series in quad precision. The error estimate is
/// the cancellation loss: largest term * 2^-112 / |sum|.
inline KummerResult series_M(cplx a, cplx b, cplx z) {
    const qcomplex qa(a), qb(b), qz(z);
    qcomplex sum(1), term(1);
    double max_term = 1.0;
    const double az = std::abs(z);
    KummerResult r;
    r.regime = Regime::series;
    for (int k = 0; k < 4000; ++k) {
        const __float128 kk = k;
        term = term * (qa + qcomplex(kk)) / ((qb + qcomplex(kk)) * qcomplex(kk + 1)) * qz;
        sum += term;
        const double t = term.abs();
        if (t > max_term) max_term = t;
        if (k > az && t <= 1e-33 * sum.abs()) {
            r.converged = true;
            break;
        }
        if (term.re == 0 && term.im == 0) { // a is a non-positive integer
            r.converged = true;
            break;
        }
    }
    r.value = sum.to_cplx();
    const double mag = std::abs(r.value);
    r.error = mag > 0 ? max_term * 1.0e-33 / mag : 1.0;
    if (r.error > 1e-10) r.converged = false;
    return r;
}

/// sum_{s} (p)_s (q)_s / s! * w^s, truncated at the smallest term.
/// Returns the sum and the size of the first omitted term relative to it.
inline std::pair<cplx, double> asymptotic_sum(cplx p, cplx q, cplx w) {
    cplx sum = 1.0, term = 1.0;
    double prev = 1.0;
    for (int s = 0; s < 500; ++s) {
        const cplx next = term * (p + double(s)) * (q + double(s)) / double(s + 1) * w;
        const double an = std::abs(next);
        if (an >= prev && s > 0) return {sum, prev / std::max(std::abs(sum), 1e-300)};
        sum += next;
        term = next;
        prev = an;
        if (an <= 1e-17 * std::abs(sum)) return {sum, an / std::abs(sum)};
        if (next == 0.0) return {sum, 0.0};
    }
    return {sum, prev / std::abs(sum)};
}

/// Large-|z| expansion of M(a, b, z); the sign of the e^{+-i pi a} factor
/// follows the half plane of z.
inline KummerResult asymptotic_M(cplx a, cplx b, cplx z) {
    const cplx I(0.0, 1.0);
    const double sign = z.imag() >= 0.0 ? 1.0 : -1.0;
    auto [s1, e1] = asymptotic_sum(a, a - b + 1.0, -1.0 / z);
    auto [s2, e2] = asymptotic_sum(b - a, 1.0 - a, 1.0 / z);
    const cplx t1 = std::exp(sign * I * kPi * a) * std::pow(z, -a) * rgamma(b - a) * s1;
    const cplx t2 = std::exp(z) * std::pow(z, a - b) * rgamma(a) * s2;
    KummerResult r;
    r.regime = Regime::asymptotic;
    r.value = gamma(b) * (t1 + t2);
    // measured against the envelope |t1| + |t2|, so zeros of M stay well posed
    const double env = std::abs(t1) + std::abs(t2);
    r.error = env > 0 ? (std::abs(t1) * e1 + std::abs(t2) * e2) / env + 1e-15 : 1.0;
    r.converged = r.error < 1e-10;
    return r;
}

inline KummerResult asymptotic_U(cplx a, cplx b, cplx z) {
    auto [s, e] = asymptotic_sum(a, a - b + 1.0, -1.0 / z);
    KummerResult r;
    r.regime = Regime::asymptotic;
    r.value = std::pow(z, -a) * s;
    r.error = e + 1e-15;
    r.converged = r.error < 1e-10;
    return r;
}

/// U(a, 1, z) from the logarithmic series, in quad precision.
inline KummerResult log_series_U_b1(cplx a, cplx z) {
    const qcomplex qa(a), qz(z);
    // sum_k (a)_k/(k!)^2 z^k and sum_k (a)_k/(k!)^2 z^k (sum_{i<k} 1/(a+i) - 2 H_k)
    qcomplex m(1), extra(0), term(1), inv_sum(0);
    __float128 harmonic = 0;
    double max_term = 1.0;
    const double az = std::abs(z);
    KummerResult r;
    r.regime = Regime::series;
    for (int k = 0; k < 4000; ++k) {
        const __float128 kk = k;
        inv_sum += qcomplex(1) / (qa + qcomplex(kk));
        harmonic += 1 / (kk + 1);
        term = term * (qa + qcomplex(kk)) / qcomplex((kk + 1) * (kk + 1)) * qz;
        m += term;
        const qcomplex c = inv_sum - qcomplex(2 * harmonic);
        extra += term * c;
        const double t = term.abs() * std::max(1.0, c.abs());
        if (t > max_term) max_term = t;
        if (k > az && t <= 1e-33 * std::max(m.abs(), extra.abs())) {
            r.converged = true;
            break;
        }
    }
    const cplx lead = std::log(z) + digamma(a) + 2.0 * kEulerGamma;
    const cplx total = lead * m.to_cplx() + extra.to_cplx();
    r.value = -rgamma(a) * total;
    const double mag = std::abs(total);
    r.error = mag > 0 ? max_term * 1.0e-33 * std::max(1.0, std::abs(lead)) / mag + 1e-15 : 1.0;
    if (r.error > 1e-10) r.converged = false;
    return r;
}

inline Regime pick(double az, const KummerOptions& opt) {
    if (opt.force != Regime::automatic) return opt.force;
    return az <= opt.switch_radius ? Regime::series : Regime::asymptotic;
}

} // namespace detail

/// Regular confluent hypergeometric function M(a, b, z) with regime info.
inline KummerResult kummer_M_eval(cplx a, cplx b, cplx z, const KummerOptions& opt = {}) {
    if (detail::is_nonpositive_integer(b)) throw DomainError("kummer_M: b is a non-positive integer");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("kummer_M: z not finite");
    if (z == 0.0) return {1.0, Regime::series, true, 0.0};
    const double az = std::abs(z);
    Regime reg = detail::pick(az, opt);
    KummerResult r = reg == Regime::series ? detail::series_M(a, b, z) : detail::asymptotic_M(a, b, z);
    if (!r.converged && opt.force == Regime::automatic) {
        // fall back to the other regime where it can still work
        if (reg == Regime::asymptotic && az <= opt.series_max_radius) {
            KummerResult s = detail::series_M(a, b, z);
            if (s.converged || s.error < r.error) r = s;
        } else if (reg == Regime::series) {
            KummerResult s = detail::asymptotic_M(a, b, z);
            if (s.converged || s.error < r.error) r = s;
        }
    }
    return r;
}

/// Irregular confluent hypergeometric function U(a, b, z), principal branch.
inline KummerResult kummer_U_eval(cplx a, cplx b, cplx z, const KummerOptions& opt = {}) {
    if (z == 0.0) throw DomainError("kummer_U: z must be non-zero");
    if (z.imag() == 0.0 && z.real() < 0.0) throw DomainError("kummer_U: z on the branch cut");
    const double az = std::abs(z);
    Regime reg = detail::pick(az, opt);
    auto series_U = [&]() -> KummerResult {
        const bool b_integer = b.imag() == 0.0 && b.real() == std::floor(b.real());
        if (b_integer) {
            if (b.real() == 1.0) return detail::log_series_U_b1(a, z);
            throw DomainError("kummer_U: integer b other than 1 not supported");
        }
        KummerResult m1 = detail::series_M(a, b, z);
        KummerResult m2 = detail::series_M(a - b + 1.0, 2.0 - b, z);
        const cplx t1 = gamma(1.0 - b) * rgamma(a - b + 1.0) * m1.value;
        const cplx t2 = gamma(b - 1.0) * rgamma(a) * std::pow(z, 1.0 - b) * m2.value;
        KummerResult r;
        r.regime = Regime::series;
        r.value = t1 + t2;
        const double env = std::abs(t1) + std::abs(t2);
        r.error = env > 0 ? (std::abs(t1) * m1.error + std::abs(t2) * m2.error) / env + 1e-14 : 1.0;
        r.converged = m1.converged && m2.converged && r.error < 1e-10;
        return r;
    };
    KummerResult r = reg == Regime::series ? series_U() : detail::asymptotic_U(a, b, z);
    if (!r.converged && opt.force == Regime::automatic) {
        if (reg == Regime::asymptotic && az <= opt.series_max_radius) {
            KummerResult s = series_U();
            if (s.converged || s.error < r.error) r = s;
        } else if (reg == Regime::series) {
            KummerResult s = detail::asymptotic_U(a, b, z);
            if (s.converged || s.error < r.error) r = s;
        }
    }
    return r;
}

/// Tolerance accepted by the throwing wrappers below.
inline constexpr double kKummerTolerance = 1e-6;

inline cplx kummer_M(cplx a, cplx b, cplx z, const KummerOptions& opt = {}) {
    KummerResult r = kummer_M_eval(a, b, z, opt);
    if (!(r.error <= kKummerTolerance)) throw NumericalError("kummer_M did not converge");
    return r.value;
}

inline cplx kummer_U(cplx a, cplx b, cplx z, const KummerOptions& opt = {}) {
    KummerResult r = kummer_U_eval(a, b, z, opt);
    if (!(r.error <= kKummerTolerance)) throw NumericalError("kummer_U did not converge");
    return r.value;
}

// ---------------------------------------------------------------------------
// Exponential integral
// ---------------------------------------------------------------------------

/// E1(z) by its continued fraction (modified Lentz), for |z| not small.
inline cplx expint_E1_cf(cplx z) {
    const double tiny = 1e-300;
    cplx b = z + 1.0;
    cplx c = 1.0 / tiny;
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const cplx del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) return h * std::exp(-z);
    }
    throw NumericalError("E1 continued fraction did not converge");
}

/// Exponential integral Ei(z) continued to the complex plane with the
/// principal logarithm: Ei(z) = gamma + log z + sum z^k/(k k!). Real on the
/// real axis (principal value for z < 0).
inline cplx expint_Ei(cplx z) {
    if (z == 0.0) throw DomainError("Ei: pole at 0");
    const double az = std::abs(z);
    const bool right_sector = z.real() > 0.0 && std::abs(z.imag()) <= z.real();
    const double side = z.imag() > 0.0 ? 1.0 : (z.imag() < 0.0 ? -1.0 : 0.0);
    if (az <= 4.0 || (right_sector && az <= 40.0)) {
        cplx sum = 0.0, term = 1.0;
        for (int k = 1; k < 500; ++k) {
            term *= z / static_cast<double>(k);
            const cplx add = term / static_cast<double>(k);
            sum += add;
            if (std::abs(add) < 1e-17 * std::abs(sum)) break;
        }
        // on the negative real axis take the real (principal value) branch
        const cplx lg = z.imag() == 0.0 ? cplx(std::log(az), 0.0) : std::log(z);
        return kEulerGamma + lg + sum;
    }
    if (right_sector) {
        // e^z/z sum k!/z^k, truncated at the smallest term
        cplx sum = 1.0, term = 1.0;
        for (int k = 1; k < 200; ++k) {
            const cplx next = term * static_cast<double>(k) / z;
            if (std::abs(next) > std::abs(term)) break;
            term = next;
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        return std::exp(z) / z * sum + cplx(0.0, side * kPi);
    }
    return -expint_E1_cf(-z) + cplx(0.0, side * kPi);
}

/// Logarithmic integral li(x) = Ei(log x), x > 0, x != 1.
inline double li(double x) {
    if (!(x > 0.0) || x == 1.0) throw DomainError("li: requires x > 0, x != 1");
    return expint_Ei(cplx(std::log(x), 0.0)).real();
}

} // namespace qfsim::special
