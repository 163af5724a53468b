/*
 * zeta.hpp - zeta zeros table, Riemann R and the truncated explicit formula
 *
 *   pi_T(x) = R(x) - sum_{k<=T} [ R(x^{rho_k}) + R(x^{conj rho_k}) ]
 *
 * R(x) is summed with the Gram series. For x^rho the Gram series needs
 * exp(|rho log x|) worth of cancellation, so the default route is
 * R(x^rho) = sum_n mu(n)/n Ei(rho log x / n), n <= log2 x, with each zero
 * folded against its conjugate (2 Re).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qfsim/error.hpp"
#include "qfsim/parallel.hpp"
#include "qfsim/special.hpp"

#ifndef QFSIM_DATA_DIR
#define QFSIM_DATA_DIR "data"
#endif

namespace qfsim::zeta {

using special::cplx;

// ---------------------------------------------------------------------------
// Zeros table
// ---------------------------------------------------------------------------

class ZetaZerosTable {
public:
    ZetaZerosTable() = default;
    explicit ZetaZerosTable(std::vector<double> heights) : heights_(std::move(heights)) { validate(); }

    static ZetaZerosTable load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw DomainError("cannot open zeta zeros file: " + path);
        std::vector<double> h;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            std::istringstream ss(line);
            double v;
            if (!(ss >> v)) throw DomainError(path + ":" + std::to_string(lineno) + ": not a number");
            h.push_back(v);
        }
        return ZetaZerosTable(std::move(h));
    }

    /// $QFSIM_ZEROS if set, else the bundled data file.
    static std::string default_path() {
        if (const char* env = std::getenv("QFSIM_ZEROS"); env && *env) return env;
        return std::string(QFSIM_DATA_DIR) + "/zeta_zeros.txt";
    }

    static const ZetaZerosTable& bundled() {
        static const ZetaZerosTable t = load(default_path());
        return t;
    }

    std::size_t count() const noexcept { return heights_.size(); }
    const std::vector<double>& heights() const noexcept { return heights_; }
    double operator[](std::size_t k) const { return heights_[k]; }

private:
    void validate() const {
        if (heights_.empty()) throw DomainError("zeta zeros table is empty");
        if (std::abs(heights_[0] - 14.134725141734693) > 1e-6)
            throw DomainError("zeta zeros table: first height is not 14.134725");
        for (std::size_t i = 1; i < heights_.size(); ++i)
            if (!(heights_[i] > heights_[i - 1]))
                throw DomainError("zeta zeros table not strictly increasing at entry " + std::to_string(i + 1));
    }

    std::vector<double> heights_;
};

// ---------------------------------------------------------------------------
// Riemann R
// ---------------------------------------------------------------------------

/// zeta(s) for real s > 1 (Borwein's alternating-series algorithm, n = 40).
inline double zeta_real(double s) {
    if (!(s > 1.0)) throw DomainError("zeta_real: s must exceed 1");
    constexpr int n = 40;
    // d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    double d[n + 1];
    double term = 1.0 / n; // i = 0 term of the sum, times n later
    double acc = term;
    d[0] = n * acc;
    for (int i = 1; i <= n; ++i) {
        term *= 4.0 * (n + i - 1) * (n - i + 1) / ((2.0 * i - 1) * (2.0 * i));
        acc += term;
        d[i] = n * acc;
    }
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        sum += sign * (d[k] - d[n]) / std::pow(k + 1.0, s);
    }
    return -sum / (d[n] * (1.0 - std::pow(2.0, 1.0 - s)));
}

namespace detail {

inline const std::vector<double>& zeta_integers() {
    // zeta(n + 1) for n = 0..400 (index 0 unused)
    static const std::vector<double> table = [] {
        std::vector<double> t(401, 0.0);
        for (int n = 1; n <= 400; ++n) t[n] = n + 1 >= 60 ? 1.0 + std::pow(2.0, -(n + 1.0)) : zeta_real(n + 1.0);
        return t;
    }();
    return table;
}

inline const std::vector<int>& mobius_table() {
    static const std::vector<int> mu = [] {
        const int n = 256;
        std::vector<int> m(n + 1, 1);
        std::vector<bool> comp(n + 1, false);
        m[0] = 0;
        for (int p = 2; p <= n; ++p) {
            if (comp[p]) continue;
            for (int k = p; k <= n; k += p) {
                if (k > p) comp[k] = true;
                m[k] = -m[k];
            }
            for (long k = static_cast<long>(p) * p; k <= n; k += static_cast<long>(p) * p) m[k] = 0;
        }
        return m;
    }();
    return mu;
}

} // namespace detail

inline int mobius(int n) {
    const auto& t = detail::mobius_table();
    if (n < 1 || n >= static_cast<int>(t.size())) throw DomainError("mobius: n out of table range");
    return t[static_cast<std::size_t>(n)];
}

/// R(x) = 1 + sum_{n>=1} (log x)^n / (n n! zeta(n+1)), summed until the tail
/// is below 1e-15 relative.
inline double riemann_R(double x) {
    if (!(x > 0.0)) throw DomainError("riemann_R: x must be > 0");
    const double L = std::log(x);
    const auto& z = detail::zeta_integers();
    double sum = 1.0, pw = 1.0; // pw = L^n / n!
    for (int n = 1; n < 400; ++n) {
        pw *= L / n;
        const double t = pw / (n * z[static_cast<std::size_t>(n)]);
        sum += t;
        if (n > std::abs(L) && std::abs(t) < 1e-17 * std::abs(sum)) return sum;
    }
    throw NumericalError("riemann_R: Gram series did not converge");
}

/// Gram series with a complex logarithm, R(w) for log w = logw. The flag is
/// raised when the largest term exceeds the double-precision budget for a
/// result accurate to `tolerance`.
struct GramResult {
    cplx value;
    bool precision_loss = false;
    double max_term = 0.0;
};

inline GramResult riemann_R_gram(cplx logw, double tolerance = 1e-6) {
    const auto& z = detail::zeta_integers();
    cplx sum = 1.0, pw = 1.0;
    GramResult r;
    const double a = std::abs(logw);
    for (int n = 1; n < 400; ++n) {
        pw *= logw / static_cast<double>(n);
        const cplx t = pw / (n * z[static_cast<std::size_t>(n)]);
        sum += t;
        r.max_term = std::max(r.max_term, std::abs(t));
        if (n > a && std::abs(t) < 1e-17 * std::max(1.0, std::abs(sum))) break;
        if (n == 399) r.precision_loss = true;
    }
    r.value = sum;
    if (r.max_term * 2.2e-16 > tolerance * std::max(1.0, std::abs(sum))) r.precision_loss = true;
    return r;
}

/// sum_{n<=nmax} mu(n)/n Ei(rho log x / n) for rho = 1/2 + i gamma.
inline cplx R_of_x_rho(double logx, double gamma, int nmax) {
    cplx s = 0.0;
    const cplx rho(0.5, gamma);
    for (int n = 1; n <= nmax; ++n) {
        const int m = mobius(n);
        if (m == 0) continue;
        s += static_cast<double>(m) / n * special::expint_Ei(rho * (logx / n));
    }
    return s;
}

/// Its derivative with respect to log x: sum mu(n)/n e^{rho u/n} / u.
inline cplx dR_of_x_rho(double logx, double gamma, int nmax) {
    cplx s = 0.0;
    const cplx rho(0.5, gamma);
    for (int n = 1; n <= nmax; ++n) {
        const int m = mobius(n);
        if (m == 0) continue;
        s += static_cast<double>(m) / n * std::exp(rho * (logx / n));
    }
    return s / logx;
}

inline int mobius_terms(double x) { return std::max(1, static_cast<int>(std::floor(std::log2(x)))); }

enum class CorrectionMethod { none, gram, mobius_ei, tabulated };

struct RiemannApprox {
    double x = 0.0;
    int T = 0;
    double R_value = 0.0;
    double eta_T = 0.0;       // -sum_k R(x^rho_k) / R(x), conjugates folded
    double pi_estimate = 0.0; // R(x) (1 + eta_T)
    CorrectionMethod method = CorrectionMethod::none;
    bool precision_loss = false;
};

/// Oscillatory correction -sum_{k<=T} 2 Re R(x^{rho_k}).
inline double explicit_correction(double x, const ZetaZerosTable& zeros, int T, CorrectionMethod* used = nullptr,
                                  bool* lossy = nullptr) {
    if (T < 0 || static_cast<std::size_t>(T) > zeros.count())
        throw LimitExceeded("explicit formula: T exceeds zeros table", static_cast<std::uint64_t>(std::max(T, 0)),
                            zeros.count());
    const double L = std::log(x);
    double corr = 0.0;
    bool gram_ok = true;
    // The Gram route is taken only if every term stays inside the budget.
    std::vector<double> gram_terms;
    for (int k = 0; k < T && gram_ok; ++k) {
        GramResult g = riemann_R_gram(cplx(0.5, zeros[static_cast<std::size_t>(k)]) * L);
        if (g.precision_loss) gram_ok = false;
        gram_terms.push_back(2.0 * g.value.real());
    }
    if (T > 0 && gram_ok) {
        for (double t : gram_terms) corr -= t;
        if (used) *used = CorrectionMethod::gram;
        return corr;
    }
    if (lossy) *lossy = T > 0;
    const int nmax = mobius_terms(x);
    for (int k = 0; k < T; ++k) corr -= 2.0 * R_of_x_rho(L, zeros[static_cast<std::size_t>(k)], nmax).real();
    if (used) *used = T > 0 ? CorrectionMethod::mobius_ei : CorrectionMethod::none;
    return corr;
}

inline RiemannApprox riemann_approx(double x, const ZetaZerosTable& zeros, int T) {
    if (!(x >= 2.0)) throw DomainError("pi_approx: x must be >= 2");
    RiemannApprox r;
    r.x = x;
    r.T = T;
    r.R_value = riemann_R(x);
    bool lossy = false;
    CorrectionMethod used = CorrectionMethod::none;
    const double corr = T > 0 ? explicit_correction(x, zeros, T, &used, &lossy) : 0.0;
    r.method = used;
    r.precision_loss = lossy;
    r.eta_T = corr / r.R_value;
    r.pi_estimate = r.R_value + corr;
    return r;
}

inline double pi_approx(double x, const ZetaZerosTable& zeros, int T) {
    return riemann_approx(x, zeros, T).pi_estimate;
}

// ---------------------------------------------------------------------------
// Tabulated explicit formula
// ---------------------------------------------------------------------------

/// The explicit-formula correction tabulated on a uniform grid in log x and
/// interpolated by cubic Hermite with exact derivatives. Used where the same
/// T is evaluated many times (inversion, Monte-Carlo). R(x) itself is always
/// evaluated directly.
class ExplicitFormula {
public:
    ExplicitFormula(const ZetaZerosTable& zeros, int T) : zeros_(&zeros), T_(T) {
        if (T < 0 || static_cast<std::size_t>(T) > zeros.count())
            throw LimitExceeded("explicit formula: T exceeds zeros table",
                                static_cast<std::uint64_t>(std::max(T, 0)), zeros.count());
    }

    int T() const noexcept { return T_; }
    const ZetaZerosTable& zeros() const noexcept { return *zeros_; }

    /// Highest zero height in use (0 for T = 0).
    double max_height() const { return T_ > 0 ? (*zeros_)[static_cast<std::size_t>(T_ - 1)] : 0.0; }

    /// Tabulates the correction for x in [x_lo, x_hi]. Grid spacing resolves
    /// the fastest oscillation, 2 pi / gamma_T in log x, with `per_period` nodes.
    void tabulate(double x_lo, double x_hi, unsigned threads = 0, int per_period = 32) {
        if (T_ == 0) return;
        if (!(x_lo >= 2.0) || !(x_hi > x_lo)) throw DomainError("tabulate: bad range");
        const double period = 2.0 * special::kPi / max_height();
        h_ = period / per_period;
        u0_ = std::log(x_lo);
        const double u1 = std::log(x_hi);
        const std::size_t n = static_cast<std::size_t>(std::ceil((u1 - u0_) / h_)) + 1;
        val_.assign(n, 0.0);
        der_.assign(n, 0.0);
        parallel_for(n, threads, [&](std::size_t i) {
            const double u = u0_ + h_ * static_cast<double>(i);
            const int nmax = mobius_terms(std::exp(u));
            double v = 0.0, d = 0.0;
            for (int k = 0; k < T_; ++k) {
                const double g = (*zeros_)[static_cast<std::size_t>(k)];
                v -= 2.0 * R_of_x_rho(u, g, nmax).real();
                d -= 2.0 * dR_of_x_rho(u, g, nmax).real();
            }
            val_[i] = v;
            der_[i] = d;
        });
    }

    bool tabulated() const noexcept { return !val_.empty(); }
    double table_lo() const { return std::exp(u0_); }
    double table_hi() const { return std::exp(u0_ + h_ * static_cast<double>(val_.size() - 1)); }

    double correction(double x) const {
        if (T_ == 0) return 0.0;
        const double u = std::log(x);
        if (!val_.empty()) {
            const double t = (u - u0_) / h_;
            if (t >= 0.0 && t <= static_cast<double>(val_.size() - 1)) {
                std::size_t i = static_cast<std::size_t>(t);
                if (i + 1 >= val_.size()) i = val_.size() - 2;
                const double s = t - static_cast<double>(i);
                const double s2 = s * s, s3 = s2 * s;
                const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
                const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
                return h00 * val_[i] + h10 * h_ * der_[i] + h01 * val_[i + 1] + h11 * h_ * der_[i + 1];
            }
        }
        return explicit_correction(x, *zeros_, T_);
    }

    double pi(double x) const {
        if (!(x >= 2.0)) throw DomainError("pi_approx: x must be >= 2");
        return riemann_R(x) + correction(x);
    }

private:
    const ZetaZerosTable* zeros_;
    int T_;
    double u0_ = 0.0, h_ = 0.0;
    std::vector<double> val_, der_;
};

} // namespace qfsim::zeta
