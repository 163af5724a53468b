/*
 * quantum_sieve.hpp - gauges, energy levels, x(E) inversion, Monte-Carlo
 * sampling of the simulator spectrum and kernel-density averages.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "qfsim/error.hpp"
#include "qfsim/parallel.hpp"
#include "qfsim/primes.hpp"
#include "qfsim/zeta.hpp"

namespace qfsim::sieve {

using u64 = std::uint64_t;

inline constexpr double kEmax = 9.0 / 8.0;

// ---------------------------------------------------------------------------
// Gauge
// ---------------------------------------------------------------------------

struct GaugeConfig {
    double N = 0.0;
    double G = 0.0;
    double nu = 3.0 / 8.0;
    u64 B_G = 0;
    double q_G = 0.0;
    double chi = 0.0;
    double lambda = 0.0;
    double k_m = 0.0;
    double E_max = kEmax;

    double log_sqrt_N() const { return 0.5 * std::log(N); }
};

/// Builds the gauge of exponent G for N. Rejected (DomainError) when
/// B_G >= sqrt(N)/10 or lambda >= 0.1.
inline GaugeConfig make_gauge(double N, double G, double nu = 3.0 / 8.0) {
    if (!(N >= 1e4)) throw DomainError("make_gauge: N must be >= 1e4");
    if (!(G >= 0.0)) throw DomainError("make_gauge: G must be >= 0");
    if (!(nu > 0.0)) throw DomainError("make_gauge: nu must be > 0");
    GaugeConfig g;
    g.N = N;
    g.G = G;
    g.nu = nu;
    const double L = g.log_sqrt_N();
    const double sqrtN = std::sqrt(N);
    g.B_G = primes::nearest_prime(nu * std::cbrt(N) * std::pow(L, G));
    g.q_G = (3.0 / 8.0) / nu * std::pow(N, 1.0 / 6.0) / std::pow(L, G);
    g.chi = -g.q_G * g.q_G + std::log(g.q_G);
    g.lambda = g.q_G * g.q_G / sqrtN;
    g.k_m = 1.5 * special::kPi * std::pow(L, 3.0 * G);
    if (!(static_cast<double>(g.B_G) < sqrtN / 10.0))
        throw DomainError("gauge rejected: B_G = " + std::to_string(g.B_G) + " is not << sqrt(N)");
    if (!(g.lambda < 0.1)) throw DomainError("gauge rejected: lambda = " + std::to_string(g.lambda) + " is not << 1");
    if (!(g.k_m > 0.0)) throw DomainError("gauge rejected: k_m <= 0");
    return g;
}

/// q_m(k) = q_G + 2/3 lambda k.
inline double qm_of_k(const GaugeConfig& g, double k) {
    if (std::abs(k) > g.k_m) throw DomainError("qm_of_k: |k| exceeds k_m");
    return g.q_G + 2.0 / 3.0 * g.lambda * k;
}

/// Relative gap between q_m(k)^2 - q_G^2 and 2 pi k / k_m.
inline double phase_identity_gap(const GaugeConfig& g, double k) {
    const double q = qm_of_k(g, k);
    const double lhs = q * q - g.q_G * g.q_G;
    const double rhs = 2.0 * special::kPi * k / g.k_m;
    return rhs == 0.0 ? std::abs(lhs) : std::abs(lhs - rhs) / std::abs(rhs);
}

struct EnergyLevel {
    int k = 0;
    double E = 1.0;
};

/// E_k = 1 + (k / k_m)(2 pi / log q_G) for k = 0..floor(k_m), up to E_max.
inline std::vector<EnergyLevel> energy_levels(const GaugeConfig& g) {
    std::vector<EnergyLevel> out;
    const double spacing = 2.0 * special::kPi / (g.k_m * std::log(g.q_G));
    const int kmax = static_cast<int>(std::floor(g.k_m));
    for (int k = 0; k <= kmax; ++k) {
        const double E = 1.0 + k * spacing;
        if (E > g.E_max) break;
        out.push_back({k, E});
    }
    return out;
}

inline double level_spacing(const GaugeConfig& g) { return 2.0 * special::kPi / (g.k_m * std::log(g.q_G)); }

/// ceil((log sqrt N)^3).
inline u64 measurements_budget(double N) {
    if (!(N > 1.0)) throw DomainError("measurements_budget: N must exceed 1");
    const double L = 0.5 * std::log(N);
    const double c = L * L * L;
    // guard against c landing a hair above an integer through rounding
    const double r = std::round(c);
    if (std::abs(c - r) < 1e-9 * std::max(1.0, c)) return static_cast<u64>(r);
    return static_cast<u64>(std::ceil(c));
}

// ---------------------------------------------------------------------------
// x(E) inversion
// ---------------------------------------------------------------------------

struct InversionOptions {
    double x_lo = 0.0;            // 0: fourth root of N
    double x_hi = 0.0;            // 0: sqrt N
    double rel_tolerance = 1e-12; // bisection stops at this relative bracket width
    int nodes_per_period = 8;     // scan density against the fastest oscillation
};

struct InversionResult {
    double x = 0.0;
    std::vector<double> roots; // every root found on the interval, ascending
    double smooth_root = 0.0;  // the T = 0 root used for selection (0 if none)
};

namespace detail {

template <typename Fn>
std::vector<double> scan_roots(Fn&& f, double lo, double hi, double log_step, double rel_tol) {
    std::vector<double> roots;
    const double u0 = std::log(lo), u1 = std::log(hi);
    const std::size_t n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil((u1 - u0) / log_step)));
    double a = lo, fa = f(lo);
    if (fa == 0.0) roots.push_back(lo);
    for (std::size_t i = 1; i <= n; ++i) {
        const double b = i == n ? hi : std::exp(u0 + (u1 - u0) * static_cast<double>(i) / static_cast<double>(n));
        const double fb = f(b);
        if (fb == 0.0) {
            roots.push_back(b);
        } else if (fa != 0.0 && (fa < 0.0) != (fb < 0.0)) {
            double l = a, h = b, fl = fa;
            while (h - l > rel_tol * h) {
                const double m = 0.5 * (l + h);
                const double fm = f(m);
                if (fm == 0.0) {
                    l = h = m;
                    break;
                }
                if ((fm < 0.0) == (fl < 0.0)) {
                    l = m;
                    fl = fm;
                } else {
                    h = m;
                }
            }
            roots.push_back(0.5 * (l + h));
        }
        a = b;
        fa = fb;
    }
    return roots;
}

} // namespace detail

/// Solves pi_T(x) pi_T(N/x) / j^2 = E for x on (x_lo, x_hi] by scanning for
/// sign changes and bisecting. When several roots exist, the one closest (in
/// log x) to the T = 0 root is returned; all roots are reported.
inline InversionResult invert_x_of_E(double E, double N, double j, const zeta::ExplicitFormula& ef,
                                     const InversionOptions& opt = {}) {
    if (!(E > 0.0) || !std::isfinite(E)) throw DomainError("invert_x_of_E: E must be positive");
    if (!(N >= 16.0) || !(j > 0.0)) throw DomainError("invert_x_of_E: bad N or j");
    const double lo = opt.x_lo > 0 ? opt.x_lo : std::pow(N, 0.25);
    const double hi = opt.x_hi > 0 ? opt.x_hi : std::sqrt(N);
    if (!(lo >= 2.0) || !(hi > lo) || N / hi < 2.0) throw DomainError("invert_x_of_E: bad search interval");
    const double j2 = j * j;
    auto smooth = [&](double x) { return zeta::riemann_R(x) * zeta::riemann_R(N / x) / j2 - E; };
    auto full = [&](double x) { return ef.pi(x) * ef.pi(N / x) / j2 - E; };
    InversionResult r;
    const auto s_roots = detail::scan_roots(smooth, lo, hi, 0.01, opt.rel_tolerance);
    if (!s_roots.empty()) r.smooth_root = s_roots.back();
    if (ef.T() == 0) {
        r.roots = s_roots;
    } else {
        const double period = 2.0 * special::kPi / ef.max_height();
        r.roots = detail::scan_roots(full, lo, hi, std::min(0.01, period / opt.nodes_per_period), opt.rel_tolerance);
    }
    if (r.roots.empty())
        throw DomainError("invert_x_of_E: no bracket, E = " + std::to_string(E) + " not attained on the interval");
    if (r.smooth_root > 0.0) {
        const double ls = std::log(r.smooth_root);
        r.x = *std::min_element(r.roots.begin(), r.roots.end(), [&](double a, double b) {
            return std::abs(std::log(a) - ls) < std::abs(std::log(b) - ls);
        });
    } else {
        r.x = r.roots.back();
    }
    return r;
}

// ---------------------------------------------------------------------------
// Monte-Carlo spectrum
// ---------------------------------------------------------------------------

inline std::vector<double> default_G_grid() { return {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}; }

struct MonteCarloConfig {
    u64 samples = 0;          // 0: measurements_budget(N)
    double window_scale = 1.0; // half-width of the sqrt(N') window in units of log sqrt N
    u64 seed = 42;
    std::vector<double> G_list = default_G_grid();
    unsigned threads = 0;
};

struct MonteCarloSample {
    u64 index = 0;     // sample number
    double sqrtN = 0.0; // drawn sqrt(N')
    double G = 0.0;
    int k = 0;
    double E = 0.0;
    double x = 0.0;
};

struct MonteCarloResult {
    std::vector<MonteCarloSample> points;
    u64 samples = 0;
    u64 failed_inversions = 0;
    u64 rejected_gauges = 0;
};

/// splitmix64 finaliser, used to derive independent per-sample seeds.
inline u64 splitmix64(u64 x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// xi uniform on (-1, 1) for sample `index`; identical regardless of threading.
inline double sample_xi(u64 seed, u64 index) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(index)));
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53; // [0, 1)
    return 2.0 * u - 1.0;
}

/// Draws sqrt(N') = sqrt(N) + xi log sqrt(N), rebuilds every gauge, and
/// inverts each of its levels to x. The explicit formula should already be
/// tabulated over the x and N/x range for speed.
inline MonteCarloResult montecarlo_spectrum(double N, double j, const zeta::ExplicitFormula& ef,
                                            const MonteCarloConfig& mc) {
    if (!(N >= 1e4)) throw DomainError("montecarlo: N must be >= 1e4");
    MonteCarloResult res;
    res.samples = mc.samples ? mc.samples : measurements_budget(N);
    const double sqrtN = std::sqrt(N);
    const double half = mc.window_scale * std::log(sqrtN);
    struct Slot {
        std::vector<MonteCarloSample> pts;
        u64 failed = 0, rejected = 0;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(res.samples));
    parallel_for(slots.size(), mc.threads, [&](std::size_t i) {
        Slot& s = slots[i];
        const double root = sqrtN + sample_xi(mc.seed, i) * half;
        const double Np = root * root;
        for (double G : mc.G_list) {
            GaugeConfig g;
            try {
                g = make_gauge(Np, G);
            } catch (const DomainError&) {
                ++s.rejected;
                continue;
            }
            for (const auto& lvl : energy_levels(g)) {
                try {
                    InversionOptions opt;
                    opt.x_lo = std::max(std::pow(Np, 0.25), static_cast<double>(g.B_G));
                    auto inv = invert_x_of_E(lvl.E, Np, j, ef, opt);
                    s.pts.push_back({i, root, G, lvl.k, lvl.E, inv.x});
                } catch (const DomainError&) {
                    ++s.failed;
                }
            }
        }
    });
    for (auto& s : slots) {
        res.points.insert(res.points.end(), s.pts.begin(), s.pts.end());
        res.failed_inversions += s.failed;
        res.rejected_gauges += s.rejected;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Kernel density average
// ---------------------------------------------------------------------------

struct KDEEstimate {
    int k = 0;
    std::vector<double> weights;
    double mean = 0.0;
    double width2 = 0.0;
    std::vector<double> values;
};

/// Equal-weight mixture per level: <E_k> = sum v E, width^2 = sum v E^2 - <E>^2.
inline std::vector<KDEEstimate> kde_average(const std::map<int, std::vector<double>>& by_level) {
    std::vector<KDEEstimate> out;
    for (const auto& [k, vals] : by_level) {
        if (vals.empty()) throw DomainError("kde_average: level without samples");
        KDEEstimate e;
        e.k = k;
        e.values = vals;
        const double w = 1.0 / static_cast<double>(vals.size());
        e.weights.assign(vals.size(), w);
        double m = 0.0;
        for (double v : vals) m += w * v;
        double var = 0.0;
        for (double v : vals) var += w * (v - m) * (v - m);
        e.mean = m;
        e.width2 = std::max(0.0, var);
        out.push_back(std::move(e));
    }
    return out;
}

/// Silverman's rule of thumb, 0.9 min(sd, IQR/1.34) n^{-1/5}.
inline double silverman_bandwidth(std::vector<double> v) {
    if (v.size() < 2) return 1.0;
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    const double sd = std::sqrt(var / (n - 1));
    auto quant = [&](double p) {
        const double pos = p * (n - 1);
        const std::size_t i = static_cast<std::size_t>(pos);
        const double f = pos - static_cast<double>(i);
        return i + 1 < v.size() ? v[i] * (1 - f) + v[i + 1] * f : v[i];
    };
    const double iqr = quant(0.75) - quant(0.25);
    double s = iqr > 0 ? std::min(sd, iqr / 1.34) : sd;
    if (!(s > 0)) s = std::max(std::abs(mean) * 1e-3, 1e-12);
    return 0.9 * s * std::pow(n, -0.2);
}

/// Gaussian kernel density of `values` at `at`.
inline double kde_density(const std::vector<double>& values, double bandwidth, double at) {
    if (values.empty() || !(bandwidth > 0)) throw DomainError("kde_density: need samples and bandwidth > 0");
    double s = 0.0;
    for (double v : values) {
        const double z = (at - v) / bandwidth;
        s += std::exp(-0.5 * z * z);
    }
    return s / (static_cast<double>(values.size()) * bandwidth * std::sqrt(2.0 * special::kPi));
}

} // namespace qfsim::sieve
