/*
 * density.hpp - (E, x) density maps and their comparison.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qfsim/ensemble.hpp"
#include "qfsim/error.hpp"
#include "qfsim/quantum_sieve.hpp"

namespace qfsim::density {

struct Binning {
    double E_lo = 1.0, E_hi = 9.0 / 8.0;
    std::size_t nE = 16;
    double x_lo = 2.0, x_hi = 1e5;
    std::size_t nx = 16;
    bool log_x = true;

    bool operator==(const Binning&) const = default;

    double x_edge(std::size_t i) const {
        const double t = static_cast<double>(i) / static_cast<double>(nx);
        return log_x ? std::exp(std::log(x_lo) + t * (std::log(x_hi) - std::log(x_lo))) : x_lo + t * (x_hi - x_lo);
    }
    double E_edge(std::size_t i) const {
        return E_lo + (E_hi - E_lo) * static_cast<double>(i) / static_cast<double>(nE);
    }
};

/// Row-major over E: cell (iE, ix) at iE * nx + ix.
struct Histogram2D {
    Binning bins;
    std::vector<double> mass;
    std::size_t count = 0;   // points binned
    std::size_t outside = 0; // points outside the grid

    explicit Histogram2D(const Binning& b = {}) : bins(b), mass(b.nE * b.nx, 0.0) {
        if (b.nE == 0 || b.nx == 0 || !(b.E_hi > b.E_lo) || !(b.x_hi > b.x_lo) || (b.log_x && !(b.x_lo > 0)))
            throw DomainError("histogram: invalid binning");
    }

    void add(double E, double x, double w = 1.0) {
        if (!(E >= bins.E_lo && E <= bins.E_hi && x >= bins.x_lo && x <= bins.x_hi)) {
            ++outside;
            return;
        }
        auto idx = [](double t, std::size_t n) {
            std::size_t i = static_cast<std::size_t>(t * static_cast<double>(n));
            return std::min(i, n - 1);
        };
        const double tE = (E - bins.E_lo) / (bins.E_hi - bins.E_lo);
        const double tx = bins.log_x ? (std::log(x) - std::log(bins.x_lo)) / (std::log(bins.x_hi) - std::log(bins.x_lo))
                                     : (x - bins.x_lo) / (bins.x_hi - bins.x_lo);
        mass[idx(tE, bins.nE) * bins.nx + idx(tx, bins.nx)] += w;
        ++count;
    }

    double total() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }

    void normalize() {
        const double t = total();
        if (!(t > 0)) throw NumericalError("histogram: nothing to normalize");
        for (double& m : mass) m /= t;
    }

    double at(std::size_t iE, std::size_t ix) const { return mass[iE * bins.nx + ix]; }
};

/// Normalized map of the classical ensemble entries (exact E, x).
inline Histogram2D classical_density(const primes::PrimeEngine& engine, std::uint64_t j, const Binning& b) {
    ensemble::EnsembleQuery q;
    q.j = j;
    q.x_min = static_cast<std::uint64_t>(std::max(2.0, std::floor(b.x_lo)));
    Histogram2D h(b);
    for (const auto& e : ensemble::enumerate_ensemble(engine, q)) h.add(e.E.to_double(), static_cast<double>(e.x));
    if (h.count == 0) throw NumericalError("classical density: no ensemble entries inside the grid");
    h.normalize();
    return h;
}

/// Normalized map of Monte-Carlo (E, x) samples.
inline Histogram2D quantum_density(const sieve::MonteCarloResult& mc, const Binning& b) {
    if (mc.points.empty()) throw NumericalError("quantum density: no successful inversions");
    Histogram2D h(b);
    for (const auto& p : mc.points) h.add(p.E, p.x);
    if (h.count == 0) throw NumericalError("quantum density: no samples inside the grid");
    h.normalize();
    return h;
}

struct Comparison {
    double rank_correlation = 0.0; // Spearman, average ranks for ties
    double jensen_shannon = 0.0;   // base 2, in [0, 1]
    double overlap = 0.0;          // sum of min(a, b)
};

namespace detail {

inline std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t k = i;
        while (k + 1 < idx.size() && v[idx[k + 1]] == v[idx[i]]) ++k;
        const double avg = 0.5 * static_cast<double>(i + k) + 1.0;
        for (std::size_t m = i; m <= k; ++m) r[idx[m]] = avg;
        i = k + 1;
    }
    return r;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0 || sbb == 0) return saa == sbb && a == b ? 1.0 : 0.0;
    return sab / std::sqrt(saa * sbb);
}

} // namespace detail

inline Comparison compare_densities(const Histogram2D& a, const Histogram2D& b) {
    if (!(a.bins == b.bins)) throw DomainError("compare_densities: binning mismatch");
    Comparison c;
    c.rank_correlation = detail::pearson(detail::average_ranks(a.mass), detail::average_ranks(b.mass));
    double js = 0.0, ov = 0.0;
    for (std::size_t i = 0; i < a.mass.size(); ++i) {
        const double p = a.mass[i], q = b.mass[i], m = 0.5 * (p + q);
        if (p > 0) js += 0.5 * p * std::log2(p / m);
        if (q > 0) js += 0.5 * q * std::log2(q / m);
        ov += std::min(p, q);
    }
    c.jensen_shannon = std::max(0.0, js);
    c.overlap = ov;
    return c;
}

} // namespace qfsim::density
