/*
 * ensemble.hpp - factorization ensembles.
 *
 * The ensemble of index j holds every product N = x*y of primes x <= y with
 * pi(floor(sqrt N)) = j. Each entry carries its energy pi(x)pi(y)/j^2 and the
 * phase-space pair q = (pi(x)+pi(y))/2j, p = (pi(y)-pi(x))/2j, all exact.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qfsim/error.hpp"
#include "qfsim/primes.hpp"
#include "qfsim/rational.hpp"

namespace qfsim::ensemble {

using primes::PrimeEngine;
using u64 = std::uint64_t;

struct EnsembleEntry {
    u64 x = 0;
    u64 y = 0;
    u64 N = 0;
    u64 j = 0;
    u64 pix = 0;
    u64 piy = 0;
    Rational E;
    Rational q;
    Rational p;
};

struct EnsembleQuery {
    u64 j = 0;
    std::optional<u64> x_min;
    std::optional<u64> x_max;
    /// Optional Monte-Carlo vicinity: keep only entries with
    /// |sqrt(N_k) - sqrt(center)| < log sqrt(center).
    std::optional<u64> vicinity_of;
};

struct SpectrumPoint {
    Rational E;
    u64 N = 0;
};

/// pi(floor(sqrt N)).
inline u64 sqrt_index(const PrimeEngine& engine, u64 N) {
    if (N < 4) throw DomainError("sqrt_index: N must be >= 4");
    return engine.pi_value(primes::isqrt(N));
}

namespace detail {

inline void require_prime(u64 v, const char* what) {
    if (!primes::is_prime(v)) throw DomainError(std::string(what) + " is not prime: " + std::to_string(v));
}

inline Rational to_rational(u64 v) {
    if (v > static_cast<u64>(INT64_MAX)) throw NumericalError("value does not fit a rational");
    return Rational(static_cast<std::int64_t>(v));
}

inline Rational energy_from_pi(u64 pix, u64 piy, u64 j) {
    return Rational::make(static_cast<__int128>(pix) * piy, static_cast<__int128>(j) * j);
}

inline std::pair<Rational, Rational> coords_from_pi(u64 pix, u64 piy, u64 j) {
    const __int128 den = static_cast<__int128>(2) * j;
    return {Rational::make(static_cast<__int128>(pix) + piy, den),
            Rational::make(static_cast<__int128>(piy) - static_cast<__int128>(pix), den)};
}

} // namespace detail

/// pi(x) pi(y) / j^2 as an exact rational.
inline Rational energy(const PrimeEngine& engine, u64 x, u64 y, u64 j) {
    detail::require_prime(x, "x");
    detail::require_prime(y, "y");
    if (j == 0) throw DomainError("energy: j must be >= 1");
    return detail::energy_from_pi(engine.pi_value(x), engine.pi_value(y), j);
}

/// (q, p) with q^2 - p^2 = energy(x, y, j).
inline std::pair<Rational, Rational> phase_coords(const PrimeEngine& engine, u64 x, u64 y, u64 j) {
    detail::require_prime(x, "x");
    detail::require_prime(y, "y");
    if (x > y) throw DomainError("phase_coords: requires x <= y");
    if (j == 0) throw DomainError("phase_coords: j must be >= 1");
    return detail::coords_from_pi(engine.pi_value(x), engine.pi_value(y), j);
}

inline EnsembleEntry make_entry(u64 x, u64 y, u64 j, u64 pix, u64 piy) {
    EnsembleEntry e;
    e.x = x;
    e.y = y;
    e.N = x * y;
    e.j = j;
    e.pix = pix;
    e.piy = piy;
    e.E = detail::energy_from_pi(pix, piy, j);
    auto [q, p] = detail::coords_from_pi(pix, piy, j);
    e.q = q;
    e.p = p;
    return e;
}

/// All entries of the ensemble of index query.j inside the query window,
/// sorted by N then x.
///
/// For each prime x the partner range is [ceil(p_j^2/x), (p_{j+1}^2-1)/x],
/// where p_j is the j-th prime. The pi values at the start of every partner
/// range are obtained in one ascending sweep.
inline std::vector<EnsembleEntry> enumerate_ensemble(const PrimeEngine& engine, const EnsembleQuery& query) {
    if (query.j == 0) throw DomainError("ensemble: j must be >= 1");
    std::vector<EnsembleEntry> out;
    const u64 pj = engine.nth_prime(query.j);
    const u64 pj1 = engine.nth_prime(query.j + 1);
    const u64 n_lo = pj * pj;          // smallest N in the ensemble
    const u64 n_hi = pj1 * pj1 - 1;    // largest N in the ensemble
    u64 x_lo = std::max<u64>(query.x_min.value_or(2), 2);
    u64 x_hi = std::min<u64>(query.x_max.value_or(pj), pj);
    if (x_lo > x_hi) return out;

    // Optional vicinity window on sqrt(N), turned into bounds on N.
    u64 win_lo = n_lo, win_hi = n_hi;
    if (query.vicinity_of) {
        const double c = static_cast<double>(*query.vicinity_of);
        if (c < 4) throw DomainError("ensemble: vicinity centre must be >= 4");
        const long double s = std::sqrt(static_cast<long double>(c));
        const long double w = std::log(s);
        const long double a = s - w, b = s + w;
        const long double lo2 = a > 0 ? a * a : 0.0L;
        const long double hi2 = b * b;
        win_lo = std::max<u64>(win_lo, static_cast<u64>(std::floor(lo2)) + 1);
        win_hi = std::min<u64>(win_hi, static_cast<u64>(std::ceil(hi2)) - 1);
        if (win_lo > win_hi) return out;
    }

    const auto xs = engine.primes_in(x_lo, x_hi);
    struct Span {
        u64 x, a, b;
    };
    std::vector<Span> spans;
    spans.reserve(xs.size());
    for (u64 x : xs) {
        u64 a = std::max<u64>((win_lo + x - 1) / x, x);
        u64 b = win_hi / x;
        if (a <= b) spans.push_back({x, a, b});
    }
    if (spans.empty()) return out;
    const u64 ymax = std::max_element(spans.begin(), spans.end(), [](const Span& l, const Span& r) {
                         return l.b < r.b;
                     })->b;
    if (ymax > primes::kSweepLimit)
        throw LimitExceeded("ensemble partner primes beyond engine range", ymax, primes::kSweepLimit);

    // pi(a - 1) for every span, via an ascending sweep.
    std::vector<std::size_t> order(spans.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return spans[l].a < spans[r].a; });
    std::vector<u64> starts(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) starts[i] = spans[order[i]].a - 1;
    const auto pis = engine.pi_at(starts);
    std::vector<u64> pi_before(spans.size());
    for (std::size_t i = 0; i < order.size(); ++i) pi_before[order[i]] = pis[i];

    for (std::size_t i = 0; i < spans.size(); ++i) {
        const Span& s = spans[i];
        const u64 pix = engine.pi_value(s.x);
        u64 piy = pi_before[i];
        for (u64 y : engine.primes_in(s.a, s.b)) {
            ++piy;
            out.push_back(make_entry(s.x, y, query.j, pix, piy));
        }
    }
    std::sort(out.begin(), out.end(), [](const EnsembleEntry& l, const EnsembleEntry& r) {
        return l.N != r.N ? l.N < r.N : l.x < r.x;
    });
    return out;
}

inline std::vector<SpectrumPoint> spectrum_points(const PrimeEngine& engine, const EnsembleQuery& query) {
    std::vector<SpectrumPoint> out;
    for (const auto& e : enumerate_ensemble(engine, query)) out.push_back({e.E, e.N});
    return out;
}

} // namespace qfsim::ensemble
