#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "qfsim/ensemble.hpp"

using namespace qfsim;
using namespace qfsim::ensemble;

namespace {

const PrimeEngine& engine() {
    static PrimeEngine e(u64{1} << 22);
    return e;
}

bool trial_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

u64 count_primes_upto(u64 n) {
    u64 c = 0;
    for (u64 k = 2; k <= n; ++k) c += trial_prime(k);
    return c;
}

u64 nth_by_scan(u64 n) {
    u64 c = 0;
    for (u64 k = 2;; ++k)
        if (trial_prime(k) && ++c == n) return k;
}

// Exhaustive factorization of every N with p_j^2 <= N < p_{j+1}^2.
std::vector<std::pair<u64, u64>> brute_force(u64 j) {
    u64 a = nth_by_scan(j), b = nth_by_scan(j + 1);
    std::vector<std::pair<u64, u64>> out;
    for (u64 N = a * a; N < b * b; ++N) {
        for (u64 x = 2; x * x <= N; ++x) {
            if (N % x) continue;
            if (trial_prime(x) && trial_prime(N / x)) out.emplace_back(N, x);
            break; // smallest divisor decides: semiprime iff cofactor is prime
        }
    }
    return out;
}

std::vector<u64> Ns(const std::vector<EnsembleEntry>& es) {
    std::vector<u64> out;
    for (const auto& e : es) out.push_back(e.N);
    return out;
}

} // namespace

TEST(SqrtIndex, Values) {
    EXPECT_EQ(sqrt_index(engine(), 26), 3u);
    EXPECT_EQ(sqrt_index(engine(), 25), 3u);
    EXPECT_EQ(sqrt_index(engine(), 10969262131ULL), 10000u);
    EXPECT_EQ(sqrt_index(engine(), 10969262131ULL), count_primes_upto(104733));
    EXPECT_THROW(sqrt_index(engine(), 3), DomainError);
}

TEST(Energy, KnownValues) {
    EXPECT_EQ(energy(engine(), 2, 13, 3), Rational(2, 3));
    EXPECT_EQ(energy(engine(), 5, 5, 3), Rational(1));
    Rational e = energy(engine(), 47297, 231923, 10000);
    EXPECT_NEAR(e.to_double(), 1.00441815, 5e-9);
    const auto pix = static_cast<std::int64_t>(count_primes_upto(47297));
    const auto piy = static_cast<std::int64_t>(count_primes_upto(231923));
    EXPECT_EQ(e, Rational(pix * piy, 100000000));
    EXPECT_THROW(energy(engine(), 4, 13, 3), DomainError);
    EXPECT_THROW(energy(engine(), 2, 13, 0), DomainError);
}

TEST(PhaseCoords, Values) {
    auto [q, p] = phase_coords(engine(), 5, 5, 3);
    EXPECT_EQ(q, Rational(1));
    EXPECT_EQ(p, Rational(0));
    auto [q2, p2] = phase_coords(engine(), 2, 13, 3);
    EXPECT_EQ(q2, Rational(7, 6));
    EXPECT_EQ(p2, Rational(5, 6));
    EXPECT_EQ(q2 * q2 - p2 * p2, Rational(2, 3));
    // pi(x) = pi(y) = j gives the identity point.
    u64 x = engine().nth_prime(40);
    auto [q3, p3] = phase_coords(engine(), x, x, 40);
    EXPECT_EQ(q3, Rational(1));
    EXPECT_EQ(p3, Rational(0));
    EXPECT_THROW(phase_coords(engine(), 13, 2, 3), DomainError);
}

TEST(Enumerate, SmallEnsembles) {
    EXPECT_EQ(Ns(enumerate_ensemble(engine(), {.j = 3})),
              (std::vector<u64>{25, 26, 33, 34, 35, 38, 39, 46}));
    EXPECT_EQ(Ns(enumerate_ensemble(engine(), {.j = 3, .x_min = 5})), (std::vector<u64>{25, 35}));
    EXPECT_EQ(Ns(enumerate_ensemble(engine(), {.j = 1})), (std::vector<u64>{4, 6}));
}

TEST(Enumerate, MatchesExhaustiveFactorizationUpToJ25) {
    for (u64 j = 1; j <= 25; ++j) {
        auto got = enumerate_ensemble(engine(), {.j = j});
        auto expect = brute_force(j);
        ASSERT_EQ(got.size(), expect.size()) << "j=" << j;
        for (std::size_t i = 0; i < got.size(); ++i) {
            ASSERT_EQ(got[i].N, expect[i].first) << "j=" << j;
            ASSERT_EQ(got[i].x, expect[i].second) << "j=" << j;
        }
    }
}

TEST(Enumerate, EntryInvariants) {
    for (u64 j : {3u, 10u, 25u, 60u}) {
        for (const auto& e : enumerate_ensemble(engine(), {.j = j})) {
            ASSERT_EQ(e.q * e.q - e.p * e.p, e.E);
            ASSERT_EQ(sqrt_index(engine(), e.N), j);
            ASSERT_LE(e.x, e.y);
            ASSERT_GE(e.p, Rational(0));
            ASSERT_EQ(e.pix, engine().pi_value(e.x));
            ASSERT_EQ(e.piy, engine().pi_value(e.y));
            if (e.x == e.y) {
                Rational r = Rational(static_cast<std::int64_t>(e.pix), static_cast<std::int64_t>(j));
                ASSERT_EQ(e.E, r * r);
                ASSERT_EQ(e.E == Rational(1), e.pix == j);
            }
        }
    }
}

TEST(Enumerate, SortedByNThenX) {
    auto es = enumerate_ensemble(engine(), {.j = 40});
    for (std::size_t i = 1; i < es.size(); ++i)
        ASSERT_TRUE(es[i - 1].N < es[i].N || (es[i - 1].N == es[i].N && es[i - 1].x < es[i].x));
}

TEST(Enumerate, EmptyWindow) {
    EXPECT_TRUE(enumerate_ensemble(engine(), {.j = 10, .x_min = 20, .x_max = 10}).empty());
    EXPECT_TRUE(spectrum_points(engine(), {.j = 10, .x_min = 20, .x_max = 10}).empty());
}

TEST(Enumerate, WindowedJ10000ContainsMarkedPoint) {
    auto pts = spectrum_points(engine(), {.j = 10000, .x_min = 47000, .x_max = 47500});
    bool found = false;
    for (const auto& p : pts) {
        if (p.N == 10969262131ULL) {
            found = true;
            EXPECT_NEAR(p.E.to_double(), 1.00441815, 5e-9);
        }
    }
    EXPECT_TRUE(found);
}

TEST(Enumerate, VicinityWindowRestrictsSqrtN) {
    const u64 centre = 10969262131ULL;
    auto es = enumerate_ensemble(engine(), {.j = 10000, .x_min = 40000, .vicinity_of = centre});
    ASSERT_FALSE(es.empty());
    const double s = std::sqrt(static_cast<double>(centre));
    for (const auto& e : es) ASSERT_LT(std::abs(std::sqrt(static_cast<double>(e.N)) - s), std::log(s));
    bool found = false;
    for (const auto& e : es) found |= e.N == centre;
    EXPECT_TRUE(found);
}

TEST(SpectrumPoints, SmallEnsemble) {
    auto pts = spectrum_points(engine(), {.j = 3});
    ASSERT_EQ(pts.size(), 8u);
    std::set<std::pair<std::int64_t, std::int64_t>> s;
    for (const auto& p : pts) s.insert({p.E.num() * 1000 + p.E.den(), static_cast<std::int64_t>(p.N)});
    EXPECT_TRUE(s.count({1 * 1000 + 1, 25}));
    EXPECT_TRUE(s.count({2 * 1000 + 3, 26}));
}
