#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "qfsim/primes.hpp"

using namespace qfsim;
using namespace qfsim::primes;

namespace {

// Independent oracles: trial division and a byte-per-number Eratosthenes.
bool trial_division(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<u64> naive_sieve(u64 limit) {
    std::vector<bool> comp(limit + 1, false);
    std::vector<u64> out;
    for (u64 i = 2; i <= limit; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (u64 k = i * i; k <= limit; k += i) comp[k] = true;
    }
    return out;
}

const PrimeEngine& engine() {
    static PrimeEngine e(u64{1} << 22);
    return e;
}

} // namespace

TEST(IsPrime, AgreesWithTrialDivisionBelowOneMillion) {
    for (u64 n = 0; n <= 1'000'000; ++n) ASSERT_EQ(is_prime(n), trial_division(n)) << n;
}

TEST(IsPrime, KnownValues) {
    EXPECT_TRUE(is_prime(2));
    EXPECT_FALSE(is_prime(1));
    EXPECT_FALSE(is_prime(10969262131ULL));
    EXPECT_TRUE(is_prime(47297));
    EXPECT_TRUE(is_prime(231923));
    EXPECT_TRUE(is_prime(18446744073709551557ULL)); // largest 64-bit prime
    EXPECT_FALSE(is_prime(3215031751ULL));          // strong pseudoprime to 2,3,5,7
    EXPECT_FALSE(is_prime(3825123056546413051ULL)); // strong pseudoprime to bases up to 23
    EXPECT_FALSE(is_prime(18446744073709551615ULL));
}

TEST(Isqrt, ExactAroundSquares) {
    for (u64 r : {1ULL, 2ULL, 3ULL, 1000ULL, 104729ULL, 4294967295ULL}) {
        EXPECT_EQ(isqrt(r * r), r);
        if (r > 1) {
            EXPECT_EQ(isqrt(r * r - 1), r - 1);
        }
        EXPECT_EQ(isqrt(r * r + 1), r);
    }
    EXPECT_EQ(isqrt(~u64{0}), 4294967295ULL);
}

TEST(PrimeTable, MembershipMatchesOracle) {
    const u64 limit = 200'000;
    PrimeTable t(limit, 2);
    auto ps = naive_sieve(limit);
    std::vector<bool> is(limit + 1, false);
    for (u64 p : ps) is[p] = true;
    for (u64 n = 0; n <= limit; ++n) ASSERT_EQ(t.contains(n), is[n]) << n;
    EXPECT_EQ(t.size(), ps.size());
}

TEST(PrimeTable, CheckpointsNonDecreasingAndEndAtPi) {
    const PrimeTable& t = engine().table();
    auto cp = t.checkpoints();
    for (std::size_t i = 1; i < cp.size(); ++i) ASSERT_LE(cp[i - 1], cp[i]);
    EXPECT_EQ(cp.back() + 1, t.pi(t.limit()));
}

TEST(PrimeTable, PiMatchesOracleEverywhereBelowLimit) {
    const u64 limit = 100'000;
    PrimeTable t(limit);
    auto ps = naive_sieve(limit);
    std::size_t idx = 0;
    for (u64 x = 0; x <= limit; ++x) {
        while (idx < ps.size() && ps[idx] <= x) ++idx;
        ASSERT_EQ(t.pi(x), idx) << x;
    }
}

TEST(PrimeTable, SerialAndParallelBuildsAgree) {
    PrimeTable a(3'000'000, 1), b(3'000'000, 4);
    for (u64 x = 0; x <= 3'000'000; x += 997) ASSERT_EQ(a.pi(x), b.pi(x));
    EXPECT_EQ(a.size(), b.size());
}

TEST(PrimeTable, QueryBeyondLimitThrows) {
    PrimeTable t(1000);
    EXPECT_THROW(t.pi(1001), LimitExceeded);
    EXPECT_THROW(t.contains(5000), LimitExceeded);
}

TEST(Pi, KnownValues) {
    EXPECT_EQ(engine().pi_value(3), 2u);
    EXPECT_EQ(engine().pi_value(5), 3u);
    EXPECT_EQ(engine().pi_value(101), 26u);
    EXPECT_EQ(engine().pi_value(13), 6u);
}

TEST(Pi, OneMillionFromOracle) {
    EXPECT_EQ(engine().pi_value(1'000'000), naive_sieve(1'000'000).size());
    EXPECT_EQ(engine().pi_value(1'000'000), 78498u);
}

TEST(Pi, CombinatorialMatchesSieveOnSmallRange) {
    for (u64 x = 0; x < 5000; ++x) ASSERT_EQ(pi_combinatorial(x), engine().table().pi(x)) << x;
}

TEST(Pi, SegmentedAndCombinatorialAgreeOnRandomSample) {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<u64> dist(1'000'000, 1'000'000'000);
    std::vector<u64> pts(100);
    for (auto& p : pts) p = dist(rng);
    std::sort(pts.begin(), pts.end());
    auto seg = engine().pi_at(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) ASSERT_EQ(seg[i], pi_combinatorial(pts[i])) << pts[i];
}

TEST(Pi, MethodReported) {
    EXPECT_EQ(engine().pi(1000).method, CountMethod::sieve);
    auto big = engine().pi(10'000'000'000ULL);
    EXPECT_EQ(big.method, CountMethod::combinatorial);
    EXPECT_EQ(big.count, 455052511u);
}

TEST(Pi, CombinatorialLimit) { EXPECT_THROW(pi_combinatorial(kCombinatorialLimit + 1), LimitExceeded); }

TEST(NthPrime, Values) {
    EXPECT_EQ(engine().nth_prime(1), 2u);
    EXPECT_EQ(engine().nth_prime(6), 13u);
    auto ps = naive_sieve(200'000);
    EXPECT_EQ(engine().nth_prime(10000), ps[9999]);
    EXPECT_EQ(engine().nth_prime(10000), 104729u);
    EXPECT_THROW(engine().nth_prime(0), DomainError);
}

TEST(NthPrime, RoundTripsWithPi) {
    for (u64 n = 1; n < 20000; n += 7) {
        u64 p = engine().nth_prime(n);
        ASSERT_TRUE(is_prime(p));
        ASSERT_EQ(engine().pi_value(p), n);
    }
    for (u64 p : naive_sieve(50'000)) ASSERT_EQ(engine().nth_prime(engine().pi_value(p)), p);
}

TEST(NthPrime, BeyondTable) {
    PrimeEngine small(100'000);
    // pi(10^8) = 5761455, and 10^8 - 11 = 99999989 is the largest prime below.
    EXPECT_EQ(small.nth_prime(5761455), 99999989u);
    EXPECT_EQ(small.nth_prime(5761456), 100000007u);
}

TEST(NearestPrime, Values) {
    EXPECT_EQ(nearest_prime(13.2), 13u);
    EXPECT_EQ(nearest_prime(9.0), 11u);
    EXPECT_EQ(nearest_prime(2.5), 3u);
    EXPECT_THROW(nearest_prime(2.0), DomainError);
    EXPECT_THROW(nearest_prime(std::nan("")), DomainError);
}

TEST(NearestPrime, MatchesNeighbourScan) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(3.0, 1e6);
    auto ps = naive_sieve(1'100'000);
    for (int i = 0; i < 2000; ++i) {
        double t = dist(rng);
        auto it = std::lower_bound(ps.begin(), ps.end(), static_cast<u64>(std::ceil(t)));
        u64 above = *it;
        u64 below = *std::prev(std::upper_bound(ps.begin(), ps.end(), static_cast<u64>(std::floor(t))));
        u64 expect = (static_cast<double>(above) - t <= t - static_cast<double>(below)) ? above : below;
        ASSERT_EQ(nearest_prime(t), expect) << t;
    }
}

TEST(NearestPrime, EnsembleBoundArgument) {
    // 3/8 N^{1/3} for N = 10969262131; nearest prime by scanning neighbours.
    const double t = 3.0 / 8.0 * std::cbrt(10969262131.0);
    u64 lo = static_cast<u64>(t), hi = lo + 1;
    while (!trial_division(lo)) --lo;
    while (!trial_division(hi)) ++hi;
    u64 expect = (static_cast<double>(hi) - t <= t - static_cast<double>(lo)) ? hi : lo;
    EXPECT_EQ(nearest_prime(t), expect);
}

TEST(Segmented, PrimesInRangeBeyondTable) {
    PrimeEngine small(10'000);
    auto got = small.primes_in(1'000'000, 1'001'000);
    std::vector<u64> expect;
    for (u64 n = 1'000'000; n <= 1'001'000; ++n)
        if (trial_division(n)) expect.push_back(n);
    EXPECT_EQ(got, expect);
    EXPECT_EQ(small.count_range(1'000'000, 1'001'000), expect.size());
}
