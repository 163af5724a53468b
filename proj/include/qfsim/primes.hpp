/*
 * primes.hpp - exact prime arithmetic for qfsim.
 *
 * Everything above works on top of three primitives:
 *
 *   is_prime(n)        deterministic Miller-Rabin over the full 64-bit range
 *   PrimeTable         odd-only segmented sieve with per-block pi checkpoints
 *   pi_combinatorial   Lucy-style O(x^{3/4}) prime counting up to 10^12
 *
 * PrimeEngine routes pi / nth_prime queries to whichever of the two counting
 * methods covers the argument, and exposes range sweeps (pi at many points,
 * primes inside a window) for arguments beyond the table.
 *
 * Bit layout of a sieve window: bit k of the window starting at odd number
 * `first` stands for first + 2k; a set bit means prime.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qfsim/error.hpp"
#include "qfsim/parallel.hpp"

namespace qfsim::primes {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Largest argument accepted by the combinatorial counter.
inline constexpr u64 kCombinatorialLimit = 1'000'000'000'000ULL;
/// Largest value the engine will sweep with a segmented sieve.
inline constexpr u64 kSweepLimit = 100'000'000'000ULL;

// ---------------------------------------------------------------------------
// Primality
// ---------------------------------------------------------------------------

namespace detail {

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
    u64 result = 1;
    base %= m;
    while (exp) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

} // namespace detail

/// Deterministic for every n < 2^64: the first twelve primes as witnesses
/// are sufficient below 3.3e24.
inline bool is_prime(u64 n) {
    constexpr u64 witnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (n < 2) return false;
    for (u64 p : witnesses) {
        if (n % p == 0) return n == p;
    }
    if (n < 37 * 37) return true;
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : witnesses) {
        u64 x = detail::powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// floor(sqrt(n)) by integer Newton iteration (no floating point).
inline u64 isqrt(u64 n) {
    if (n < 2) return n;
    int shift = (std::bit_width(n) + 1) / 2;
    u64 x = u64{1} << shift; // x >= sqrt(n)
    for (;;) {
        u64 y = (x + n / x) / 2;
        if (y >= x) return x;
        x = y;
    }
}

/// Closest prime to t; an exact tie goes to the larger prime.
inline u64 nearest_prime(double t) {
    if (!(t > 2.0) || !std::isfinite(t) || t > 1.8e19)
        throw DomainError("nearest_prime: argument must be finite and > 2");
    u64 lo = static_cast<u64>(std::floor(t));
    u64 hi = static_cast<u64>(std::ceil(t));
    while (!is_prime(lo)) --lo;
    while (!is_prime(hi)) ++hi;
    double below = t - static_cast<double>(lo);
    double above = static_cast<double>(hi) - t;
    return above <= below ? hi : lo;
}

// ---------------------------------------------------------------------------
// Sieving primitives
// ---------------------------------------------------------------------------

/// Primes up to `limit` by a plain byte sieve. Used for base primes.
inline std::vector<std::uint32_t> small_primes(std::uint32_t limit) {
    std::vector<std::uint32_t> out;
    if (limit < 2) return out;
    std::vector<std::uint8_t> composite(limit + 1, 0);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
    }
    return out;
}

namespace detail {

/// Sieves the odd numbers first, first+2, ..., first+2*(nbits-1) into `words`.
/// `base` must contain every prime up to sqrt of the last number.
inline void sieve_odd_window(u64 first, std::size_t nbits, std::span<const std::uint32_t> base,
                             u64* words) {
    const std::size_t nwords = (nbits + 63) / 64;
    std::fill(words, words + nwords, ~u64{0});
    if (nbits % 64) words[nwords - 1] = (u64{1} << (nbits % 64)) - 1;
    const u64 last = first + 2 * (static_cast<u64>(nbits) - 1);
    for (std::uint32_t p32 : base) {
        const u64 p = p32;
        if (p == 2) continue;
        if (p * p > last) break;
        u64 m = p * p;
        if (m < first) {
            m = (first + p - 1) / p * p;
            if ((m & 1) == 0) m += p;
        }
        for (u64 k = (m - first) / 2; k < nbits; k += p) words[k >> 6] &= ~(u64{1} << (k & 63));
    }
    if (first == 1) words[0] &= ~u64{1};
}

inline u64 popcount_words(const u64* words, std::size_t n) {
    u64 c = 0;
    for (std::size_t i = 0; i < n; ++i) c += static_cast<u64>(std::popcount(words[i]));
    return c;
}

/// Primes in [lo, hi] (inclusive) given base primes up to sqrt(hi).
inline u64 count_range(u64 lo, u64 hi, std::span<const std::uint32_t> base) {
    if (hi < lo || hi < 2) return 0;
    u64 count = (lo <= 2 && hi >= 2) ? 1 : 0;
    u64 first = std::max<u64>(lo | 1, 3);
    if (first > hi) return count;
    constexpr std::size_t kWindowBits = std::size_t{1} << 21;
    std::vector<u64> words(kWindowBits / 64);
    while (first <= hi) {
        u64 remaining = (hi - first) / 2 + 1;
        std::size_t nbits = static_cast<std::size_t>(std::min<u64>(remaining, kWindowBits));
        sieve_odd_window(first, nbits, base, words.data());
        count += popcount_words(words.data(), (nbits + 63) / 64);
        first += 2 * static_cast<u64>(nbits);
    }
    return count;
}

} // namespace detail

// ---------------------------------------------------------------------------
// PrimeTable
// ---------------------------------------------------------------------------

/// Sieved primes up to a fixed limit with O(1) pi queries.
///
/// Memory: one bit per odd number plus one 64-bit checkpoint per 1024 integers.
/// All queries are const and safe to call concurrently once constructed.
class PrimeTable {
public:
    static constexpr std::size_t kBlockWords = 8;        // checkpoint stride
    static constexpr std::size_t kSegmentWords = 4096;   // 32 KiB sieve pages

    explicit PrimeTable(u64 limit, unsigned threads = 0) : limit_(std::max<u64>(limit, 2)) {
        const u64 nbits = (limit_ - 1) / 2 + 1; // odd numbers 1..limit
        const std::size_t nwords = static_cast<std::size_t>((nbits + 63) / 64);
        words_.assign(nwords, 0);
        const auto base = small_primes(static_cast<std::uint32_t>(isqrt(limit_)));
        const std::size_t nsegments = (nwords + kSegmentWords - 1) / kSegmentWords;
        parallel_for(nsegments, threads, [&](std::size_t s) {
            const std::size_t w0 = s * kSegmentWords;
            const std::size_t w1 = std::min(nwords, w0 + kSegmentWords);
            const u64 bit0 = static_cast<u64>(w0) * 64;
            const u64 bits = std::min<u64>(nbits, static_cast<u64>(w1) * 64) - bit0;
            detail::sieve_odd_window(2 * bit0 + 1, static_cast<std::size_t>(bits), base,
                                     words_.data() + w0);
        });
        const std::size_t nblocks = (nwords + kBlockWords - 1) / kBlockWords;
        checkpoints_.assign(nblocks + 1, 0);
        for (std::size_t b = 0; b < nblocks; ++b) {
            const std::size_t w0 = b * kBlockWords;
            const std::size_t w1 = std::min(nwords, w0 + kBlockWords);
            checkpoints_[b + 1] = checkpoints_[b] + detail::popcount_words(words_.data() + w0, w1 - w0);
        }
    }

    u64 limit() const noexcept { return limit_; }

    /// Number of primes <= limit.
    u64 size() const noexcept { return checkpoints_.back() + 1; }

    /// Odd-prime counts before each checkpoint block (add 1 for the prime 2).
    std::span<const u64> checkpoints() const noexcept { return checkpoints_; }

    bool contains(u64 n) const {
        check(n);
        if (n == 2) return true;
        if (n < 2 || (n & 1) == 0) return false;
        const u64 k = n / 2;
        return (words_[k >> 6] >> (k & 63)) & 1;
    }

    u64 pi(u64 x) const {
        check(x);
        if (x < 2) return 0;
        const u64 k = (x - 1) / 2; // index of the largest odd number <= x
        const std::size_t w = static_cast<std::size_t>(k >> 6);
        const std::size_t b = w / kBlockWords;
        u64 c = checkpoints_[b] + detail::popcount_words(words_.data() + b * kBlockWords, w - b * kBlockWords);
        const unsigned r = static_cast<unsigned>(k & 63);
        const u64 mask = r == 63 ? ~u64{0} : ((u64{1} << (r + 1)) - 1);
        c += static_cast<u64>(std::popcount(words_[w] & mask));
        return c + 1; // the prime 2
    }

    /// The n-th prime (1-based).
    u64 nth(u64 n) const {
        if (n == 0) throw DomainError("nth_prime: n must be >= 1");
        if (n > size()) throw LimitExceeded("nth_prime beyond prime table", n, size());
        if (n == 1) return 2;
        const u64 rank = n - 1; // rank among odd primes, 1-based
        auto it = std::lower_bound(checkpoints_.begin(), checkpoints_.end(), rank);
        std::size_t b = static_cast<std::size_t>(it - checkpoints_.begin()) - 1;
        u64 seen = checkpoints_[b];
        std::size_t w = b * kBlockWords;
        for (;; ++w) {
            const u64 pc = static_cast<u64>(std::popcount(words_[w]));
            if (seen + pc >= rank) break;
            seen += pc;
        }
        u64 word = words_[w];
        for (u64 need = rank - seen; need > 1; --need) word &= word - 1;
        const u64 k = static_cast<u64>(w) * 64 + static_cast<u64>(std::countr_zero(word));
        return 2 * k + 1;
    }

    /// Calls f(p) for every prime p in [lo, hi], ascending.
    template <typename F>
    void for_each_prime(u64 lo, u64 hi, F&& f) const {
        check(hi);
        if (lo <= 2 && hi >= 2) f(u64{2});
        u64 k = std::max<u64>(lo, 3) / 2;
        const u64 kend = (hi - 1) / 2;
        if (hi < 3) return;
        while (k <= kend) {
            const std::size_t w = static_cast<std::size_t>(k >> 6);
            u64 word = words_[w] & (~u64{0} << (k & 63));
            const u64 wbase = static_cast<u64>(w) * 64;
            while (word) {
                const u64 kk = wbase + static_cast<u64>(std::countr_zero(word));
                if (kk > kend) return;
                f(2 * kk + 1);
                word &= word - 1;
            }
            k = wbase + 64;
        }
    }

    std::vector<u64> primes_in(u64 lo, u64 hi) const {
        std::vector<u64> out;
        if (hi < lo) return out;
        for_each_prime(lo, hi, [&](u64 p) { out.push_back(p); });
        return out;
    }

private:
    void check(u64 n) const {
        if (n > limit_) throw LimitExceeded("query beyond prime table limit", n, limit_);
    }

    u64 limit_;
    std::vector<u64> words_;
    std::vector<u64> checkpoints_;
};

// ---------------------------------------------------------------------------
// Combinatorial counting
// ---------------------------------------------------------------------------

/// pi(x) by the Lucy recurrence over the values floor(x/k).
/// O(x^{3/4}) time, O(sqrt x) memory.
inline u64 pi_combinatorial(u64 x) {
    if (x > kCombinatorialLimit)
        throw LimitExceeded("pi beyond combinatorial limit", x, kCombinatorialLimit);
    if (x < 2) return 0;
    const u64 r = isqrt(x);
    // small[v] = S(v) for v <= r, large[i] = S(x / i) for i <= r.
    std::vector<u64> small(r + 1), large(r + 1);
    for (u64 v = 1; v <= r; ++v) small[v] = v - 1;
    for (u64 i = 1; i <= r; ++i) large[i] = x / i - 1;
    for (u64 p = 2; p <= r; ++p) {
        if (small[p] == small[p - 1]) continue;
        const u64 sp = small[p - 1];
        const u64 p2 = p * p;
        const u64 ilim = std::min(r, x / p2);
        for (u64 i = 1; i <= ilim; ++i) {
            const u64 d = i * p;
            const u64 v = d <= r ? large[d] : small[x / d];
            large[i] -= v - sp;
        }
        for (u64 v = r; v >= p2; --v) small[v] -= small[v / p] - sp;
    }
    return large[1];
}

// ---------------------------------------------------------------------------
// PrimeEngine
// ---------------------------------------------------------------------------

enum class CountMethod { sieve, combinatorial };

struct PrimeCount {
    u64 x = 0;
    u64 count = 0;
    CountMethod method = CountMethod::sieve;
};

/// A prime table plus fallbacks for arguments beyond it.
class PrimeEngine {
public:
    explicit PrimeEngine(u64 table_limit = u64{1} << 24, unsigned threads = 0)
        : table_(table_limit, threads),
          base_(small_primes(static_cast<std::uint32_t>(isqrt(kSweepLimit)) + 1)),
          threads_(threads) {}

    const PrimeTable& table() const noexcept { return table_; }
    unsigned threads() const noexcept { return threads_; }

    PrimeCount pi(u64 x) const {
        if (x <= table_.limit()) return {x, table_.pi(x), CountMethod::sieve};
        return {x, pi_combinatorial(x), CountMethod::combinatorial};
    }

    u64 pi_value(u64 x) const { return pi(x).count; }

    u64 nth_prime(u64 n) const {
        if (n == 0) throw DomainError("nth_prime: n must be >= 1");
        if (n <= table_.size()) return table_.nth(n);
        const double ln = std::log(static_cast<double>(n));
        const double lln = std::log(ln);
        double est = static_cast<double>(n) * (ln + lln - 1.0 + (lln - 2.0) / ln);
        if (est > static_cast<double>(kCombinatorialLimit - (u64{1} << 22)))
            throw LimitExceeded("nth_prime beyond supported range", n, 37'607'912'018ULL);
        u64 x = static_cast<u64>(est);
        u64 c = pi_combinatorial(x);
        constexpr u64 kStep = u64{1} << 20;
        if (c < n) {
            // walk forward
            for (;;) {
                auto ps = primes_in(x + 1, x + kStep);
                if (c + ps.size() >= n) return ps[static_cast<std::size_t>(n - c - 1)];
                c += ps.size();
                x += kStep;
            }
        }
        // walk backward: the wanted prime is the (c - n + 1)-th prime <= x counting down
        u64 skip = c - n;
        u64 hi = x;
        for (;;) {
            u64 lo = hi > kStep ? hi - kStep + 1 : 2;
            auto ps = primes_in(lo, hi);
            if (ps.size() > skip) return ps[ps.size() - 1 - static_cast<std::size_t>(skip)];
            skip -= ps.size();
            hi = lo - 1;
        }
    }

    /// Primes in [lo, hi], from the table when covered, else by segmented sieve.
    std::vector<u64> primes_in(u64 lo, u64 hi) const {
        if (hi <= table_.limit()) return table_.primes_in(lo, hi);
        if (hi > kSweepLimit) throw LimitExceeded("segmented sieve beyond sweep limit", hi, kSweepLimit);
        std::vector<u64> out;
        if (hi < lo) return out;
        const std::span<const std::uint32_t> base = base_;
        if (lo <= 2 && hi >= 2) out.push_back(2);
        u64 first = std::max<u64>(lo | 1, 3);
        constexpr std::size_t kWindowBits = std::size_t{1} << 20;
        std::vector<u64> words(kWindowBits / 64);
        while (first <= hi) {
            u64 remaining = (hi - first) / 2 + 1;
            std::size_t nbits = static_cast<std::size_t>(std::min<u64>(remaining, kWindowBits));
            detail::sieve_odd_window(first, nbits, base, words.data());
            for (std::size_t w = 0; w < (nbits + 63) / 64; ++w) {
                u64 word = words[w];
                while (word) {
                    const u64 k = static_cast<u64>(w) * 64 + static_cast<u64>(std::countr_zero(word));
                    out.push_back(first + 2 * k);
                    word &= word - 1;
                }
            }
            first += 2 * static_cast<u64>(nbits);
        }
        return out;
    }

    /// Counts primes in [lo, hi] by segmented sieve, splitting the range into
    /// chunks that are sieved in parallel.
    u64 count_range(u64 lo, u64 hi) const {
        if (hi < lo) return 0;
        if (hi <= table_.limit()) return table_.pi(hi) - (lo > 0 ? table_.pi(lo - 1) : 0);
        if (hi > kSweepLimit) throw LimitExceeded("segmented sieve beyond sweep limit", hi, kSweepLimit);
        const std::span<const std::uint32_t> base = base_;
        constexpr u64 kChunk = u64{1} << 26;
        const u64 nchunks = (hi - lo) / kChunk + 1;
        std::vector<u64> counts(static_cast<std::size_t>(nchunks), 0);
        parallel_for(counts.size(), threads_, [&](std::size_t i) {
            const u64 a = lo + static_cast<u64>(i) * kChunk;
            const u64 b = std::min(hi, a + kChunk - 1);
            counts[i] = detail::count_range(a, b, base);
        });
        u64 total = 0;
        for (u64 c : counts) total += c;
        return total;
    }

    /// pi at each point of an ascending list. Points beyond the table are
    /// reached by counting the gaps between consecutive points.
    std::vector<u64> pi_at(std::span<const u64> ascending) const {
        std::vector<u64> out(ascending.size());
        u64 anchor = table_.limit();
        u64 anchor_pi = table_.pi(anchor);
        for (std::size_t i = 0; i < ascending.size(); ++i) {
            const u64 x = ascending[i];
            if (i > 0 && x < ascending[i - 1]) throw DomainError("pi_at: points must be ascending");
            if (x <= table_.limit()) {
                out[i] = table_.pi(x);
                continue;
            }
            anchor_pi += count_range(anchor + 1, x);
            anchor = x;
            out[i] = anchor_pi;
        }
        return out;
    }

private:
    PrimeTable table_;
    std::vector<std::uint32_t> base_;
    unsigned threads_;
};

} // namespace qfsim::primes
