#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "qfsim/error.hpp"

namespace qfsim {

/// Exact rational with 64-bit numerator/denominator, always reduced, den > 0.
/// Products and sums go through 128-bit intermediates and throw on overflow
/// of the reduced result.
class Rational {
public:
    using i64 = std::int64_t;
    using i128 = __int128;

    constexpr Rational() = default;
    constexpr Rational(i64 n) : num_(n), den_(1) {} // NOLINT(implicit)
    Rational(i64 n, i64 d) { assign(n, d); }

    i64 num() const noexcept { return num_; }
    i64 den() const noexcept { return den_; }

    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    long double to_long_double() const noexcept {
        return static_cast<long double>(num_) / static_cast<long double>(den_);
    }

    /// Decimal rendering by long division, truncated toward zero then rounded
    /// half-up at `digits` fractional places.
    std::string decimal(int digits = 12) const {
        i128 n = num_, d = den_;
        bool neg = n < 0;
        if (neg) n = -n;
        i128 scale = 1;
        for (int i = 0; i < digits; ++i) scale *= 10;
        i128 whole = n / d;
        i128 rem = n % d;
        // fractional part scaled, rounded half-up
        i128 frac = 0;
        for (int i = 0; i < digits; ++i) {
            rem *= 10;
            frac = frac * 10 + rem / d;
            rem %= d;
        }
        if (2 * rem >= d) {
            ++frac;
            if (frac == scale) {
                frac = 0;
                ++whole;
            }
        }
        std::string out = neg && (whole != 0 || frac != 0) ? "-" : "";
        out += to_string(whole);
        if (digits > 0) {
            std::string f = to_string(frac);
            out += '.';
            out += std::string(static_cast<std::size_t>(digits) - f.size(), '0');
            out += f;
        }
        return out;
    }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make(i128{a.num_} * b.den_ + i128{b.num_} * a.den_, i128{a.den_} * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make(i128{a.num_} * b.den_ - i128{b.num_} * a.den_, i128{a.den_} * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(i128{a.num_} * b.num_, i128{a.den_} * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw DomainError("rational division by zero");
        return make(i128{a.num_} * b.den_, i128{a.den_} * b.num_);
    }
    Rational operator-() const { return make(-i128{num_}, den_); }

    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        i128 l = i128{a.num_} * b.den_;
        i128 r = i128{b.num_} * a.den_;
        return l < r ? std::strong_ordering::less
                     : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

    /// Builds n/d from 128-bit parts; throws if the reduced value does not fit.
    static Rational make(i128 n, i128 d) {
        if (d == 0) throw DomainError("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        constexpr i128 lim = static_cast<i128>(INT64_MAX);
        if (n > lim || n < -lim || d > lim) throw NumericalError("rational overflow");
        Rational r;
        r.num_ = static_cast<i64>(n);
        r.den_ = static_cast<i64>(d);
        return r;
    }

private:
    void assign(i64 n, i64 d) { *this = make(n, d); }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static std::string to_string(i128 v) {
        if (v == 0) return "0";
        std::string s;
        while (v > 0) {
            s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
            v /= 10;
        }
        return s;
    }

    i64 num_ = 0;
    i64 den_ = 1;
};

} // namespace qfsim
