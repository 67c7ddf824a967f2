#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mskel {

/// Exact fraction over int64, always stored in lowest terms with a positive
/// denominator. Arithmetic goes through 128-bit intermediates and throws
/// std::overflow_error instead of silently wrapping; comparisons are exact.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t value) : num_(value), den_(1) {}

    Rational(std::int64_t numerator, std::int64_t denominator) {
        if (denominator == 0) {
            throw std::invalid_argument("Rational: zero denominator");
        }
        __int128 n = numerator;
        __int128 d = denominator;
        if (d < 0) {
            n = -n;
            d = -d;
        }
        reduce_and_set(n, d);
    }

    constexpr std::int64_t num() const { return num_; }
    constexpr std::int64_t den() const { return den_; }

    constexpr bool is_zero() const { return num_ == 0; }
    constexpr bool is_integer() const { return den_ == 1; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_parts(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                          i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from_parts(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                          i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_parts(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::invalid_argument("Rational: division by zero");
        return from_parts(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    /// Renders as "num/den", e.g. "3/4" or "2/1".
    std::string to_string() const {
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Fixed-point decimal rendering with round-half-up, e.g. 6 places for
    /// report output. Exact integer arithmetic, so the result is
    /// reproducible across platforms.
    std::string to_decimal(int places) const;

    /// Parses "num/den" or a bare integer. Throws std::invalid_argument on
    /// malformed input.
    static Rational parse(const std::string& text);

private:
    using i128 = __int128;

    static Rational from_parts(i128 n, i128 d) {
        Rational r;
        r.reduce_and_set(n, d);
        return r;
    }

    void reduce_and_set(i128 n, i128 d) {
        // d > 0 guaranteed by callers except via from_parts on division.
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        if (n > INT64_MAX_128 || n < INT64_MIN_128 || d > INT64_MAX_128) {
            throw std::overflow_error("Rational: magnitude exceeds 64-bit range");
        }
        num_ = static_cast<std::int64_t>(n);
        den_ = static_cast<std::int64_t>(d);
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    static constexpr i128 INT64_MAX_128 = 0x7fffffffffffffffLL;
    static constexpr i128 INT64_MIN_128 = -INT64_MAX_128 - 1;

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace mskel
