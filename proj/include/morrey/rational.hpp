#pragma once

#include "errors.hpp"

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>

namespace morrey {

/// Exact exponent value: a reduced fraction num/den (den > 0), or +infinity.
///
/// Exponent relations such as 1/s = 1/p1 + 1/p2 - alpha/n are checked in
/// this arithmetic so that rational inputs validate without rounding slack.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1) { assign(num, den); }

    static Rational infinity()
    {
        Rational r;
        r.inf_ = true;
        r.num_ = 1;
        r.den_ = 0;
        return r;
    }

    /// Accepts "a/b", a decimal such as "0.3" or "-1.25e-1", an integer, or "inf".
    static Rational parse(std::string_view text);

    bool is_infinite() const { return inf_; }
    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double value() const
    {
        if (inf_) return std::numeric_limits<double>::infinity();
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    /// 1/x, with 1/inf = 0 and 1/0 = inf.
    Rational reciprocal() const
    {
        if (inf_) return Rational(0);
        if (num_ == 0) return infinity();
        return Rational(den_, num_);
    }

    std::string str() const
    {
        if (inf_) return "inf";
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) { return combine(a, b, 1); }
    friend Rational operator-(const Rational& a, const Rational& b) { return combine(a, b, -1); }
    friend Rational operator*(const Rational& a, const Rational& b)
    {
        if (a.inf_ || b.inf_) {
            if ((!a.inf_ && a.num_ == 0) || (!b.inf_ && b.num_ == 0))
                throw parameter_error("indeterminate product 0*inf");
            if ((!a.inf_ && a.num_ < 0) || (!b.inf_ && b.num_ < 0))
                throw parameter_error("negative infinity is not representable");
            return infinity();
        }
        return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) { return a * b.reciprocal(); }
    Rational operator-() const
    {
        if (inf_) throw parameter_error("negative infinity is not representable");
        return Rational(-num_, den_);
    }

    friend bool operator==(const Rational& a, const Rational& b)
    {
        if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        if (a.inf_ || b.inf_) {
            if (a.inf_ && b.inf_) return std::strong_ordering::equal;
            return a.inf_ ? std::strong_ordering::greater : std::strong_ordering::less;
        }
        const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
        const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    void assign(std::int64_t num, std::int64_t den)
    {
        if (den == 0) throw parameter_error("zero denominator");
        *this = from_wide(num, den);
    }

    static Rational from_wide(__int128 num, __int128 den)
    {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        __int128 a = num < 0 ? -num : num;
        __int128 b = den;
        while (b != 0) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            num /= a;
            den /= a;
        }
        constexpr __int128 lim = std::numeric_limits<std::int64_t>::max();
        if (num > lim || -num > lim || den > lim) throw parameter_error("rational overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(num);
        r.den_ = static_cast<std::int64_t>(den);
        return r;
    }

    static Rational combine(const Rational& a, const Rational& b, int sign)
    {
        if (a.inf_ || b.inf_) {
            if (a.inf_ && b.inf_ && sign < 0) throw parameter_error("indeterminate inf - inf");
            if (b.inf_ && sign < 0) throw parameter_error("negative infinity is not representable");
            return infinity();
        }
        const __int128 num = static_cast<__int128>(a.num_) * b.den_ + sign * static_cast<__int128>(b.num_) * a.den_;
        return from_wide(num, static_cast<__int128>(a.den_) * b.den_);
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    bool inf_ = false;
};

inline Rational Rational::parse(std::string_view text)
{
    auto fail = [&] { return parameter_error("cannot parse exponent '" + std::string(text) + "'"); };
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) throw fail();
    if (text == "inf" || text == "infinity" || text == "+inf") return infinity();

    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const Rational a = parse(text.substr(0, slash));
        const Rational b = parse(text.substr(slash + 1));
        if (a.is_infinite() || b.is_infinite() || b.num_ == 0) throw fail();
        return a / b;
    }

    // Decimal with optional exponent, read digit by digit so that "0.3" is 3/10.
    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';
    __int128 mantissa = 0;
    int scale = 0;
    bool digits = false;
    bool dot = false;
    constexpr __int128 cap = static_cast<__int128>(1) << 100;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c >= '0' && c <= '9') {
            digits = true;
            mantissa = mantissa * 10 + (c - '0');
            if (mantissa > cap) throw fail();
            if (dot) --scale;
        } else if (c == '.' && !dot) {
            dot = true;
        } else {
            break;
        }
    }
    if (!digits) throw fail();
    if (i < text.size()) {
        if (text[i] != 'e' && text[i] != 'E') throw fail();
        ++i;
        bool eneg = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) eneg = text[i++] == '-';
        if (i == text.size()) throw fail();
        int e = 0;
        for (; i < text.size(); ++i) {
            if (text[i] < '0' || text[i] > '9') throw fail();
            e = e * 10 + (text[i] - '0');
            if (e > 40) throw fail();
        }
        scale += eneg ? -e : e;
    }
    __int128 den = 1;
    for (; scale > 0; --scale) {
        mantissa *= 10;
        if (mantissa > cap) throw fail();
    }
    for (; scale < 0; ++scale) {
        den *= 10;
        if (den > cap) throw fail();
    }
    return from_wide(negative ? -mantissa : mantissa, den);
}

} // namespace morrey
