// Exact rational arithmetic used throughout the analytic engine, plus the
// decimal rendering rules shared by the CSV writers (12 significant digits,
// round half to even, locale independent).

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ghzpurify {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline BigInt pow10_int(int e) {
    BigInt p = 1;
    for (int i = 0; i < e; ++i) p *= 10;
    return p;
}

// Parses "3/4", "0.52", "-1/8", "1". Decimal forms become exact rationals.
inline Rational parse_rational(const std::string& text) {
    std::string s = text;
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    Rational value;
    auto digits_only = [](const std::string& t) {
        if (t.empty()) return false;
        for (char c : t)
            if (c < '0' || c > '9') return false;
        return true;
    };
    // cpp_int would read a leading zero as an octal prefix.
    auto as_int = [](std::string t) {
        size_t i = t.find_first_not_of('0');
        return BigInt(i == std::string::npos ? "0" : t.substr(i));
    };
    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!digits_only(num) || !digits_only(den))
            throw std::invalid_argument("bad rational literal: " + text);
        BigInt d = as_int(den);
        if (d == 0) throw std::invalid_argument("zero denominator: " + text);
        value = Rational(as_int(num), d);
    } else if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (!digits_only(ip) || (!fp.empty() && !digits_only(fp)))
            throw std::invalid_argument("bad decimal literal: " + text);
        value = Rational(as_int(ip + fp), pow10_int(static_cast<int>(fp.size())));
    } else {
        if (!digits_only(s)) throw std::invalid_argument("bad integer literal: " + text);
        value = Rational(as_int(s));
    }
    return neg ? -value : value;
}

inline std::string rational_string(const Rational& r) {
    std::string s = rat_num(r).str();
    if (rat_den(r) != 1) s += "/" + rat_den(r).str();
    return s;
}

// Rounds x*10^places half-to-even to an integer; places may be negative.
inline BigInt round_scaled_half_even(const Rational& x, int places) {
    BigInt num = rat_num(x), den = rat_den(x);
    if (places >= 0)
        num *= pow10_int(places);
    else
        den *= pow10_int(-places);
    BigInt q = num / den, r = num % den;
    BigInt twice = 2 * r;
    if (twice > den || (twice == den && (q % 2) != 0)) ++q;
    return q;
}

inline int digit_count(BigInt v) {
    if (v < 0) v = -v;
    int n = 0;
    for (; v > 0; v /= 10) ++n;
    return n;
}

// Fixed-point decimal with `sig` significant digits, round half to even.
// 1/3 -> "0.333333333333", 21/32 -> "0.656250000000", 1 -> "1.00000000000".
inline std::string decimal_string(const Rational& value, int sig = 12) {
    if (sig < 1) throw std::invalid_argument("sig must be positive");
    if (value == 0) return "0." + std::string(static_cast<size_t>(sig), '0');
    bool neg = value < 0;
    Rational x = neg ? Rational(-value) : value;

    BigInt ipart = rat_num(x) / rat_den(x);
    int int_digits = digit_count(ipart);
    int places;
    if (int_digits > 0) {
        places = sig - int_digits;
    } else {
        int zeros = 0;
        BigInt n = rat_num(x) * 10;
        while (n < rat_den(x)) {
            n *= 10;
            ++zeros;
        }
        places = sig + zeros;
    }

    BigInt q = round_scaled_half_even(x, places);
    // Rounding can push into the next decade (0.0999.. -> 0.100..), shifting
    // the digit budget by one place.
    if (digit_count(q) > sig && places > 0) {
        --places;
        q = round_scaled_half_even(x, places);
    }

    std::string digits = q.str();
    std::string out;
    if (places <= 0) {
        out = digits + std::string(static_cast<size_t>(-places), '0');
    } else {
        if (static_cast<int>(digits.size()) <= places)
            digits.insert(0, static_cast<size_t>(places + 1 - static_cast<int>(digits.size())), '0');
        out = digits.substr(0, digits.size() - static_cast<size_t>(places)) + "." +
              digits.substr(digits.size() - static_cast<size_t>(places));
    }
    return neg ? "-" + out : out;
}

inline double to_double(const Rational& r) {
    return static_cast<double>(r);
}

} // namespace ghzpurify
