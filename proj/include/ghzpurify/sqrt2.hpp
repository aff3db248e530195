// The ring Q[sqrt(2)]: values a + b*sqrt(2) with rational a, b. Every state
// amplitude reachable by the protocols (GHZ construction, Hadamards, Pauli
// operations, renormalization after dyadic-probability branches) lives here,
// so normalization and branch probabilities are checkable with exact equality.

#pragma once

#include "ghzpurify/rational.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ghzpurify {

struct Sqrt2Rat {
    Rational a{0}; // rational part
    Rational b{0}; // coefficient of sqrt(2)

    Sqrt2Rat() = default;
    Sqrt2Rat(Rational ra) : a(std::move(ra)) {}
    Sqrt2Rat(Rational ra, Rational rb) : a(std::move(ra)), b(std::move(rb)) {}
    Sqrt2Rat(int v) : a(v) {}

    static Sqrt2Rat sqrt2() { return {Rational(0), Rational(1)}; }
    static Sqrt2Rat inv_sqrt2() { return {Rational(0), Rational(1, 2)}; }

    bool is_zero() const { return a == 0 && b == 0; }
    bool is_rational() const { return b == 0; }

    Rational to_rational() const {
        if (b != 0) throw std::domain_error("value has an irrational sqrt(2) component");
        return a;
    }

    double to_double() const { return ghzpurify::to_double(a) + ghzpurify::to_double(b) * std::sqrt(2.0); }

    Sqrt2Rat operator-() const { return {-a, -b}; }
    Sqrt2Rat& operator+=(const Sqrt2Rat& o) {
        a += o.a;
        b += o.b;
        return *this;
    }
    Sqrt2Rat& operator-=(const Sqrt2Rat& o) {
        a -= o.a;
        b -= o.b;
        return *this;
    }
    Sqrt2Rat& operator*=(const Sqrt2Rat& o) {
        Rational na = a * o.a + 2 * b * o.b;
        Rational nb = a * o.b + b * o.a;
        a = std::move(na);
        b = std::move(nb);
        return *this;
    }

    friend Sqrt2Rat operator+(Sqrt2Rat x, const Sqrt2Rat& y) { return x += y; }
    friend Sqrt2Rat operator-(Sqrt2Rat x, const Sqrt2Rat& y) { return x -= y; }
    friend Sqrt2Rat operator*(Sqrt2Rat x, const Sqrt2Rat& y) { return x *= y; }
    friend bool operator==(const Sqrt2Rat& x, const Sqrt2Rat& y) { return x.a == y.a && x.b == y.b; }
    friend bool operator!=(const Sqrt2Rat& x, const Sqrt2Rat& y) { return !(x == y); }

    // x / sqrt(2) = b + (a/2) sqrt(2)
    Sqrt2Rat div_sqrt2() const { return {b, a / 2}; }
    Sqrt2Rat squared() const { return {a * a + 2 * b * b, 2 * a * b}; }

    std::string str() const {
        if (is_zero()) return "0";
        if (b == 0) return rational_string(a);
        std::string root = (b == Rational(1, 2)) ? "1/\xE2\x88\x9A""2"
                                                 : rational_string(b) + "\xE2\x88\x9A""2";
        if (a == 0) return root;
        return rational_string(a) + (b > 0 ? "+" : "") + root;
    }
};

// Multiply by sqrt(2)^k for k possibly negative.
inline Sqrt2Rat mul_pow_sqrt2(Sqrt2Rat v, int k) {
    for (; k > 0; --k) v *= Sqrt2Rat::sqrt2();
    for (; k < 0; ++k) v = v.div_sqrt2();
    return v;
}

// Exact 1/sqrt(p) for dyadic p = 1/2^k (the only renormalizations the
// protocol states ever need). Throws for anything outside that family.
inline Sqrt2Rat inv_sqrt_dyadic(const Rational& p) {
    if (p <= 0) throw std::domain_error("cannot renormalize by a nonpositive probability");
    BigInt num = rat_num(p), den = rat_den(p);
    if (num != 1) throw std::domain_error("probability " + rational_string(p) + " is not an inverse power of two; exact renormalization leaves Q[sqrt(2)]");
    int k = 0;
    BigInt d = den;
    while (d > 1) {
        if (d % 2 != 0) throw std::domain_error("probability " + rational_string(p) + " is not dyadic");
        d /= 2;
        ++k;
    }
    return mul_pow_sqrt2(Sqrt2Rat(1), k); // sqrt(2)^k = 2^{k/2}
}

// Numeric glue shared by the exact engine and the floating-point mirror.
template <class Num>
struct NumTraits;

template <>
struct NumTraits<Sqrt2Rat> {
    using Prob = Rational;
    static Sqrt2Rat zero() { return Sqrt2Rat(0); }
    static Sqrt2Rat one() { return Sqrt2Rat(1); }
    static bool is_zero(const Sqrt2Rat& v) { return v.is_zero(); }
    static Sqrt2Rat div_sqrt2(const Sqrt2Rat& v) { return v.div_sqrt2(); }
    static Prob squared(const Sqrt2Rat& v) { return v.squared().to_rational(); }
    static Sqrt2Rat renormalize(const Sqrt2Rat& v, const Prob& branch_prob) {
        return v * inv_sqrt_dyadic(branch_prob);
    }
    static bool prob_is_one(const Prob& p) { return p == 1; }
    static bool negligible_prob(const Prob& p) { return p == 0; }
    static double prob_to_double(const Prob& p) { return ghzpurify::to_double(p); }
    static std::string str(const Sqrt2Rat& v) { return v.str(); }
};

template <>
struct NumTraits<double> {
    using Prob = double;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static bool is_zero(double v) { return std::abs(v) < 1e-9; }
    static double div_sqrt2(double v) { return v / std::sqrt(2.0); }
    static Prob squared(double v) { return v * v; }
    static double renormalize(double v, double branch_prob) { return v / std::sqrt(branch_prob); }
    static bool prob_is_one(double p) { return std::abs(p - 1.0) < 1e-9; }
    static bool negligible_prob(double p) { return p < 1e-18; }
    static double prob_to_double(double p) { return p; }
    static std::string str(double v) { return std::to_string(v); }
};

} // namespace ghzpurify
