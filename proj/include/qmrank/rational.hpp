#pragma once

// Exact rational arithmetic on 64-bit numerator/denominator with overflow
// checking, plus the nearest-integer convention used throughout: [x] is the
// integer closest to x, with ties x = n + 1/2 rounded up, [x] = floor(x + 1/2).

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "qmrank/errors.hpp"

namespace qmrank {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw domain_error("integer overflow in add");
    return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw domain_error("integer overflow in sub");
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw domain_error("integer overflow in mul");
    return r;
}

// Floor division with b > 0: quotient rounded toward minus infinity.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b, r = a % b;
    return (r != 0 && r < 0) ? q - 1 : q;
}

struct Rational {
    // Invariant: den >= 1 and gcd(|num|, den) == 1.
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n) : num(n), den(1) {}
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw domain_error("Rational: zero denominator");
        if (den < 0) { num = checked_sub(0, num); den = checked_sub(0, den); }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(checked_add(checked_mul(a.num, b.den), checked_mul(b.num, a.den)),
                        checked_mul(a.den, b.den));
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(checked_sub(checked_mul(a.num, b.den), checked_mul(b.num, a.den)),
                        checked_mul(a.den, b.den));
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(checked_mul(a.num, b.num), checked_mul(a.den, b.den));
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num == 0) throw domain_error("Rational: division by zero");
        return Rational(checked_mul(a.num, b.den), checked_mul(a.den, b.num));
    }
    Rational operator-() const { return Rational(checked_sub(0, num), den); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        // Safe in __int128: products of int64 never overflow there.
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    bool is_integer() const { return den == 1; }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    template <class R> R to_real() const { return R(num) / R(den); }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

// Nearest integer with ties rounded up: [x] = floor(x + 1/2).
inline std::int64_t nearest_integer(const Rational& x) {
    // floor((2 num + den) / (2 den))
    return floor_div(checked_add(checked_mul(2, x.num), x.den), checked_mul(2, x.den));
}

inline double nearest_integer(double x) { return std::floor(x + 0.5); }

// |x - [x]|, exactly.
inline Rational dist_to_nearest(const Rational& x) {
    Rational d = x - Rational(nearest_integer(x));
    return d.num < 0 ? -d : d;
}

} // namespace qmrank
