#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "gradsense/errors.hpp"

namespace gradsense {

// Exact fraction p/q, q > 0, always kept reduced. Used for coordinates given
// as rational multiples of a side length, where the locus rules need exact
// divisibility tests instead of floating-point comparisons.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t p, std::int64_t q) : num(p), den(q) {
        if (den == 0) throw ValidationError("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num * b.num, a.den * b.den);
    }
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

// sin(k*pi*p/q) == 0  iff  q divides k*p.
inline bool sin_multiple_vanishes(std::int64_t k, const Rational& r) {
    return (k * r.num) % r.den == 0;
}

// cos(k*pi*p/q) == 0  iff  k*p/q is an odd multiple of 1/2, i.e. 2kp ≡ q (mod 2q).
inline bool cos_multiple_vanishes(std::int64_t k, const Rational& r) {
    std::int64_t t = (2 * k * r.num) % (2 * r.den);
    if (t < 0) t += 2 * r.den;
    return t == r.den;
}

// Coordinate with a rationality annotation. `value` is the absolute
// coordinate; when the tag is Rational the fraction is relative to the axis
// length (value = frac * axis).
enum class CoordTag { Rational, Irrational, Unspecified };

struct Coord {
    double value = 0.0;
    CoordTag tag = CoordTag::Unspecified;
    Rational frac{};   // meaningful only when tag == Rational

    static Coord fraction(std::int64_t p, std::int64_t q, double axis) {
        Coord c;
        c.frac = Rational(p, q);
        c.value = c.frac.value() * axis;
        c.tag = CoordTag::Rational;
        return c;
    }
    static Coord irrational(double v) { return Coord{v, CoordTag::Irrational, {}}; }
    static Coord unspecified(double v) { return Coord{v, CoordTag::Unspecified, {}}; }
};

} // namespace gradsense
