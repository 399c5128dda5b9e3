/// @file dual.hpp
/// Forward-mode scalar carriers: Dual tracks one first derivative, Dual2
/// tracks first and second derivatives of a univariate quantity.  All
/// derivative rules are exact; domain violations surface as non-finite
/// components for the caller to check.
#pragma once

#include <cmath>

namespace grushin {

struct Dual {
    double v = 0.0;
    double d = 0.0;

    Dual() = default;
    Dual(double value) : v(value) {}
    Dual(double value, double deriv) : v(value), d(deriv) {}
};

inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator-(Dual a) { return {-a.v, -a.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Dual operator/(Dual a, Dual b) {
    const double inv = 1.0 / b.v;
    const double q = a.v * inv;
    return {q, (a.d - q * b.d) * inv};
}

inline Dual exp(Dual a) {
    const double e = std::exp(a.v);
    return {e, e * a.d};
}
inline Dual log(Dual a) { return {std::log(a.v), a.d / a.v}; }
inline Dual sqrt(Dual a) {
    const double s = std::sqrt(a.v);
    return {s, 0.5 * a.d / s};
}
inline Dual pow(Dual a, double r) {
    if (r == 0.0) return {1.0, 0.0};
    if (r == 1.0) return a;
    if (a.v == 0.0) {
        if (r > 1.0) return {0.0, 0.0};
        // 0 < r < 1 or r < 0: derivative (and for r < 0 the value) blows up
        // unless the tangent vanishes identically.
        if (a.d == 0.0) return {r > 0.0 ? 0.0 : HUGE_VAL, 0.0};
        return {r > 0.0 ? 0.0 : HUGE_VAL, HUGE_VAL};
    }
    const double pv = std::pow(a.v, r);
    return {pv, r * std::pow(a.v, r - 1.0) * a.d};
}

struct Dual2 {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;

    Dual2() = default;
    Dual2(double value) : v(value) {}
    Dual2(double value, double first, double second = 0.0) : v(value), d1(first), d2(second) {}
};

inline Dual2 operator+(Dual2 a, Dual2 b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
inline Dual2 operator-(Dual2 a, Dual2 b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
inline Dual2 operator-(Dual2 a) { return {-a.v, -a.d1, -a.d2}; }
inline Dual2 operator*(Dual2 a, Dual2 b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}
inline Dual2 operator/(Dual2 a, Dual2 b) {
    const double inv = 1.0 / b.v;
    const double q = a.v * inv;
    const double q1 = (a.d1 - q * b.d1) * inv;
    return {q, q1, (a.d2 - q * b.d2 - 2.0 * q1 * b.d1) * inv};
}

inline Dual2 exp(Dual2 a) {
    const double e = std::exp(a.v);
    return {e, e * a.d1, e * (a.d1 * a.d1 + a.d2)};
}
inline Dual2 log(Dual2 a) {
    const double inv = 1.0 / a.v;
    const double g = a.d1 * inv;
    return {std::log(a.v), g, a.d2 * inv - g * g};
}
inline Dual2 pow(Dual2 a, double r) {
    if (r == 0.0) return {1.0, 0.0, 0.0};
    if (r == 1.0) return a;
    if (a.v == 0.0) {
        if (a.d1 == 0.0 && a.d2 == 0.0 && r > 0.0) return {0.0, 0.0, 0.0};
        if (r >= 2.0) {
            const double d2 = (r == 2.0) ? 2.0 * a.d1 * a.d1 : 0.0;
            return {0.0, 0.0, d2};
        }
        return {r > 0.0 ? 0.0 : HUGE_VAL, HUGE_VAL, HUGE_VAL};
    }
    const double pv = std::pow(a.v, r);
    const double p1 = r * std::pow(a.v, r - 1.0);
    const double p2 = r * (r - 1.0) * std::pow(a.v, r - 2.0);
    return {pv, p1 * a.d1, p2 * a.d1 * a.d1 + p1 * a.d2};
}
inline Dual2 sqrt(Dual2 a) { return pow(a, 0.5); }

}  // namespace grushin
