/// Shared helpers for the test suites: deterministic RNG, point sampling off
/// the singular sets, finite-difference derivative checks, and the reference
/// bump test functions.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "grushin/field.hpp"
#include "grushin/space.hpp"

namespace testutil {

using grushin::FieldExpr;
using grushin::GrushinSpace;
using grushin::Point;

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline double gaussian(std::mt19937_64& g) {
    return std::normal_distribution<double>()(g);
}

/// Random point with rho in [r0, r1] and |x| >= xfrac * rho.  A random
/// direction is rescaled onto the target sphere with the anisotropic
/// dilation, under which rho is exactly homogeneous.
inline Point annulus_point(std::mt19937_64& g, const GrushinSpace& sp, double r0,
                           double r1, double xfrac) {
    for (;;) {
        Point z;
        z.m = sp.m();
        z.k = sp.k();
        for (int i = 0; i < sp.m(); ++i) z.xs[static_cast<std::size_t>(i)] = gaussian(g);
        for (int j = 0; j < sp.k(); ++j) z.ys[static_cast<std::size_t>(j)] = gaussian(g);
        const double r = sp.rho(z);
        if (!(r > 1e-8)) continue;
        const double target = uniform(g, r0, r1);
        const Point s = sp.dilate(z, target / r);
        double x2 = 0.0;
        for (int i = 0; i < sp.m(); ++i)
            x2 += s.xs[static_cast<std::size_t>(i)] * s.xs[static_cast<std::size_t>(i)];
        if (std::sqrt(x2) >= xfrac * target) return s;
    }
}

/// Reference cutoff supported on the quasi-annulus 1 < rho < 2.
inline FieldExpr annulus_bump() {
    using grushin::bump;
    using grushin::rho_expr;
    return bump((rho_expr() - 1.5) / 0.5);
}

/// Same support intersected with 0.2 < |x| < 2, for triples singular on {x=0}.
inline FieldExpr x_avoiding_bump() {
    using grushin::absx_expr;
    using grushin::bump;
    return annulus_bump() * bump((absx_expr() - 1.1) / 0.9);
}

/// Multiplies a complex phase onto a cutoff (requires k >= 1).
inline FieldExpr with_phase(const FieldExpr& f) {
    using grushin::coord_y;
    using grushin::exp;
    using grushin::imaginary_unit;
    return f * exp(imaginary_unit() * coord_y(0));
}

inline Point shift_axis(const Point& z, int axis, double h) {
    Point s = z;
    if (axis < s.m)
        s.xs[static_cast<std::size_t>(axis)] += h;
    else
        s.ys[static_cast<std::size_t>(axis - s.m)] += h;
    return s;
}

/// Central first difference along a flat coordinate axis.
inline std::complex<double> fd1(const FieldExpr& f, const GrushinSpace& sp,
                                const Point& z, int axis, double h) {
    const auto up = grushin::eval(f, sp, shift_axis(z, axis, h));
    const auto dn = grushin::eval(f, sp, shift_axis(z, axis, -h));
    return (up - dn) / (2.0 * h);
}

/// Central second difference along a flat coordinate axis.
inline std::complex<double> fd2(const FieldExpr& f, const GrushinSpace& sp,
                                const Point& z, int axis, double h) {
    const auto up = grushin::eval(f, sp, shift_axis(z, axis, h));
    const auto mid = grushin::eval(f, sp, z);
    const auto dn = grushin::eval(f, sp, shift_axis(z, axis, -h));
    return (up - 2.0 * mid + dn) / (h * h);
}

}  // namespace testutil
