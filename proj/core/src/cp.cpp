#include "grushin/cp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace grushin {

double cp(double p, std::span<const std::complex<double>> xi,
          std::span<const std::complex<double>> eta) {
    if (!(p > 1.0)) throw std::invalid_argument("cp: p must be > 1");
    if (xi.size() != eta.size())
        throw std::invalid_argument("cp: xi and eta must have the same length");
    double x2 = 0.0;   // |xi|^2
    double a2 = 0.0;   // |xi - eta|^2
    double dot = 0.0;  // Re((xi - eta) . conj(eta))
    for (std::size_t i = 0; i < xi.size(); ++i) {
        const std::complex<double> d = xi[i] - eta[i];
        x2 += std::norm(xi[i]);
        a2 += std::norm(d);
        dot += d.real() * eta[i].real() + d.imag() * eta[i].imag();
    }
    double sub = 0.0;
    if (a2 > 0.0) sub = std::pow(a2, 0.5 * p) + p * std::pow(a2, 0.5 * (p - 2.0)) * dot;
    return std::pow(x2, 0.5 * p) - sub;
}

namespace {

// (1 + delta)^(p/2) - 1 - p s with delta = 2 s + s^2 + t^2, evaluated without
// the catastrophic cancellation the direct form suffers near the origin: the
// binomial series rearranges exactly to (p/2) r^2 + sum_{j>=2} C(p/2, j) delta^j.
double cp_numerator(double p, double s, double t) {
    const double r2 = s * s + t * t;
    const double delta = 2.0 * s + r2;
    if (std::abs(delta) > 0.5) {
        const double a = std::max(1.0 + delta, 0.0);
        return std::pow(a, 0.5 * p) - 1.0 - p * s;
    }
    double acc = 0.5 * p * r2;
    double coef = 0.5 * p;  // C(p/2, 1)
    double dj = delta;      // delta^j
    for (int j = 2; j <= 80; ++j) {
        coef *= (0.5 * p - (j - 1)) / j;
        if (coef == 0.0) break;  // p/2 integer: the series terminates exactly
        dj *= delta;
        const double term = coef * dj;
        acc += term;
        if (std::abs(term) <= 1e-20 * std::abs(acc)) break;
    }
    return acc;
}

}  // namespace

double cp_ratio(double p, double s, double t, CpRatio which) {
    if (!(p > 1.0)) throw std::invalid_argument("cp_ratio: p must be > 1");
    const double r2 = s * s + t * t;
    if (!(r2 > 0.0)) throw std::invalid_argument("cp_ratio: (s, t) must be nonzero");
    const double num = cp_numerator(p, s, t);
    if (which == CpRatio::Plain) return num / std::pow(r2, 0.5 * p);
    const double a = std::max(t * t + s * s + 2.0 * s + 1.0, 0.0);
    return num / (std::pow(std::sqrt(a) + 1.0, p - 2.0) * r2);
}

namespace {

// Search in (u, w) = (atan s, atan t) so one bounded square covers the plane.
double eval_uw(double p, CpRatio which, double u, double w) {
    return cp_ratio(p, std::tan(u), std::tan(w), which);
}

constexpr double kPi = 3.14159265358979323846;

struct Extremum {
    double value = 0.0;
    double bracket = 0.0;
};

// Minimizes the quotient (negate = true flips sign to search for the sup).
// `limits` holds values attained only in limits (r -> 0 or r -> infinity
// along rays); they join the candidate set with a zero-width bracket.
Extremum find_min(double p, CpRatio which, bool negate,
                  const std::vector<double>& limits) {
    const auto f = [&](double u, double w) {
        const double v = eval_uw(p, which, u, w);
        return negate ? -v : v;
    };

    const double umax = 0.5 * kPi - 1e-6;  // |s|, |t| up to ~1e6
    const int n = 401;
    const double step = 2.0 * umax / (n - 1);

    double bu = 0.0, bw = 0.0;
    double best = std::numeric_limits<double>::infinity();
    const auto consider = [&](double u, double w) {
        if (u == 0.0 && w == 0.0) return;
        const double v = f(u, w);
        if (std::isfinite(v) && v < best) {
            best = v;
            bu = u;
            bw = w;
        }
    };

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            consider(-umax + step * i, -umax + step * j);

    // Ray probes close to the origin and far out, where the grid is sparse.
    for (double r : {1e-6, 1e6}) {
        for (int j = 0; j < 720; ++j) {
            const double th = 2.0 * kPi * j / 720.0;
            consider(std::atan(r * std::cos(th)), std::atan(r * std::sin(th)));
        }
    }

    // Shrinking-box pattern refinement around the best sample.
    double h = step;
    std::vector<double> history;
    const double ulim = 0.5 * kPi - 1e-9;
    while (h > 1e-12) {
        double cu = bu, cw = bw;
        for (int di = -2; di <= 2; ++di) {
            for (int dj = -2; dj <= 2; ++dj) {
                const double u = std::clamp(cu + 0.5 * h * di, -ulim, ulim);
                const double w = std::clamp(cw + 0.5 * h * dj, -ulim, ulim);
                consider(u, w);
            }
        }
        history.push_back(best);
        h *= 0.6;
    }
    double bracket = 1e-12;
    if (history.size() >= 6)
        bracket += std::abs(history[history.size() - 6] - history.back());

    for (double lim : limits) {
        const double v = negate ? -lim : lim;
        if (v < best) {
            best = v;
            bracket = 1e-12;
        }
    }
    return {negate ? -best : best, bracket};
}

}  // namespace

CpConstants extremal_constants(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("extremal_constants: p must be > 1");
    CpConstants out;
    out.p = p;
    if (p >= 2.0) {
        // As |(s,t)| -> infinity the plain quotient tends to 1; for p = 2 it
        // also tends to 1 at the origin (it is identically 1 then).
        std::vector<double> limits = {1.0};
        out.has_c1 = true;
        const Extremum e = find_min(p, CpRatio::Plain, false, limits);
        out.c1 = {e.value, e.bracket};
    } else {
        // Shifted quotient limits: 1 at infinity; along a ray at angle th to
        // the s-axis it tends to (p/2 + p(p-2)/2 cos^2 th) / 2^(p-2) at the
        // origin.
        std::vector<double> limits = {1.0};
        for (int j = 0; j <= 720; ++j) {
            const double c = std::cos(kPi * j / 720.0);
            limits.push_back((0.5 * p + 0.5 * p * (p - 2.0) * c * c) /
                             std::pow(2.0, p - 2.0));
        }
        out.has_c2c3 = true;
        const Extremum lo = find_min(p, CpRatio::Shifted, false, limits);
        const Extremum hi = find_min(p, CpRatio::Shifted, true, limits);
        out.c2_inf = {lo.value, lo.bracket};
        out.c3_sup = {hi.value, hi.bracket};
    }
    return out;
}

}  // namespace grushin
