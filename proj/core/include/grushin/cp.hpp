/// @file cp.hpp
/// The p-convexity remainder C_p and the extremal constants of its two
/// normalized quotients.
#pragma once

#include <complex>
#include <span>

namespace grushin {

/// C_p(xi, eta) = |xi|^p - |xi-eta|^p - p |xi-eta|^(p-2) Re((xi-eta).conj(eta)),
/// with |0|^(p-2) * 0 read as 0.  Nonnegative for every p > 1.
double cp(double p, std::span<const std::complex<double>> xi,
          std::span<const std::complex<double>> eta);

/// Both quotients share the numerator (t^2+s^2+2s+1)^(p/2) - 1 - p s and are
/// parametrized by eta/|xi-eta| = (s, t) in the plane spanned by the pair.
enum class CpRatio {
    Plain,    // divide by (t^2+s^2)^(p/2);            C_p >= c |eta|^p
    Shifted,  // divide by (sqrt(t^2+s^2+2s+1)+1)^(p-2) (t^2+s^2);
              // C_p vs |eta|^2 / (|xi|+|xi-eta|)^(2-p)
};

double cp_ratio(double p, double s, double t, CpRatio which);

struct Bracketed {
    double value = 0.0;
    double bracket = 0.0;
};

/// c1 = inf of the plain quotient (p >= 2, lies in (0, 1]);
/// c2 = inf and c3 = sup of the shifted quotient (1 < p < 2).
struct CpConstants {
    double p = 0.0;
    bool has_c1 = false;
    Bracketed c1;
    bool has_c2c3 = false;
    Bracketed c2_inf;
    Bracketed c3_sup;
};

/// Deterministic global search: tan-compactified dense grid, near-zero and
/// near-infinity ray probes, analytic limit values along rays, then local
/// shrinking-box refinement.
CpConstants extremal_constants(double p);

}  // namespace grushin
