/// @file verifier.hpp
/// Numerical verification of the remainder identities: integrates both sides
/// of   integral v |grad_gamma f|^p = integral (w + extras) |f|^p
///        + integral v C_p(grad_gamma f, eta)
/// for a catalog triple and a concrete test function, and the sharp
/// uncertainty-principle deficit built from the exponential seed triple.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "grushin/cp.hpp"
#include "grushin/field.hpp"
#include "grushin/quadrature.hpp"
#include "grushin/space.hpp"
#include "grushin/weights.hpp"

namespace grushin {

struct IdentitySpec {
    GrushinSpace space;
    WeightTriple triple;
    FieldExpr f;
    QuadratureSettings settings;
    double tolerance = 1e-3;
};

/// One integral at the requested resolution and at doubled panels.
struct TermReport {
    double value = 0.0;
    double refined = 0.0;
    double error_estimate = 0.0;
};

struct VerificationReport {
    std::string name;
    double p = 0.0;
    TermReport lhs;        ///< integral v |grad_gamma f|^p
    TermReport weighted;   ///< integral w |f|^p (principal weight)
    std::vector<TermReport> extras;
    double extras_sum = 0.0;
    double extras_sum_refined = 0.0;
    TermReport remainder;  ///< integral v C_p(grad_gamma f, eta)
    double residual_rel = 0.0;      ///< |lhs - weighted - extras - remainder| / |lhs|
    double residual_refined = 0.0;  ///< same at doubled panels
    std::size_t nodes_used = 0;
    bool support_ok = true;
    bool pass = false;
};

/// All terms are accumulated in a single sweep over one shared grid.
/// eta = grad_gamma f - (f / phi) grad_gamma phi pointwise.
VerificationReport verify_identity(const IdentitySpec& spec);

struct HpwReport {
    double p = 0.0;
    double alpha_star = 0.0;
    TermReport moment;     ///< M = integral |f|^p
    TermReport stretched;  ///< L = integral rho^(p/(p-1)) |f|^p
    TermReport energy;     ///< K = integral (rho/|x|)^(gamma p) |grad_gamma f|^p
    TermReport deficit;    ///< R(alpha) = remainder integral at seed phi
    double lhs = 0.0, lhs_refined = 0.0;  ///< K L^(p-1)
    /// (alpha p')^(p-1) (Q M - alpha p L) L^(p-1); equals (Q/p)^p M^p at alpha*.
    double weighted = 0.0, weighted_refined = 0.0;
    double remainder = 0.0, remainder_refined = 0.0;  ///< L^(p-1) R(alpha)
    double residual_rel = 0.0;
    double residual_refined = 0.0;
    std::size_t nodes_used = 0;
    bool pass = false;
};

/// alpha* = (Q/p)((p-1)/p) M/L, the scale at which the exponential seed
/// turns the uncertainty inequality into an identity for this f.
double hpw_alpha(const GrushinSpace& space, double p, const FieldExpr& f,
                 const QuadratureSettings& settings);

/// Verifies K L^(p-1) = (Q/p)^p M^p + L^(p-1) R(alpha).  When alpha is not
/// supplied it is computed as hpw_alpha; the identity holds for any alpha > 0,
/// with R minimized at alpha*.
HpwReport hpw_deficit(const GrushinSpace& space, double p, const FieldExpr& f,
                      const QuadratureSettings& settings, double tolerance = 1e-3,
                      std::optional<double> alpha = std::nullopt);

}  // namespace grushin
