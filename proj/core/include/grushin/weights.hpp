/// @file weights.hpp
/// Catalog of weight triples (v, phi, w): for each, the remainder identity
///   integral v |grad_gamma f|^p
///     = integral (w + extras) |f|^p + integral v C_p(grad_gamma f, eta)
/// holds exactly with eta = grad_gamma f - (f / phi) grad_gamma phi, because
/// w + extras equals -div_gamma(v |grad_gamma phi|^(p-2) grad_gamma phi) / phi^(p-1).
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grushin/calculus.hpp"
#include "grushin/field.hpp"
#include "grushin/space.hpp"

namespace grushin {

enum class DomainKind { WholeSpace, Ball, XSlab, HalfQuadrant, Annulus };

/// Geometric region test functions must be supported in.  The exclude_* flags
/// mark lower-dimensional singular sets that supports must also avoid.
struct DomainDescriptor {
    DomainKind kind = DomainKind::WholeSpace;
    double radius = 0.0;        // Ball / XSlab
    double inner = 0.0;         // Annulus
    double outer = 0.0;         // Annulus
    bool exclude_origin = false;
    bool exclude_x_axis = false;  // the set {x = 0}

    bool contains(const GrushinSpace& space, const Point& z) const;

    static DomainDescriptor whole_space();
    static DomainDescriptor ball(double R);
    static DomainDescriptor x_slab(double R);
    static DomainDescriptor half_quadrant();
    static DomainDescriptor annulus(double r0, double r1);
};

struct ExtraTerm {
    double coefficient = 0.0;
    FieldExpr weight;
};

/// Profiles in rho with the anisotropic frame factor |x|^(gamma p)/rho^(gamma p)
/// cancelled out of both v and w; they satisfy the one-dimensional balance
///   (rho^(Q-1) v |phi'|^(p-2) phi')' + rho^(Q-1) w |phi|^(p-2) phi = 0.
struct RadialParts {
    RadialProfile v;
    RadialProfile phi;
    RadialProfile w;  // w plus all extra terms combined
};

struct WeightTriple {
    std::string name;
    std::map<std::string, double> params;  // includes "p"
    FieldExpr v;
    FieldExpr phi;
    FieldExpr w;                   // principal closed-form weight
    std::vector<ExtraTerm> extras;  // remaining coefficient * weight terms
    DomainDescriptor domain;
    bool w_nonnegative = true;
    std::optional<RadialParts> radial;
};

using Params = std::map<std::string, double>;

/// Names: nch, dambrosio, dambrosio-x, log-rho, log-x, hardy-poincare, super,
/// yener-nonradial, hpw-seed.  Throws std::invalid_argument naming the
/// violated constraint when the parameters are inadmissible.
WeightTriple catalog_get(const std::string& name, const GrushinSpace& space,
                         const Params& params);

std::vector<std::string> catalog_names();

/// Pointwise w = -div_gamma(v |grad_gamma phi|^(p-2) grad_gamma phi) / phi^(p-1),
/// computed with forward-mode derivatives (no finite differences).
double derive_weight(const GrushinSpace& space, double p, const FieldExpr& v,
                     const FieldExpr& phi, const Point& z);

/// Max over the grid of |(rho^(Q-1) v |phi'|^(p-2) phi')' + rho^(Q-1) w |phi|^(p-2) phi|,
/// normalized by the largest magnitude either term attains on the grid.
double bessel_residual(const GrushinSpace& space, double p, const RadialProfile& v,
                       const RadialProfile& w, const RadialProfile& phi,
                       std::span<const double> rho_grid);

}  // namespace grushin
