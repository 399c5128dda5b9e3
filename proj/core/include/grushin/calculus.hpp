/// @file calculus.hpp
/// First-order anisotropic calculus: the degenerate gradient and divergence,
/// and the radial form of the degenerate p-Laplacian.
#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "grushin/dual.hpp"
#include "grushin/field.hpp"
#include "grushin/space.hpp"

namespace grushin {

/// Gradient in the anisotropic frame:
/// (d/dx_1 .. d/dx_m, |x|^gamma d/dy_1 .. |x|^gamma d/dy_k).
struct FrameVector {
    std::array<std::complex<double>, kMaxDim> comp{};
    int n = 0;
    double norm() const;
};

FrameVector grad_gamma(const FieldExpr& f, const GrushinSpace& space, const Point& z);

/// A vector field given componentwise in the anisotropic frame
/// (m x-slots followed by k y-slots).
struct VectorFieldExpr {
    std::vector<FieldExpr> comp;
};

/// div_gamma F = sum_i d/dx_i F_i + |x|^gamma sum_j d/dy_j F_{m+j}, the formal
/// adjoint pairing of grad_gamma.
std::complex<double> div_gamma(const VectorFieldExpr& F, const GrushinSpace& space,
                               const Point& z);

/// Scalar profile of the quasi-norm with two derivatives carried through.
using RadialProfile = std::function<Dual2(Dual2)>;

/// Radial form of the degenerate p-Laplacian applied to phi(rho):
///   (|x|^(gamma p) / rho^(gamma p)) |phi'|^(p-2) ((p-1) phi'' + (Q-1) phi'/rho).
double p_grushin_radial(const GrushinSpace& space, double p, const RadialProfile& phi,
                        const Point& z);

}  // namespace grushin
