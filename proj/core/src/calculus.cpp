#include "grushin/calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace grushin {

double FrameVector::norm() const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::norm(comp[i]);
    return std::sqrt(s);
}

FrameVector grad_gamma(const FieldExpr& f, const GrushinSpace& space, const Point& z) {
    const Jet2 j = jet2(f, space, z);
    FrameVector out;
    out.n = j.n;
    const int m = space.m();
    double xg = 1.0;
    if (space.gamma() > 0.0) {
        double x2 = 0.0;
        for (int i = 0; i < m; ++i) x2 += z.xs[i] * z.xs[i];
        xg = std::pow(x2, 0.5 * space.gamma());
    }
    for (int i = 0; i < m; ++i) out.comp[i] = j.first[i];
    for (int i = m; i < j.n; ++i) out.comp[i] = xg * j.first[i];
    return out;
}

std::complex<double> div_gamma(const VectorFieldExpr& F, const GrushinSpace& space,
                               const Point& z) {
    const int m = space.m();
    const int n = m + space.k();
    if (static_cast<int>(F.comp.size()) != n)
        throw std::invalid_argument("div_gamma: vector field must have m + k components");
    double xg = 1.0;
    if (space.gamma() > 0.0) {
        double x2 = 0.0;
        for (int i = 0; i < m; ++i) x2 += z.xs[i] * z.xs[i];
        xg = std::pow(x2, 0.5 * space.gamma());
    }
    std::complex<double> div = 0.0;
    for (int i = 0; i < n; ++i) {
        const Jet2 j = jet2(F.comp[i], space, z);
        div += (i < m ? 1.0 : xg) * j.first[i];
    }
    return div;
}

double p_grushin_radial(const GrushinSpace& space, double p, const RadialProfile& phi,
                        const Point& z) {
    if (!(p > 1.0)) throw std::invalid_argument("p_grushin_radial: p must be > 1");
    if (!phi) throw std::invalid_argument("p_grushin_radial: empty profile");
    space.check_point(z);
    const double r = space.rho(z);
    if (!(r > 0.0))
        throw FieldError("p_grushin_radial: evaluation at the origin");
    const Dual2 j = phi(Dual2{r, 1.0, 0.0});
    const double g = j.d1;
    double mag = 1.0;  // |phi'|^(p-2)
    if (p != 2.0) {
        if (g == 0.0 && p < 2.0)
            throw FieldError("p_grushin_radial: phi'(rho) = 0 makes |phi'|^(p-2) singular");
        mag = std::pow(std::abs(g), p - 2.0);
    }
    double frame = 1.0;  // |x|^(gamma p) / rho^(gamma p)
    if (space.gamma() > 0.0) {
        double x2 = 0.0;
        for (int i = 0; i < space.m(); ++i) x2 += z.xs[i] * z.xs[i];
        if (x2 == 0.0)
            throw FieldError("p_grushin_radial: evaluation on the singular set {x = 0}");
        frame = std::pow(x2, 0.5 * space.gamma() * p) / std::pow(r, space.gamma() * p);
    }
    const double q = space.homogeneous_dimension();
    return frame * mag * ((p - 1.0) * j.d2 + (q - 1.0) * g / r);
}

}  // namespace grushin
