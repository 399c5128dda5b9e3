#include "grushin/space.hpp"

#include <cmath>

namespace grushin {

namespace {

double quasi_norm(std::span<const double> x, std::span<const double> y, double gamma,
                  double eps2) {
    double x2 = eps2;
    for (double xi : x) x2 += xi * xi;
    double y2 = 0.0;
    for (double yj : y) y2 += yj * yj;
    const double c = 1.0 + gamma;
    const double s = std::pow(x2, c) + c * c * y2;
    return std::pow(s, 1.0 / (2.0 * c));
}

}  // namespace

GrushinSpace::GrushinSpace(int m, int k, double gamma) : m_(m), k_(k), gamma_(gamma) {
    if (m < 1) throw std::invalid_argument("GrushinSpace: m must be >= 1");
    if (k < 0) throw std::invalid_argument("GrushinSpace: k must be >= 0");
    if (m + k > kMaxDim) throw std::invalid_argument("GrushinSpace: m + k exceeds kMaxDim");
    if (!(gamma >= 0.0)) throw std::invalid_argument("GrushinSpace: gamma must be >= 0");
}

void GrushinSpace::check_point(const Point& z) const {
    if (z.m != m_ || z.k != k_)
        throw std::invalid_argument("Point block sizes do not match the space");
}

double GrushinSpace::rho(const Point& z) const {
    check_point(z);
    return quasi_norm(z.x(), z.y(), gamma_, 0.0);
}

double GrushinSpace::rho_eps(const Point& z, double eps) const {
    check_point(z);
    if (!(eps > 0.0)) throw std::invalid_argument("rho_eps: eps must be > 0");
    return quasi_norm(z.x(), z.y(), gamma_, eps * eps);
}

Point GrushinSpace::dilate(const Point& z, double a) const {
    check_point(z);
    if (!(a > 0.0)) throw std::invalid_argument("dilate: a must be > 0");
    Point out = z;
    const double ay = std::pow(a, 1.0 + gamma_);
    for (int i = 0; i < z.m; ++i) out.xs[static_cast<size_t>(i)] *= a;
    for (int j = 0; j < z.k; ++j) out.ys[static_cast<size_t>(j)] *= ay;
    return out;
}

}  // namespace grushin
