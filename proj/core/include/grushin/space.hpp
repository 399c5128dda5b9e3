/// @file space.hpp
/// Ambient space for the Baouendi-Grushin calculus: dimensions, the
/// anisotropic quasi-norm and its regularization, and the dilation family.
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace grushin {

/// Hard cap on m + k.  Evaluation buffers are stack-allocated against it.
inline constexpr int kMaxDim = 8;

/// A point (x, y) in R^m x R^k with inline storage.
struct Point {
    std::array<double, kMaxDim> xs{};
    std::array<double, kMaxDim> ys{};
    int m = 0;
    int k = 0;

    Point() = default;
    Point(std::span<const double> x, std::span<const double> y) {
        if (x.size() > kMaxDim || y.size() > kMaxDim)
            throw std::invalid_argument("Point: dimension exceeds kMaxDim");
        m = static_cast<int>(x.size());
        k = static_cast<int>(y.size());
        for (int i = 0; i < m; ++i) xs[static_cast<size_t>(i)] = x[static_cast<size_t>(i)];
        for (int j = 0; j < k; ++j) ys[static_cast<size_t>(j)] = y[static_cast<size_t>(j)];
    }
    Point(std::initializer_list<double> x, std::initializer_list<double> y)
        : Point(std::span<const double>(x.begin(), x.size()),
                std::span<const double>(y.begin(), y.size())) {}

    std::span<const double> x() const { return {xs.data(), static_cast<size_t>(m)}; }
    std::span<const double> y() const { return {ys.data(), static_cast<size_t>(k)}; }
};

/// Parameters of the space: x-block dimension m >= 1, y-block dimension
/// k >= 0, and the exponent gamma >= 0 that weights the y-derivatives.
/// gamma = 0 collapses everything to the Euclidean setting on R^(m+k).
class GrushinSpace {
  public:
    GrushinSpace(int m, int k, double gamma);

    int m() const { return m_; }
    int k() const { return k_; }
    int dim() const { return m_ + k_; }
    double gamma() const { return gamma_; }

    /// Q = m + (1 + gamma) k, the homogeneous dimension under the dilations.
    double homogeneous_dimension() const { return m_ + (1.0 + gamma_) * k_; }

    /// rho(z) = (|x|^(2(1+gamma)) + (1+gamma)^2 |y|^2)^(1/(2(1+gamma))).
    /// Zero exactly at the origin, never NaN for finite input.
    double rho(const Point& z) const;

    /// Same with |x| replaced by |x|_eps = sqrt(eps^2 + |x|^2); smooth
    /// everywhere.  Requires eps > 0.
    double rho_eps(const Point& z, double eps) const;

    /// delta_a(x, y) = (a x, a^(1+gamma) y).  Requires a > 0.
    Point dilate(const Point& z, double a) const;

    /// Throws std::invalid_argument unless z has block sizes (m, k).
    void check_point(const Point& z) const;

  private:
    int m_;
    int k_;
    double gamma_;
};

}  // namespace grushin
