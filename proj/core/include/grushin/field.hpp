/// @file field.hpp
/// Scalar fields on a GrushinSpace as immutable expression trees, with
/// exact forward-mode differentiation (value, gradient, diagonal second
/// derivatives).  Trees are closed under the surface grammar handled by
/// parser.hpp.
#pragma once

#include <array>
#include <complex>
#include <memory>
#include <stdexcept>
#include <string>

#include "grushin/space.hpp"

namespace grushin {

enum class FieldKind {
    Const,    // complex constant
    CoordX,   // x_i, 0-based index
    CoordY,   // y_j, 0-based index
    Rho,      // anisotropic quasi-norm
    RhoEps,   // regularized quasi-norm, eps stored in param
    AbsX,     // |x|
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,      // real exponent stored in param
    Exp,
    Log,
    Bump,     // exp(1/(t^2-1)) inside |t|<1, 0 outside
};

struct FieldNode;

/// Value-semantic handle to an immutable expression node.
class FieldExpr {
  public:
    FieldExpr() = default;

    bool is_valid() const { return node_ != nullptr; }
    FieldKind kind() const;
    std::complex<double> constant() const;  // Const only
    int index() const;                      // CoordX / CoordY only
    double param() const;                   // Pow exponent / RhoEps eps
    int child_count() const;
    const FieldExpr& child(int i) const;

    static FieldExpr make(FieldNode node);

  private:
    std::shared_ptr<const FieldNode> node_;
};

struct FieldNode {
    FieldKind kind = FieldKind::Const;
    std::complex<double> c{0.0, 0.0};
    int index = 0;
    double param = 0.0;
    FieldExpr a;
    FieldExpr b;
};

// ---- builders ------------------------------------------------------------

FieldExpr constant(std::complex<double> c);
FieldExpr constant(double c);
FieldExpr imaginary_unit();
FieldExpr coord_x(int i);
FieldExpr coord_y(int j);
FieldExpr rho_expr();
FieldExpr rho_eps_expr(double eps);
FieldExpr absx_expr();

FieldExpr operator+(FieldExpr a, FieldExpr b);
FieldExpr operator-(FieldExpr a, FieldExpr b);
FieldExpr operator*(FieldExpr a, FieldExpr b);
FieldExpr operator/(FieldExpr a, FieldExpr b);
FieldExpr operator-(FieldExpr a);
inline FieldExpr operator+(FieldExpr a, double b) { return a + constant(b); }
inline FieldExpr operator+(double a, FieldExpr b) { return constant(a) + b; }
inline FieldExpr operator-(FieldExpr a, double b) { return a - constant(b); }
inline FieldExpr operator-(double a, FieldExpr b) { return constant(a) - b; }
inline FieldExpr operator*(FieldExpr a, double b) { return a * constant(b); }
inline FieldExpr operator*(double a, FieldExpr b) { return constant(a) * b; }
inline FieldExpr operator/(FieldExpr a, double b) { return a / constant(b); }
inline FieldExpr operator/(double a, FieldExpr b) { return constant(a) / b; }

/// pow folds exponents 0 and 1 at construction so that weight formulas
/// like |x|^(gamma p) degenerate cleanly when gamma = 0.
FieldExpr pow(FieldExpr base, double exponent);
FieldExpr exp(FieldExpr a);
FieldExpr log(FieldExpr a);
FieldExpr bump(FieldExpr a);

/// Canonical text form; parser::parse round-trips it.
std::string to_text(const FieldExpr& e);

/// Exact precomposition with the dilation delta_a: the returned tree
/// evaluates to e(a x, a^(1+gamma) y).  Uses the homogeneity of rho, |x|
/// and rho_eps (whose regularization rescales to eps / a).  Requires a > 0.
FieldExpr dilate_expr(const FieldExpr& e, const GrushinSpace& space, double a);

/// Structural equality: same kinds, parameters (bitwise doubles) and children.
bool same_structure(const FieldExpr& a, const FieldExpr& b);

// ---- evaluation ----------------------------------------------------------

class FieldError : public std::runtime_error {
  public:
    explicit FieldError(const std::string& what) : std::runtime_error(what) {}
};

/// Value, gradient and diagonal second derivatives at a point, all with
/// respect to the flat coordinates (x_1..x_m, y_1..y_k).
struct Jet2 {
    std::complex<double> value{};
    std::array<std::complex<double>, kMaxDim> first{};
    std::array<std::complex<double>, kMaxDim> second_diag{};
    int n = 0;
};

std::complex<double> eval(const FieldExpr& f, const GrushinSpace& space, const Point& z);
Jet2 jet2(const FieldExpr& f, const GrushinSpace& space, const Point& z);

/// Value + gradient restricted to real-valued expressions (complex
/// constants are rejected); cheaper than jet2 and used in weight assembly.
struct RealJet {
    double value = 0.0;
    std::array<double, kMaxDim> first{};
    int n = 0;
};

double eval_real(const FieldExpr& f, const GrushinSpace& space, const Point& z);
RealJet grad_real(const FieldExpr& f, const GrushinSpace& space, const Point& z);

/// The reference cutoff profile.
double bump(double t);

}  // namespace grushin
