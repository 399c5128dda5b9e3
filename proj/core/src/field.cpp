#include "grushin/field.hpp"

#include <charconv>
#include <cmath>

#include "grushin/detail/real_eval.hpp"

namespace grushin {

using cd = std::complex<double>;

// ---- handle --------------------------------------------------------------

FieldExpr FieldExpr::make(FieldNode node) {
    FieldExpr e;
    e.node_ = std::make_shared<const FieldNode>(std::move(node));
    return e;
}

FieldKind FieldExpr::kind() const { return node_->kind; }
cd FieldExpr::constant() const { return node_->c; }
int FieldExpr::index() const { return node_->index; }
double FieldExpr::param() const { return node_->param; }

int FieldExpr::child_count() const {
    switch (node_->kind) {
        case FieldKind::Add:
        case FieldKind::Sub:
        case FieldKind::Mul:
        case FieldKind::Div:
            return 2;
        case FieldKind::Neg:
        case FieldKind::Pow:
        case FieldKind::Exp:
        case FieldKind::Log:
        case FieldKind::Bump:
            return 1;
        default:
            return 0;
    }
}

const FieldExpr& FieldExpr::child(int i) const { return i == 0 ? node_->a : node_->b; }

// ---- builders ------------------------------------------------------------

namespace {

FieldExpr leaf(FieldKind k) {
    FieldNode n;
    n.kind = k;
    return FieldExpr::make(std::move(n));
}

FieldExpr unary(FieldKind k, FieldExpr a, double param = 0.0) {
    FieldNode n;
    n.kind = k;
    n.a = std::move(a);
    n.param = param;
    return FieldExpr::make(std::move(n));
}

FieldExpr binary(FieldKind k, FieldExpr a, FieldExpr b) {
    FieldNode n;
    n.kind = k;
    n.a = std::move(a);
    n.b = std::move(b);
    return FieldExpr::make(std::move(n));
}

}  // namespace

FieldExpr constant(cd c) {
    FieldNode n;
    n.kind = FieldKind::Const;
    n.c = c;
    return FieldExpr::make(std::move(n));
}
FieldExpr constant(double c) { return constant(cd(c, 0.0)); }
FieldExpr imaginary_unit() { return constant(cd(0.0, 1.0)); }

FieldExpr coord_x(int i) {
    if (i < 0 || i >= kMaxDim) throw std::invalid_argument("coord_x: index out of range");
    FieldNode n;
    n.kind = FieldKind::CoordX;
    n.index = i;
    return FieldExpr::make(std::move(n));
}
FieldExpr coord_y(int j) {
    if (j < 0 || j >= kMaxDim) throw std::invalid_argument("coord_y: index out of range");
    FieldNode n;
    n.kind = FieldKind::CoordY;
    n.index = j;
    return FieldExpr::make(std::move(n));
}
FieldExpr rho_expr() { return leaf(FieldKind::Rho); }
FieldExpr absx_expr() { return leaf(FieldKind::AbsX); }
FieldExpr rho_eps_expr(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("rho_eps_expr: eps must be > 0");
    FieldNode n;
    n.kind = FieldKind::RhoEps;
    n.param = eps;
    return FieldExpr::make(std::move(n));
}

FieldExpr operator+(FieldExpr a, FieldExpr b) { return binary(FieldKind::Add, std::move(a), std::move(b)); }
FieldExpr operator-(FieldExpr a, FieldExpr b) { return binary(FieldKind::Sub, std::move(a), std::move(b)); }
FieldExpr operator*(FieldExpr a, FieldExpr b) { return binary(FieldKind::Mul, std::move(a), std::move(b)); }
FieldExpr operator/(FieldExpr a, FieldExpr b) { return binary(FieldKind::Div, std::move(a), std::move(b)); }
FieldExpr operator-(FieldExpr a) {
    // Negating a real constant yields a constant, so the text form "-c" and
    // the builder form produce identical trees.
    if (a.is_valid() && a.kind() == FieldKind::Const && a.constant().imag() == 0.0)
        return constant(-a.constant().real());
    return unary(FieldKind::Neg, std::move(a));
}

FieldExpr pow(FieldExpr base, double exponent) {
    if (exponent == 0.0) return constant(1.0);
    if (exponent == 1.0) return base;
    return unary(FieldKind::Pow, std::move(base), exponent);
}
FieldExpr exp(FieldExpr a) { return unary(FieldKind::Exp, std::move(a)); }
FieldExpr log(FieldExpr a) { return unary(FieldKind::Log, std::move(a)); }
FieldExpr bump(FieldExpr a) { return unary(FieldKind::Bump, std::move(a)); }

// ---- text form -----------------------------------------------------------

namespace {

std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string to_text(const FieldExpr& e) {
    if (!e.is_valid()) return "<empty>";
    switch (e.kind()) {
        case FieldKind::Const: {
            const cd c = e.constant();
            if (c.imag() == 0.0) return fmt_double(c.real());
            if (c.real() == 0.0 && c.imag() == 1.0) return "i";
            return "(" + fmt_double(c.real()) + " + " + fmt_double(c.imag()) + "*i)";
        }
        case FieldKind::CoordX:
            return "x" + std::to_string(e.index() + 1);
        case FieldKind::CoordY:
            return "y" + std::to_string(e.index() + 1);
        case FieldKind::Rho:
            return "rho";
        case FieldKind::AbsX:
            return "absx";
        case FieldKind::RhoEps:
            return "rho_eps(" + fmt_double(e.param()) + ")";
        case FieldKind::Add:
            return "(" + to_text(e.child(0)) + " + " + to_text(e.child(1)) + ")";
        case FieldKind::Sub:
            return "(" + to_text(e.child(0)) + " - " + to_text(e.child(1)) + ")";
        case FieldKind::Mul:
            return "(" + to_text(e.child(0)) + " * " + to_text(e.child(1)) + ")";
        case FieldKind::Div:
            return "(" + to_text(e.child(0)) + " / " + to_text(e.child(1)) + ")";
        case FieldKind::Neg:
            return "(-" + to_text(e.child(0)) + ")";
        case FieldKind::Pow: {
            // '^' binds tighter than unary minus, so a negative constant base
            // must keep its own parentheses to survive a parse round trip.
            std::string base = to_text(e.child(0));
            if (!base.empty() && base.front() == '-') base = "(" + base + ")";
            return "(" + base + " ^ " + fmt_double(e.param()) + ")";
        }
        case FieldKind::Exp:
            return "exp(" + to_text(e.child(0)) + ")";
        case FieldKind::Log:
            return "log(" + to_text(e.child(0)) + ")";
        case FieldKind::Bump:
            return "bump(" + to_text(e.child(0)) + ")";
    }
    return "<unknown>";
}

bool same_structure(const FieldExpr& a, const FieldExpr& b) {
    if (a.is_valid() != b.is_valid()) return false;
    if (!a.is_valid()) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case FieldKind::Const:
            if (a.constant() != b.constant()) return false;
            break;
        case FieldKind::CoordX:
        case FieldKind::CoordY:
            if (a.index() != b.index()) return false;
            break;
        case FieldKind::Pow:
        case FieldKind::RhoEps:
            if (a.param() != b.param()) return false;
            break;
        default:
            break;
    }
    if (a.child_count() != b.child_count()) return false;
    for (int i = 0; i < a.child_count(); ++i)
        if (!same_structure(a.child(i), b.child(i))) return false;
    return true;
}

namespace detail {
void throw_field(const FieldExpr& e, const std::string& msg) {
    throw FieldError(msg + " in '" + to_text(e) + "'");
}
}  // namespace detail

FieldExpr dilate_expr(const FieldExpr& e, const GrushinSpace& space, double a) {
    if (!e.is_valid()) throw std::invalid_argument("dilate_expr: empty expression");
    if (!(a > 0.0)) throw std::invalid_argument("dilate_expr: a must be > 0");
    switch (e.kind()) {
        case FieldKind::Const:
            return e;
        case FieldKind::CoordX:
            return constant(a) * coord_x(e.index());
        case FieldKind::CoordY:
            return constant(std::pow(a, 1.0 + space.gamma())) * coord_y(e.index());
        case FieldKind::Rho:
            return constant(a) * rho_expr();
        case FieldKind::AbsX:
            return constant(a) * absx_expr();
        case FieldKind::RhoEps:
            return constant(a) * rho_eps_expr(e.param() / a);
        case FieldKind::Add:
            return dilate_expr(e.child(0), space, a) + dilate_expr(e.child(1), space, a);
        case FieldKind::Sub:
            return dilate_expr(e.child(0), space, a) - dilate_expr(e.child(1), space, a);
        case FieldKind::Mul:
            return dilate_expr(e.child(0), space, a) * dilate_expr(e.child(1), space, a);
        case FieldKind::Div:
            return dilate_expr(e.child(0), space, a) / dilate_expr(e.child(1), space, a);
        case FieldKind::Neg:
            return -dilate_expr(e.child(0), space, a);
        case FieldKind::Pow:
            return pow(dilate_expr(e.child(0), space, a), e.param());
        case FieldKind::Exp:
            return exp(dilate_expr(e.child(0), space, a));
        case FieldKind::Log:
            return log(dilate_expr(e.child(0), space, a));
        case FieldKind::Bump:
            return bump(dilate_expr(e.child(0), space, a));
    }
    throw std::invalid_argument("dilate_expr: unknown node kind");
}

// ---- bump profile ----------------------------------------------------------

double bump(double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(1.0 / (t * t - 1.0));
}

// ---- complex jets ----------------------------------------------------------

namespace {

struct CJet {
    cd v{};
    std::array<cd, kMaxDim> d{};
    std::array<cd, kMaxDim> dd{};
};

bool nearly_real(cd v) { return std::abs(v.imag()) <= 1e-12 * (1.0 + std::abs(v.real())); }

/// Jet of rho (eps2 = 0), rho_eps, or |x| (absx = true) over the real field.
struct QuasiJet {
    double v = 0.0;
    std::array<double, kMaxDim> d{};
    std::array<double, kMaxDim> dd{};
};

QuasiJet quasi_jet(const FieldExpr& e, const GrushinSpace& sp, const Point& z, double eps2,
                   bool absx, bool want_derivs) {
    QuasiJet out;
    const int m = sp.m();
    double s2x = eps2;
    for (int i = 0; i < m; ++i) s2x += z.xs[static_cast<size_t>(i)] * z.xs[static_cast<size_t>(i)];

    if (absx) {
        out.v = std::sqrt(s2x);
        if (!want_derivs) return out;
        if (out.v == 0.0) detail::throw_field(e, "differentiation at |x| = 0");
        for (int i = 0; i < m; ++i) {
            const double xi = z.xs[static_cast<size_t>(i)];
            out.d[static_cast<size_t>(i)] = xi / out.v;
            out.dd[static_cast<size_t>(i)] = 1.0 / out.v - xi * xi / (out.v * out.v * out.v);
        }
        return out;
    }

    const double gamma = sp.gamma();
    const double c = 1.0 + gamma;
    double s2y = 0.0;
    for (int j = 0; j < sp.k(); ++j) s2y += z.ys[static_cast<size_t>(j)] * z.ys[static_cast<size_t>(j)];
    const double u = std::pow(s2x, c) + c * c * s2y;
    out.v = std::pow(u, 1.0 / (2.0 * c));
    if (!want_derivs) return out;
    if (gamma > 0.0 && eps2 == 0.0 && s2x == 0.0)
        detail::throw_field(e, "differentiation at |x| = 0");
    if (u == 0.0) detail::throw_field(e, "differentiation at the origin");

    const double ex = 1.0 / (2.0 * c);
    const double ue1 = ex * std::pow(u, ex - 1.0);
    const double ue2 = ex * (ex - 1.0) * std::pow(u, ex - 2.0);
    const double sx1 = (c == 1.0) ? 1.0 : std::pow(s2x, c - 1.0);
    for (int i = 0; i < m; ++i) {
        const double xi = z.xs[static_cast<size_t>(i)];
        const double du = 2.0 * c * sx1 * xi;
        double d2u = 2.0 * c * sx1;
        if (c != 1.0) d2u += 4.0 * c * (c - 1.0) * std::pow(s2x, c - 2.0) * xi * xi;
        out.d[static_cast<size_t>(i)] = ue1 * du;
        out.dd[static_cast<size_t>(i)] = ue2 * du * du + ue1 * d2u;
    }
    for (int j = 0; j < sp.k(); ++j) {
        const double yj = z.ys[static_cast<size_t>(j)];
        const double du = 2.0 * c * c * yj;
        out.d[static_cast<size_t>(m + j)] = ue1 * du;
        out.dd[static_cast<size_t>(m + j)] = ue2 * du * du + ue1 * 2.0 * c * c;
    }
    return out;
}

CJet eval_cjet(const FieldExpr& e, const GrushinSpace& sp, const Point& z, bool want_derivs) {
    const int m = sp.m();
    const int n = sp.dim();
    CJet out;

    switch (e.kind()) {
        case FieldKind::Const:
            out.v = e.constant();
            return out;
        case FieldKind::CoordX: {
            const int i = e.index();
            if (i >= m) detail::throw_field(e, "x-coordinate index exceeds m");
            out.v = z.xs[static_cast<size_t>(i)];
            if (want_derivs) out.d[static_cast<size_t>(i)] = 1.0;
            return out;
        }
        case FieldKind::CoordY: {
            const int j = e.index();
            if (j >= sp.k()) detail::throw_field(e, "y-coordinate index exceeds k");
            out.v = z.ys[static_cast<size_t>(j)];
            if (want_derivs) out.d[static_cast<size_t>(m + j)] = 1.0;
            return out;
        }
        case FieldKind::Rho:
        case FieldKind::RhoEps:
        case FieldKind::AbsX: {
            const double eps = (e.kind() == FieldKind::RhoEps) ? e.param() : 0.0;
            const QuasiJet q = quasi_jet(e, sp, z, eps * eps, e.kind() == FieldKind::AbsX, want_derivs);
            out.v = q.v;
            for (int i = 0; i < n; ++i) {
                out.d[static_cast<size_t>(i)] = q.d[static_cast<size_t>(i)];
                out.dd[static_cast<size_t>(i)] = q.dd[static_cast<size_t>(i)];
            }
            return out;
        }
        case FieldKind::Add: {
            const CJet a = eval_cjet(e.child(0), sp, z, want_derivs);
            const CJet b = eval_cjet(e.child(1), sp, z, want_derivs);
            out.v = a.v + b.v;
            for (int i = 0; i < n; ++i) {
                out.d[static_cast<size_t>(i)] = a.d[static_cast<size_t>(i)] + b.d[static_cast<size_t>(i)];
                out.dd[static_cast<size_t>(i)] = a.dd[static_cast<size_t>(i)] + b.dd[static_cast<size_t>(i)];
            }
            return out;
        }
        case FieldKind::Sub: {
            const CJet a = eval_cjet(e.child(0), sp, z, want_derivs);
            const CJet b = eval_cjet(e.child(1), sp, z, want_derivs);
            out.v = a.v - b.v;
            for (int i = 0; i < n; ++i) {
                out.d[static_cast<size_t>(i)] = a.d[static_cast<size_t>(i)] - b.d[static_cast<size_t>(i)];
                out.dd[static_cast<size_t>(i)] = a.dd[static_cast<size_t>(i)] - b.dd[static_cast<size_t>(i)];
            }
            return out;
        }
        case FieldKind::Mul: {
            const CJet a = eval_cjet(e.child(0), sp, z, want_derivs);
            const CJet b = eval_cjet(e.child(1), sp, z, want_derivs);
            out.v = a.v * b.v;
            for (int i = 0; i < n; ++i) {
                const auto s = static_cast<size_t>(i);
                out.d[s] = a.d[s] * b.v + a.v * b.d[s];
                out.dd[s] = a.dd[s] * b.v + 2.0 * a.d[s] * b.d[s] + a.v * b.dd[s];
            }
            return out;
        }
        case FieldKind::Div: {
            const CJet a = eval_cjet(e.child(0), sp, z, want_derivs);
            const CJet b = eval_cjet(e.child(1), sp, z, want_derivs);
            if (b.v == cd(0.0, 0.0)) detail::throw_field(e, "division by zero");
            out.v = a.v / b.v;
            for (int i = 0; i < n; ++i) {
                const auto s = static_cast<size_t>(i);
                out.d[s] = (a.d[s] - out.v * b.d[s]) / b.v;
                out.dd[s] = (a.dd[s] - out.v * b.dd[s] - 2.0 * out.d[s] * b.d[s]) / b.v;
            }
            return out;
        }
        case FieldKind::Neg: {
            const CJet a = eval_cjet(e.child(0), sp, z, want_derivs);
            out.v = -a.v;
            for (int i = 0; i < n; ++i) {
                out.d[static_cast<size_t>(i)] = -a.d[static_cast<size_t>(i)];
                out.dd[static_cast<size_t>(i)] = -a.dd[static_cast<size_t>(i)];
            }
            return out;
        }
        case FieldKind::Pow: {
            const CJet a = eval_cjet(e.child(0), sp, z, want_derivs);
            const double r = e.param();
            if (!nearly_real(a.v)) detail::throw_field(e, "pow of a non-real base");
            const double v0 = a.v.real();
            if (v0 < 0.0 && r != std::nearbyint(r))
                detail::throw_field(e, "negative base with non-integer exponent");
            if (v0 == 0.0) {
                bool frozen = true;
                for (int i = 0; frozen && i < n; ++i)
                    frozen = a.d[static_cast<size_t>(i)] == cd(0.0, 0.0) &&
                             a.dd[static_cast<size_t>(i)] == cd(0.0, 0.0);
                if (r < 0.0) detail::throw_field(e, "zero base with negative exponent");
                if (frozen || !want_derivs) {
                    out.v = 0.0;
                    return out;
                }
                if (r < 2.0) detail::throw_field(e, "singular derivative of pow at zero base");
                // r >= 2 falls through; the generic slopes handle 0^(r-1), 0^(r-2).
            }
            out.v = std::pow(v0, r);
            if (want_derivs) {
                const double s1 = r * std::pow(v0, r - 1.0);
                const double s2 = r * (r - 1.0) * std::pow(v0, r - 2.0);
                for (int i = 0; i < n; ++i) {
                    const auto s = static_cast<size_t>(i);
                    out.d[s] = s1 * a.d[s];
                    out.dd[s] = s2 * a.d[s] * a.d[s] + s1 * a.dd[s];
                }
            }
            return out;
        }
        case FieldKind::Exp: {
            const CJet a = eval_cjet(e.child(0), sp, z, want_derivs);
            out.v = std::exp(a.v);
            for (int i = 0; i < n; ++i) {
                const auto s = static_cast<size_t>(i);
                out.d[s] = out.v * a.d[s];
                out.dd[s] = out.v * (a.d[s] * a.d[s] + a.dd[s]);
            }
            return out;
        }
        case FieldKind::Log: {
            const CJet a = eval_cjet(e.child(0), sp, z, want_derivs);
            if (!nearly_real(a.v) || !(a.v.real() > 0.0))
                detail::throw_field(e, "log of a non-positive value");
            out.v = std::log(a.v.real());
            for (int i = 0; i < n; ++i) {
                const auto s = static_cast<size_t>(i);
                out.d[s] = a.d[s] / a.v;
                out.dd[s] = a.dd[s] / a.v - a.d[s] * a.d[s] / (a.v * a.v);
            }
            return out;
        }
        case FieldKind::Bump: {
            const CJet a = eval_cjet(e.child(0), sp, z, want_derivs);
            if (!nearly_real(a.v)) detail::throw_field(e, "bump of a non-real value");
            const double t = a.v.real();
            if (std::abs(t) >= 1.0) return out;  // identically zero jet
            const double w = t * t - 1.0;
            const double b = std::exp(1.0 / w);
            const double db = b * (-2.0 * t) / (w * w);
            const double d2b = b * ((4.0 * t * t) / (w * w * w * w) + (6.0 * t * t + 2.0) / (w * w * w));
            out.v = b;
            for (int i = 0; i < n; ++i) {
                const auto s = static_cast<size_t>(i);
                out.d[s] = db * a.d[s];
                out.dd[s] = d2b * a.d[s] * a.d[s] + db * a.dd[s];
            }
            return out;
        }
    }
    detail::throw_field(e, "unhandled node kind");
}

}  // namespace

std::complex<double> eval(const FieldExpr& f, const GrushinSpace& space, const Point& z) {
    space.check_point(z);
    if (!f.is_valid()) throw FieldError("eval of an empty expression");
    return eval_cjet(f, space, z, false).v;
}

Jet2 jet2(const FieldExpr& f, const GrushinSpace& space, const Point& z) {
    space.check_point(z);
    if (!f.is_valid()) throw FieldError("jet2 of an empty expression");
    const CJet c = eval_cjet(f, space, z, true);
    Jet2 out;
    out.value = c.v;
    out.n = space.dim();
    for (int i = 0; i < out.n; ++i) {
        out.first[static_cast<size_t>(i)] = c.d[static_cast<size_t>(i)];
        out.second_diag[static_cast<size_t>(i)] = c.dd[static_cast<size_t>(i)];
    }
    return out;
}

double eval_real(const FieldExpr& f, const GrushinSpace& space, const Point& z) {
    space.check_point(z);
    if (!f.is_valid()) throw FieldError("eval_real of an empty expression");
    std::array<double, kMaxDim> xs{};
    std::array<double, kMaxDim> ys{};
    for (int i = 0; i < space.m(); ++i) xs[static_cast<size_t>(i)] = z.xs[static_cast<size_t>(i)];
    for (int j = 0; j < space.k(); ++j) ys[static_cast<size_t>(j)] = z.ys[static_cast<size_t>(j)];
    return detail::eval_sjet<double>(f, space, xs, ys, false).value;
}

RealJet grad_real(const FieldExpr& f, const GrushinSpace& space, const Point& z) {
    space.check_point(z);
    if (!f.is_valid()) throw FieldError("grad_real of an empty expression");
    std::array<double, kMaxDim> xs{};
    std::array<double, kMaxDim> ys{};
    for (int i = 0; i < space.m(); ++i) xs[static_cast<size_t>(i)] = z.xs[static_cast<size_t>(i)];
    for (int j = 0; j < space.k(); ++j) ys[static_cast<size_t>(j)] = z.ys[static_cast<size_t>(j)];
    const auto j = detail::eval_sjet<double>(f, space, xs, ys, true);
    RealJet out;
    out.value = j.value;
    out.n = space.dim();
    for (int i = 0; i < out.n; ++i) out.first[static_cast<size_t>(i)] = j.first[static_cast<size_t>(i)];
    return out;
}

}  // namespace grushin
