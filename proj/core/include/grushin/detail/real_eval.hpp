/// @file real_eval.hpp
/// Real-path expression evaluation templated on the scalar type.  With
/// S = double this is the fast value/gradient path; with S = Dual every
/// quantity carries one extra directional derivative, which is how mixed
/// second derivatives of assembled vector fields are obtained.
#pragma once

#include <cmath>

#include "grushin/dual.hpp"
#include "grushin/field.hpp"

namespace grushin::detail {

inline double value_of(double s) { return s; }
inline double value_of(const Dual& s) { return s.v; }
inline bool exact_zero(double s) { return s == 0.0; }
inline bool exact_zero(const Dual& s) { return s.v == 0.0 && s.d == 0.0; }

[[noreturn]] void throw_field(const FieldExpr& e, const std::string& msg);

template <class S>
struct SJet {
    S value{};
    std::array<S, kMaxDim> first{};
};

template <class S>
SJet<S> eval_sjet(const FieldExpr& e, const GrushinSpace& sp, const std::array<S, kMaxDim>& xs,
                  const std::array<S, kMaxDim>& ys, bool want_grad) {
    using std::exp;
    using std::log;
    using std::pow;
    using std::sqrt;

    const int m = sp.m();
    const int n = sp.dim();
    SJet<S> out;

    auto zero_first = [&](SJet<S>& j) {
        for (int i = 0; i < n; ++i) j.first[static_cast<size_t>(i)] = S(0.0);
    };

    switch (e.kind()) {
        case FieldKind::Const: {
            const auto c = e.constant();
            if (c.imag() != 0.0) throw_field(e, "complex constant in a real-valued context");
            out.value = S(c.real());
            zero_first(out);
            return out;
        }
        case FieldKind::CoordX: {
            const int i = e.index();
            if (i >= m) throw_field(e, "x-coordinate index exceeds m");
            out.value = xs[static_cast<size_t>(i)];
            zero_first(out);
            if (want_grad) out.first[static_cast<size_t>(i)] = S(1.0);
            return out;
        }
        case FieldKind::CoordY: {
            const int j = e.index();
            if (j >= sp.k()) throw_field(e, "y-coordinate index exceeds k");
            out.value = ys[static_cast<size_t>(j)];
            zero_first(out);
            if (want_grad) out.first[static_cast<size_t>(m + j)] = S(1.0);
            return out;
        }
        case FieldKind::Rho:
        case FieldKind::RhoEps:
        case FieldKind::AbsX: {
            const double gamma = sp.gamma();
            const double eps = (e.kind() == FieldKind::RhoEps) ? e.param() : 0.0;
            S s2x = S(eps * eps);
            for (int i = 0; i < m; ++i) s2x = s2x + xs[static_cast<size_t>(i)] * xs[static_cast<size_t>(i)];
            if (e.kind() == FieldKind::AbsX) {
                if (want_grad && value_of(s2x) == 0.0)
                    throw_field(e, "differentiation at |x| = 0");
                out.value = sqrt(s2x);
                zero_first(out);
                if (want_grad && !exact_zero(s2x)) {
                    for (int i = 0; i < m; ++i)
                        out.first[static_cast<size_t>(i)] = xs[static_cast<size_t>(i)] / out.value;
                }
                return out;
            }
            S s2y = S(0.0);
            for (int j = 0; j < sp.k(); ++j)
                s2y = s2y + ys[static_cast<size_t>(j)] * ys[static_cast<size_t>(j)];
            const double c = 1.0 + gamma;
            if (want_grad && e.kind() == FieldKind::Rho && gamma > 0.0 && value_of(s2x) == 0.0)
                throw_field(e, "differentiation at |x| = 0");
            const S u = pow(s2x, c) + c * c * s2y;
            if (want_grad && value_of(u) == 0.0) throw_field(e, "differentiation at the origin");
            out.value = pow(u, 1.0 / (2.0 * c));
            zero_first(out);
            if (want_grad && value_of(u) != 0.0) {
                // d rho = e u^(e-1) du with e = 1/(2c)
                const S ue = pow(u, 1.0 / (2.0 * c) - 1.0) * S(1.0 / (2.0 * c));
                const S sx = (c == 1.0) ? S(1.0) : pow(s2x, c - 1.0);
                for (int i = 0; i < m; ++i)
                    out.first[static_cast<size_t>(i)] =
                        ue * S(2.0 * c) * sx * xs[static_cast<size_t>(i)];
                for (int j = 0; j < sp.k(); ++j)
                    out.first[static_cast<size_t>(m + j)] =
                        ue * S(2.0 * c * c) * ys[static_cast<size_t>(j)];
            }
            return out;
        }
        case FieldKind::Add: {
            auto a = eval_sjet(e.child(0), sp, xs, ys, want_grad);
            auto b = eval_sjet(e.child(1), sp, xs, ys, want_grad);
            out.value = a.value + b.value;
            for (int i = 0; i < n; ++i)
                out.first[static_cast<size_t>(i)] =
                    a.first[static_cast<size_t>(i)] + b.first[static_cast<size_t>(i)];
            return out;
        }
        case FieldKind::Sub: {
            auto a = eval_sjet(e.child(0), sp, xs, ys, want_grad);
            auto b = eval_sjet(e.child(1), sp, xs, ys, want_grad);
            out.value = a.value - b.value;
            for (int i = 0; i < n; ++i)
                out.first[static_cast<size_t>(i)] =
                    a.first[static_cast<size_t>(i)] - b.first[static_cast<size_t>(i)];
            return out;
        }
        case FieldKind::Mul: {
            auto a = eval_sjet(e.child(0), sp, xs, ys, want_grad);
            auto b = eval_sjet(e.child(1), sp, xs, ys, want_grad);
            out.value = a.value * b.value;
            for (int i = 0; i < n; ++i)
                out.first[static_cast<size_t>(i)] = a.first[static_cast<size_t>(i)] * b.value +
                                                    a.value * b.first[static_cast<size_t>(i)];
            return out;
        }
        case FieldKind::Div: {
            auto a = eval_sjet(e.child(0), sp, xs, ys, want_grad);
            auto b = eval_sjet(e.child(1), sp, xs, ys, want_grad);
            if (value_of(b.value) == 0.0) throw_field(e, "division by zero");
            out.value = a.value / b.value;
            for (int i = 0; i < n; ++i)
                out.first[static_cast<size_t>(i)] =
                    (a.first[static_cast<size_t>(i)] - out.value * b.first[static_cast<size_t>(i)]) /
                    b.value;
            return out;
        }
        case FieldKind::Neg: {
            auto a = eval_sjet(e.child(0), sp, xs, ys, want_grad);
            out.value = -a.value;
            for (int i = 0; i < n; ++i)
                out.first[static_cast<size_t>(i)] = -a.first[static_cast<size_t>(i)];
            return out;
        }
        case FieldKind::Pow: {
            auto a = eval_sjet(e.child(0), sp, xs, ys, want_grad);
            const double r = e.param();
            const double v0 = value_of(a.value);
            if (v0 < 0.0 && r != std::nearbyint(r))
                throw_field(e, "negative base with non-integer exponent");
            if (v0 == 0.0) {
                bool frozen = exact_zero(a.value);
                for (int i = 0; frozen && i < n; ++i)
                    frozen = exact_zero(a.first[static_cast<size_t>(i)]);
                if (r < 0.0) throw_field(e, "zero base with negative exponent");
                if (frozen || !want_grad) {
                    out.value = S(0.0);
                    zero_first(out);
                    return out;
                }
                if (r < 1.0) throw_field(e, "singular derivative of pow at zero base");
                // r > 1 falls through; the generic slope r u^(r-1) u' vanishes.
            }
            out.value = pow(a.value, r);
            zero_first(out);
            if (want_grad) {
                const S slope = pow(a.value, r - 1.0) * S(r);
                for (int i = 0; i < n; ++i)
                    out.first[static_cast<size_t>(i)] = slope * a.first[static_cast<size_t>(i)];
            }
            return out;
        }
        case FieldKind::Exp: {
            auto a = eval_sjet(e.child(0), sp, xs, ys, want_grad);
            out.value = exp(a.value);
            for (int i = 0; i < n; ++i)
                out.first[static_cast<size_t>(i)] = out.value * a.first[static_cast<size_t>(i)];
            return out;
        }
        case FieldKind::Log: {
            auto a = eval_sjet(e.child(0), sp, xs, ys, want_grad);
            if (!(value_of(a.value) > 0.0)) throw_field(e, "log of a non-positive value");
            out.value = log(a.value);
            for (int i = 0; i < n; ++i)
                out.first[static_cast<size_t>(i)] = a.first[static_cast<size_t>(i)] / a.value;
            return out;
        }
        case FieldKind::Bump: {
            auto a = eval_sjet(e.child(0), sp, xs, ys, want_grad);
            const double t0 = value_of(a.value);
            out.value = S(0.0);
            zero_first(out);
            if (std::abs(t0) >= 1.0) return out;
            const S w = a.value * a.value - S(1.0);
            const S b = exp(S(1.0) / w);
            out.value = b;
            if (want_grad) {
                const S db = b * (S(-2.0) * a.value) / (w * w);
                for (int i = 0; i < n; ++i)
                    out.first[static_cast<size_t>(i)] = db * a.first[static_cast<size_t>(i)];
            }
            return out;
        }
    }
    throw_field(e, "unhandled node kind");
}

}  // namespace grushin::detail
