#include "grushin/weights.hpp"

#include <cmath>
#include <stdexcept>

#include "grushin/detail/real_eval.hpp"

namespace grushin {

// ---------------------------------------------------------------------------
// Domains

bool DomainDescriptor::contains(const GrushinSpace& space, const Point& z) const {
    switch (kind) {
        case DomainKind::WholeSpace:
            return true;
        case DomainKind::Ball:
            return space.rho(z) < radius;
        case DomainKind::XSlab: {
            double x2 = 0.0;
            for (int i = 0; i < space.m(); ++i) x2 += z.xs[i] * z.xs[i];
            return std::sqrt(x2) < radius;
        }
        case DomainKind::HalfQuadrant:
            return space.k() >= 1 && z.xs[0] > 1.0 && z.ys[0] > 1.0;
        case DomainKind::Annulus: {
            const double r = space.rho(z);
            return inner < r && r < outer;
        }
    }
    return false;
}

DomainDescriptor DomainDescriptor::whole_space() { return {}; }

DomainDescriptor DomainDescriptor::ball(double R) {
    DomainDescriptor d;
    d.kind = DomainKind::Ball;
    d.radius = R;
    return d;
}

DomainDescriptor DomainDescriptor::x_slab(double R) {
    DomainDescriptor d;
    d.kind = DomainKind::XSlab;
    d.radius = R;
    return d;
}

DomainDescriptor DomainDescriptor::half_quadrant() {
    DomainDescriptor d;
    d.kind = DomainKind::HalfQuadrant;
    return d;
}

DomainDescriptor DomainDescriptor::annulus(double r0, double r1) {
    DomainDescriptor d;
    d.kind = DomainKind::Annulus;
    d.inner = r0;
    d.outer = r1;
    return d;
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

void require(bool ok, const std::string& entry, const std::string& constraint) {
    if (!ok) throw std::invalid_argument(entry + ": requires " + constraint);
}

double get_param(const Params& ps, const std::string& entry, const std::string& key) {
    const auto it = ps.find(key);
    if (it == ps.end())
        throw std::invalid_argument(entry + ": missing parameter '" + key + "'");
    return it->second;
}

void check_keys(const Params& ps, const std::string& entry,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : ps) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok)
            throw std::invalid_argument(entry + ": unknown parameter '" + key + "'");
    }
}

double get_p(const Params& ps, const std::string& entry) {
    const double p = get_param(ps, entry, "p");
    require(p > 1.0, entry, "p > 1");
    return p;
}

// |x|^(gamma p) / rho^(gamma p), the anisotropic frame factor.
FieldExpr frame_factor(double gp) {
    if (gp == 0.0) return constant(1.0);
    return pow(absx_expr(), gp) * pow(rho_expr(), -gp);
}

WeightTriple make_nch(const GrushinSpace& space, const Params& ps) {
    const std::string entry = "nch";
    check_keys(ps, entry, {"p", "R"});
    const double p = get_p(ps, entry);
    const double R = get_param(ps, entry, "R");
    require(R > 0.0, entry, "R > 0");
    const double q = space.homogeneous_dimension();
    const double gp = space.gamma() * p;
    const double c = (p - 1.0) / p;

    WeightTriple t;
    t.name = entry;
    t.params = ps;
    const FieldExpr rim = constant(R) - rho_expr();
    t.v = constant(1.0);
    t.phi = pow(rim, c);
    t.w = constant(std::pow(c, p)) * frame_factor(gp) * pow(rim, -p);
    t.extras.push_back(
        {(q - 1.0) * std::pow(c, p - 1.0),
         frame_factor(gp) * pow(rim, -(p - 1.0)) * pow(rho_expr(), -1.0)});
    t.domain = DomainDescriptor::ball(R);
    t.domain.exclude_origin = true;

    RadialParts rad;
    rad.v = [](Dual2 r) {
        (void)r;
        return Dual2{1.0, 0.0, 0.0};
    };
    rad.phi = [R, c](Dual2 r) { return pow(Dual2(R) - r, c); };
    rad.w = [R, c, p, q](Dual2 r) {
        const Dual2 rim2 = Dual2(R) - r;
        return Dual2(std::pow(c, p)) * pow(rim2, -p) +
               Dual2((q - 1.0) * std::pow(c, p - 1.0)) * pow(rim2, -(p - 1.0)) / r;
    };
    t.radial = rad;
    return t;
}

WeightTriple make_dambrosio(const GrushinSpace& space, const Params& ps) {
    const std::string entry = "dambrosio";
    check_keys(ps, entry, {"p", "alpha", "beta"});
    const double p = get_p(ps, entry);
    const double alpha = get_param(ps, entry, "alpha");
    const double beta = get_param(ps, entry, "beta");
    const double q = space.homogeneous_dimension();
    const double gamma = space.gamma();
    const double gp = gamma * p;
    const double c = (q + beta - alpha) / p;
    require(c != 0.0, entry, "Q + beta - alpha != 0");

    WeightTriple t;
    t.name = entry;
    t.params = ps;
    t.v = pow(absx_expr(), beta - gp) * pow(rho_expr(), (1.0 + gamma) * p - alpha);
    t.phi = pow(rho_expr(), -c);
    t.w = constant(std::pow(std::abs(c), p)) * pow(absx_expr(), beta) *
          pow(rho_expr(), -alpha);
    t.domain = DomainDescriptor::whole_space();
    t.domain.exclude_origin = true;
    t.domain.exclude_x_axis = (beta - gp < 0.0) || (beta < 0.0);

    if (beta == gp) {
        const double ev = (1.0 + gamma) * p - alpha;
        const double cw = std::pow(std::abs(c), p);
        RadialParts rad;
        rad.v = [ev](Dual2 r) { return pow(r, ev); };
        rad.phi = [c](Dual2 r) { return pow(r, -c); };
        rad.w = [cw, gp, alpha](Dual2 r) { return Dual2(cw) * pow(r, gp - alpha); };
        t.radial = rad;
    }
    return t;
}

WeightTriple make_dambrosio_x(const GrushinSpace& space, const Params& ps) {
    const std::string entry = "dambrosio-x";
    check_keys(ps, entry, {"p", "alpha"});
    const double p = get_p(ps, entry);
    const double alpha = get_param(ps, entry, "alpha");
    const double m = space.m();
    require(m + alpha < 0.0, entry, "alpha < -m");
    const double s = -(m + alpha) / p;

    WeightTriple t;
    t.name = entry;
    t.params = ps;
    t.v = pow(absx_expr(), alpha + p);
    t.phi = pow(absx_expr(), s);
    t.w = constant(std::pow(s, p)) * pow(absx_expr(), alpha);
    t.domain = DomainDescriptor::whole_space();
    t.domain.exclude_x_axis = true;
    return t;
}

WeightTriple make_log_rho(const GrushinSpace& space, const Params& ps) {
    const std::string entry = "log-rho";
    check_keys(ps, entry, {"p", "alpha", "R"});
    const double p = get_p(ps, entry);
    const double alpha = get_param(ps, entry, "alpha");
    const double R = get_param(ps, entry, "R");
    require(alpha < -1.0, entry, "alpha < -1");
    require(R > 0.0, entry, "R > 0");
    const double q = space.homogeneous_dimension();
    require(q > p, entry, "Q > p");
    const double gp = space.gamma() * p;
    const double s = -(alpha + 1.0) / p;

    WeightTriple t;
    t.name = entry;
    t.params = ps;
    const FieldExpr lg = log(constant(R) / rho_expr());
    const FieldExpr drop = frame_factor(gp) * pow(rho_expr(), -p);
    t.v = pow(lg, alpha + p);
    t.phi = pow(lg, s);
    t.w = constant(std::pow(s, p)) * drop * pow(lg, alpha);
    t.extras.push_back({std::pow(s, p - 1.0) * (q - p), drop * pow(lg, alpha + 1.0)});
    t.domain = DomainDescriptor::ball(R);
    t.domain.exclude_origin = true;

    RadialParts rad;
    rad.v = [R, alpha, p](Dual2 r) { return pow(log(Dual2(R) / r), alpha + p); };
    rad.phi = [R, s](Dual2 r) { return pow(log(Dual2(R) / r), s); };
    rad.w = [R, s, p, q, alpha](Dual2 r) {
        const Dual2 lg2 = log(Dual2(R) / r);
        const Dual2 rp = pow(r, -p);
        return Dual2(std::pow(s, p)) * pow(lg2, alpha) * rp +
               Dual2(std::pow(s, p - 1.0) * (q - p)) * pow(lg2, alpha + 1.0) * rp;
    };
    t.radial = rad;
    return t;
}

WeightTriple make_log_x(const GrushinSpace& space, const Params& ps) {
    const std::string entry = "log-x";
    check_keys(ps, entry, {"p", "alpha", "R"});
    const double p = get_p(ps, entry);
    const double alpha = get_param(ps, entry, "alpha");
    const double R = get_param(ps, entry, "R");
    require(alpha < -1.0, entry, "alpha < -1");
    require(R > 0.0, entry, "R > 0");
    const double m = space.m();
    require(m > p, entry, "m > p");
    const double s = -(alpha + 1.0) / p;

    WeightTriple t;
    t.name = entry;
    t.params = ps;
    const FieldExpr lg = log(constant(R) / absx_expr());
    const FieldExpr drop = pow(absx_expr(), -p);
    t.v = pow(lg, alpha + p);
    t.phi = pow(lg, s);
    t.w = constant(std::pow(s, p)) * drop * pow(lg, alpha);
    t.extras.push_back({std::pow(s, p - 1.0) * (m - p), drop * pow(lg, alpha + 1.0)});
    t.domain = DomainDescriptor::x_slab(R);
    t.domain.exclude_x_axis = true;
    return t;
}

WeightTriple make_hardy_poincare(const GrushinSpace& space, const Params& ps) {
    const std::string entry = "hardy-poincare";
    check_keys(ps, entry, {"p", "alpha"});
    const double p = get_p(ps, entry);
    const double alpha = get_param(ps, entry, "alpha");
    require(alpha > 1.0, entry, "alpha > 1");
    const double q = space.homogeneous_dimension();
    const double gp = space.gamma() * p;
    const double pc = p / (p - 1.0);
    const double c = (alpha - 1.0) * pc;

    WeightTriple t;
    t.name = entry;
    t.params = ps;
    const FieldExpr base = constant(1.0) + pow(rho_expr(), pc);
    t.v = pow(base, alpha * (p - 1.0));
    t.phi = pow(base, 1.0 - alpha);
    t.w = constant(q * std::pow(c, p - 1.0)) * frame_factor(gp) *
          pow(base, (alpha - 1.0) * (p - 1.0));
    t.domain = DomainDescriptor::whole_space();

    RadialParts rad;
    rad.v = [pc, alpha, p](Dual2 r) { return pow(Dual2(1.0) + pow(r, pc), alpha * (p - 1.0)); };
    rad.phi = [pc, alpha](Dual2 r) { return pow(Dual2(1.0) + pow(r, pc), 1.0 - alpha); };
    rad.w = [pc, alpha, p, q, c](Dual2 r) {
        return Dual2(q * std::pow(c, p - 1.0)) *
               pow(Dual2(1.0) + pow(r, pc), (alpha - 1.0) * (p - 1.0));
    };
    t.radial = rad;
    return t;
}

WeightTriple make_super(const GrushinSpace& space, const Params& ps) {
    const std::string entry = "super";
    check_keys(ps, entry, {"p", "a", "b", "alpha", "beta", "ell"});
    const double p = get_p(ps, entry);
    const double a = get_param(ps, entry, "a");
    const double b = get_param(ps, entry, "b");
    const double alpha = get_param(ps, entry, "alpha");
    const double beta = get_param(ps, entry, "beta");
    const double ell = get_param(ps, entry, "ell");
    require(a > 0.0, entry, "a > 0");
    require(b > 0.0, entry, "b > 0");
    require(alpha * beta > 0.0, entry, "alpha * beta > 0");
    const double q = space.homogeneous_dimension();
    require(q >= p * (ell + 1.0), entry, "Q >= p (ell + 1)");
    const double gp = space.gamma() * p;
    const double s = (q - p * ell - p) / p;

    WeightTriple t;
    t.name = entry;
    t.params = ps;
    const FieldExpr grow = constant(a) + constant(b) * pow(rho_expr(), alpha);
    t.v = pow(grow, beta) * pow(rho_expr(), -ell * p);
    t.phi = pow(rho_expr(), -s);
    t.w = constant(std::pow(s, p)) * pow(grow, beta) * frame_factor(gp) *
          pow(rho_expr(), -(ell * p + p));
    t.extras.push_back({std::pow(s, p - 1.0) * alpha * beta * b,
                        pow(grow, beta - 1.0) * frame_factor(gp) *
                            pow(rho_expr(), alpha - (ell * p + p))});
    t.domain = DomainDescriptor::whole_space();
    t.domain.exclude_origin = true;

    RadialParts rad;
    rad.v = [a, b, alpha, beta, ell, p](Dual2 r) {
        return pow(Dual2(a) + Dual2(b) * pow(r, alpha), beta) * pow(r, -ell * p);
    };
    rad.phi = [s](Dual2 r) { return pow(r, -s); };
    rad.w = [a, b, alpha, beta, ell, p, s](Dual2 r) {
        const Dual2 g2 = Dual2(a) + Dual2(b) * pow(r, alpha);
        return Dual2(std::pow(s, p)) * pow(g2, beta) * pow(r, -(ell * p + p)) +
               Dual2(std::pow(s, p - 1.0) * alpha * beta * b) * pow(g2, beta - 1.0) *
                   pow(r, alpha - (ell * p + p));
    };
    t.radial = rad;
    return t;
}

WeightTriple make_yener_nonradial(const GrushinSpace& space, const Params& ps) {
    const std::string entry = "yener-nonradial";
    check_keys(ps, entry, {"p"});
    const double p = get_p(ps, entry);
    require(space.k() >= 1, entry, "k >= 1");
    const double gamma = space.gamma();

    WeightTriple t;
    t.name = entry;
    t.params = ps;
    const FieldExpr x1 = coord_x(0);
    const FieldExpr y1 = coord_y(0);
    t.v = pow(y1 * pow(absx_expr(), -gamma), p - 2.0) * log(x1);
    t.phi = log(y1);
    t.w = pow(absx_expr(), 2.0 * gamma) * log(x1) * pow(y1, -2.0) *
          pow(log(y1), -(p - 1.0));
    t.domain = DomainDescriptor::half_quadrant();
    return t;
}

WeightTriple make_hpw_seed(const GrushinSpace& space, const Params& ps) {
    const std::string entry = "hpw-seed";
    check_keys(ps, entry, {"p", "alpha"});
    const double p = get_p(ps, entry);
    const double alpha = get_param(ps, entry, "alpha");
    require(alpha > 0.0, entry, "alpha > 0");
    const double q = space.homogeneous_dimension();
    const double gamma = space.gamma();
    const double gp = gamma * p;
    const double pc = p / (p - 1.0);
    const double c = alpha * pc;

    WeightTriple t;
    t.name = entry;
    t.params = ps;
    // Reciprocal of the frame factor: the seed identity carries 1/|grad rho|^p.
    t.v = (gp == 0.0) ? constant(1.0) : pow(rho_expr(), gp) * pow(absx_expr(), -gp);
    t.phi = exp(constant(-alpha) * pow(rho_expr(), pc));
    t.w = constant(std::pow(c, p - 1.0)) *
          (constant(q) - constant(alpha * p) * pow(rho_expr(), pc));
    t.domain = DomainDescriptor::whole_space();
    t.domain.exclude_x_axis = gamma > 0.0;
    t.domain.exclude_origin = (gamma > 0.0) || (p != 2.0);
    t.w_nonnegative = false;

    RadialParts rad;
    rad.v = [](Dual2 r) {
        (void)r;
        return Dual2{1.0, 0.0, 0.0};
    };
    rad.phi = [alpha, pc](Dual2 r) { return exp(Dual2(-alpha) * pow(r, pc)); };
    rad.w = [alpha, p, pc, q, c](Dual2 r) {
        return Dual2(std::pow(c, p - 1.0)) * (Dual2(q) - Dual2(alpha * p) * pow(r, pc));
    };
    t.radial = rad;
    return t;
}

}  // namespace

WeightTriple catalog_get(const std::string& name, const GrushinSpace& space,
                         const Params& params) {
    if (name == "nch") return make_nch(space, params);
    if (name == "dambrosio") return make_dambrosio(space, params);
    if (name == "dambrosio-x") return make_dambrosio_x(space, params);
    if (name == "log-rho") return make_log_rho(space, params);
    if (name == "log-x") return make_log_x(space, params);
    if (name == "hardy-poincare") return make_hardy_poincare(space, params);
    if (name == "super") return make_super(space, params);
    if (name == "yener-nonradial") return make_yener_nonradial(space, params);
    if (name == "hpw-seed") return make_hpw_seed(space, params);
    throw std::invalid_argument("catalog_get: unknown triple '" + name + "'");
}

std::vector<std::string> catalog_names() {
    return {"nch",  "dambrosio", "dambrosio-x",    "log-rho",  "log-x",
            "hardy-poincare", "super",     "yener-nonradial", "hpw-seed"};
}

// ---------------------------------------------------------------------------
// Weight derivation and the radial balance residual

double derive_weight(const GrushinSpace& space, double p, const FieldExpr& v,
                     const FieldExpr& phi, const Point& z) {
    if (!(p > 1.0)) throw std::invalid_argument("derive_weight: p must be > 1");
    if (!v.is_valid() || !phi.is_valid())
        throw std::invalid_argument("derive_weight: empty expression");
    space.check_point(z);
    const int m = space.m();
    const int n = m + space.k();
    const double gamma = space.gamma();

    double x2v = 0.0;
    for (int i = 0; i < m; ++i) x2v += z.xs[i] * z.xs[i];
    const double xgv = (gamma == 0.0) ? 1.0 : std::pow(x2v, 0.5 * gamma);

    double phival = 0.0;
    double div = 0.0;
    for (int d = 0; d < n; ++d) {
        std::array<Dual, kMaxDim> xs{};
        std::array<Dual, kMaxDim> ys{};
        for (int i = 0; i < m; ++i) xs[i] = Dual(z.xs[i]);
        for (int j = 0; j < space.k(); ++j) ys[j] = Dual(z.ys[j]);
        if (d < m)
            xs[d].d = 1.0;
        else
            ys[d - m].d = 1.0;

        const auto jphi = detail::eval_sjet<Dual>(phi, space, xs, ys, true);
        const auto jv = detail::eval_sjet<Dual>(v, space, xs, ys, true);
        if (d == 0) {
            phival = jphi.value.v;
            if (!(phival > 0.0))
                throw FieldError("derive_weight: phi must be positive at the point");
        }

        // Anisotropic frame gradient of phi, as duals in direction d.
        Dual s2x(0.0);
        for (int i = 0; i < m; ++i) s2x = s2x + xs[i] * xs[i];
        Dual xg(1.0);
        if (gamma > 0.0) {
            if (s2x.v == 0.0)
                throw FieldError("derive_weight: |x| = 0 is singular for gamma > 0");
            xg = pow(s2x, 0.5 * gamma);
        }
        std::array<Dual, kMaxDim> g{};
        Dual g2(0.0);
        for (int j = 0; j < n; ++j) {
            g[j] = (j < m) ? jphi.first[j] : xg * jphi.first[j];
            g2 = g2 + g[j] * g[j];
        }

        Dual flow;  // component d of v |grad phi|^(p-2) grad phi
        if (p == 2.0) {
            flow = jv.value * g[d];
        } else if (g2.v == 0.0) {
            if (p < 2.0)
                throw FieldError(
                    "derive_weight: grad phi vanishes, |grad phi|^(p-2) is singular");
            flow = Dual(0.0);  // limit value and derivative are both zero for p > 2
        } else {
            flow = jv.value * pow(g2, 0.5 * (p - 2.0)) * g[d];
        }
        div += (d < m ? 1.0 : xgv) * flow.d;
    }

    const double w = -div / std::pow(phival, p - 1.0);
    if (!std::isfinite(w))
        throw FieldError("derive_weight: evaluation is singular at the point");
    return w;
}

namespace {

// sign(t) |t|^(p-1)
double signed_power(double t, double p) {
    if (t == 0.0) return 0.0;
    const double mag = std::pow(std::abs(t), p - 1.0);
    return t > 0.0 ? mag : -mag;
}

}  // namespace

double bessel_residual(const GrushinSpace& space, double p, const RadialProfile& v,
                       const RadialProfile& w, const RadialProfile& phi,
                       std::span<const double> rho_grid) {
    if (!(p > 1.0)) throw std::invalid_argument("bessel_residual: p must be > 1");
    if (!v || !w || !phi) throw std::invalid_argument("bessel_residual: empty profile");
    if (rho_grid.empty())
        throw std::invalid_argument("bessel_residual: empty evaluation grid");
    const double q = space.homogeneous_dimension();

    double worst = 0.0;
    double scale = 0.0;
    for (const double r : rho_grid) {
        if (!(r > 0.0))
            throw std::invalid_argument("bessel_residual: grid points must be positive");
        const Dual2 seed{r, 1.0, 0.0};
        const Dual2 jv = v(seed);
        const Dual2 jphi = phi(seed);
        const Dual2 jw = w(seed);

        const double g = jphi.d1;
        double flow;   // |phi'|^(p-2) phi'
        double dflow;  // its derivative (p-1) |phi'|^(p-2) phi''
        if (p == 2.0) {
            flow = g;
            dflow = jphi.d2;
        } else {
            if (g == 0.0 && p < 2.0)
                throw FieldError("bessel_residual: phi'(rho) = 0 with p < 2");
            flow = signed_power(g, p);
            dflow = (p - 1.0) * std::pow(std::abs(g), p - 2.0) * jphi.d2;
        }

        const double rq1 = std::pow(r, q - 1.0);
        const double rq2 = std::pow(r, q - 2.0);
        const double dA = (q - 1.0) * rq2 * jv.v * flow + rq1 * jv.d1 * flow +
                          rq1 * jv.v * dflow;
        const double tw = rq1 * jw.v * signed_power(jphi.v, p);
        if (!std::isfinite(dA) || !std::isfinite(tw))
            throw FieldError("bessel_residual: non-finite profile evaluation");
        worst = std::max(worst, std::abs(dA + tw));
        scale = std::max({scale, std::abs(dA), std::abs(tw)});
    }
    return worst / std::max(scale, 1e-300);
}

}  // namespace grushin
