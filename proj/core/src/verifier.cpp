#include "grushin/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "grushin/calculus.hpp"

namespace grushin {

namespace {

using cd = std::complex<double>;

// Frame gradient components assembled from a flat-coordinate jet.
void frame_components(const GrushinSpace& space, const Point& z,
                      const std::array<cd, kMaxDim>& flat, std::array<cd, kMaxDim>& out) {
    const int m = space.m();
    const int n = space.dim();
    double xg = 1.0;
    if (space.gamma() > 0.0) {
        double x2 = 0.0;
        for (int i = 0; i < m; ++i) x2 += z.xs[i] * z.xs[i];
        xg = std::pow(x2, 0.5 * space.gamma());
    }
    for (int i = 0; i < n; ++i) out[i] = (i < m) ? flat[i] : xg * flat[i];
}

double abs_pow_sum(const std::array<cd, kMaxDim>& v, int n, double p) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::norm(v[i]);
    return std::pow(s, 0.5 * p);
}

// Effective exclusion radii: keep user values, but never evaluate exactly on
// a singular set the entry declares (a node falling on it only loses a
// zero-measure sliver of the support).
double effective_radius(double configured, bool entry_excludes) {
    if (configured > 0.0) return configured;
    return entry_excludes ? 1e-10 : 0.0;
}

bool support_check(const IdentitySpec& spec, const QuadratureSettings& eff) {
    const GrushinSpace& space = spec.space;
    const int dim = space.dim();
    const int per_axis = dim >= 3 ? 17 : 41;

    // Pass 1: magnitude scale of f over the box.
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(std::pow(per_axis, dim)));
    std::array<int, 3> idx{};
    std::array<int, 3> len{1, 1, 1};
    for (int d = 0; d < dim; ++d) len[d] = per_axis;
    for (idx[0] = 0; idx[0] < len[0]; ++idx[0])
        for (idx[1] = 0; idx[1] < len[1]; ++idx[1])
            for (idx[2] = 0; idx[2] < len[2]; ++idx[2]) {
                Point z;
                z.m = space.m();
                z.k = space.k();
                for (int d = 0; d < dim; ++d) {
                    const auto& ab = eff.box[d];
                    const double c =
                        ab[0] + (ab[1] - ab[0]) * (idx[d] + 0.5) / len[d];
                    if (d < space.m())
                        z.xs[d] = c;
                    else
                        z.ys[d - space.m()] = c;
                }
                pts.push_back(z);
            }

    double fmax = 0.0;
    std::vector<double> mags(pts.size(), 0.0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        mags[i] = std::abs(eval(spec.f, space, pts[i]));
        fmax = std::max(fmax, mags[i]);
    }
    if (fmax == 0.0) return true;  // identically zero: trivially contained

    // Pass 2: every point carrying mass must sit inside the domain and away
    // from the excluded singular sets.
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (mags[i] <= 1e-8 * fmax) continue;
        const Point& z = pts[i];
        if (!spec.triple.domain.contains(space, z)) return false;
        if (eff.exclusion_x > 0.0) {
            double x2 = 0.0;
            for (int j = 0; j < space.m(); ++j) x2 += z.xs[j] * z.xs[j];
            if (std::sqrt(x2) < eff.exclusion_x) return false;
        }
        if (eff.exclusion_origin > 0.0 && space.rho(z) < eff.exclusion_origin)
            return false;
    }
    return true;
}

}  // namespace

VerificationReport verify_identity(const IdentitySpec& spec) {
    const GrushinSpace& space = spec.space;
    const WeightTriple& triple = spec.triple;
    if (!spec.f.is_valid()) throw std::invalid_argument("verify_identity: empty f");
    if (!triple.v.is_valid() || !triple.phi.is_valid() || !triple.w.is_valid())
        throw std::invalid_argument("verify_identity: incomplete weight triple");
    const auto pit = triple.params.find("p");
    if (pit == triple.params.end())
        throw std::invalid_argument("verify_identity: triple lacks parameter p");
    const double p = pit->second;

    QuadratureSettings eff = spec.settings;
    eff.exclusion_x = effective_radius(eff.exclusion_x, triple.domain.exclude_x_axis);
    eff.exclusion_origin =
        effective_radius(eff.exclusion_origin, triple.domain.exclude_origin);
    eff.validate(space.dim());

    VerificationReport rep;
    rep.name = triple.name;
    rep.p = p;
    rep.support_ok = support_check(spec, eff);

    const int n_extras = static_cast<int>(triple.extras.size());
    const int slots = 3 + n_extras;
    const int n = space.dim();

    const BatchIntegrand fn = [&](const Point& z, std::span<double> out) {
        const Jet2 jf = jet2(spec.f, space, z);
        std::array<cd, kMaxDim> xi;
        frame_components(space, z, jf.first, xi);

        const RealJet jphi = grad_real(triple.phi, space, z);
        if (jphi.value == 0.0)
            throw FieldError("verify_identity: phi vanishes inside the domain");
        std::array<cd, kMaxDim> flatc;
        for (int i = 0; i < n; ++i) flatc[i] = jphi.first[i];
        std::array<cd, kMaxDim> gphi_c;
        frame_components(space, z, flatc, gphi_c);

        const cd fval = jf.value;
        const cd ratio = fval / jphi.value;
        std::array<cd, kMaxDim> eta;
        for (int i = 0; i < n; ++i) eta[i] = xi[i] - ratio * gphi_c[i];

        const double vval = eval_real(triple.v, space, z);
        const double wval = eval_real(triple.w, space, z);
        const double fp = std::pow(std::norm(fval), 0.5 * p);

        out[0] = vval * abs_pow_sum(xi, n, p);
        out[1] = wval * fp;
        out[2] = vval * cp(p, std::span<const cd>(xi.data(), static_cast<std::size_t>(n)),
                           std::span<const cd>(eta.data(), static_cast<std::size_t>(n)));
        for (int e = 0; e < n_extras; ++e) {
            const double we = eval_real(triple.extras[e].weight, space, z);
            out[3 + e] = triple.extras[e].coefficient * we * fp;
        }
    };

    const std::vector<IntegralResult> res =
        integrate_batch(space, fn, slots, triple.domain, eff);

    const auto term = [&](int i) {
        return TermReport{res[i].value, res[i].refined, res[i].error_estimate};
    };
    rep.lhs = term(0);
    rep.weighted = term(1);
    rep.remainder = term(2);
    for (int e = 0; e < n_extras; ++e) {
        rep.extras.push_back(term(3 + e));
        rep.extras_sum += res[3 + e].value;
        rep.extras_sum_refined += res[3 + e].refined;
    }
    rep.nodes_used = res[0].nodes_used;

    const double scale = std::max(std::abs(rep.lhs.value), 1e-30);
    rep.residual_rel =
        std::abs(rep.lhs.value - rep.weighted.value - rep.extras_sum -
                 rep.remainder.value) /
        scale;
    const double scale_r = std::max(std::abs(rep.lhs.refined), 1e-30);
    rep.residual_refined =
        std::abs(rep.lhs.refined - rep.weighted.refined - rep.extras_sum_refined -
                 rep.remainder.refined) /
        scale_r;
    rep.pass = rep.support_ok && rep.residual_rel <= spec.tolerance;
    return rep;
}

// ---------------------------------------------------------------------------
// Uncertainty-principle deficit

namespace {

struct SeedMoments {
    IntegralResult m, l, k;
    std::size_t nodes = 0;
};

// Frame gradient of rho in closed form (valid away from {x = 0} when
// gamma > 0; reduces to z/|z| when gamma = 0).
void grad_rho_frame(const GrushinSpace& space, const Point& z, double r,
                    std::array<double, kMaxDim>& out) {
    const int m = space.m();
    const int n = space.dim();
    const double g = space.gamma();
    double x2 = 0.0;
    for (int i = 0; i < m; ++i) x2 += z.xs[i] * z.xs[i];
    const double xg = (g == 0.0) ? 1.0 : std::pow(x2, 0.5 * g);
    const double x2g = xg * xg;
    const double denom = std::pow(r, 2.0 * g + 1.0);
    for (int i = 0; i < m; ++i) out[i] = x2g * z.xs[i] / denom;
    for (int j = m; j < n; ++j)
        out[j] = xg * (1.0 + g) * z.ys[j - m] / denom;
}

SeedMoments seed_moments(const GrushinSpace& space, double p, const FieldExpr& f,
                         const QuadratureSettings& settings) {
    const double pc = p / (p - 1.0);
    const double gp = space.gamma() * p;
    const int n = space.dim();
    const BatchIntegrand fn = [&](const Point& z, std::span<double> out) {
        const Jet2 jf = jet2(f, space, z);
        std::array<cd, kMaxDim> xi;
        frame_components(space, z, jf.first, xi);
        const double fp = std::pow(std::norm(jf.value), 0.5 * p);
        const double r = space.rho(z);
        double frame = 1.0;
        if (gp > 0.0) {
            double x2 = 0.0;
            for (int i = 0; i < space.m(); ++i) x2 += z.xs[i] * z.xs[i];
            frame = std::pow(r, gp) / std::pow(x2, 0.5 * gp);
        }
        out[0] = fp;
        out[1] = std::pow(r, pc) * fp;
        out[2] = frame * abs_pow_sum(xi, n, p);
    };
    auto res = integrate_batch(space, fn, 3, DomainDescriptor::whole_space(), settings);
    return {res[0], res[1], res[2], res[0].nodes_used};
}

IntegralResult seed_remainder(const GrushinSpace& space, double p, const FieldExpr& f,
                              double alpha, const QuadratureSettings& settings) {
    const double pc = p / (p - 1.0);
    const double gp = space.gamma() * p;
    const int n = space.dim();
    const BatchIntegrand fn = [&](const Point& z, std::span<double> out) {
        const Jet2 jf = jet2(f, space, z);
        std::array<cd, kMaxDim> xi;
        frame_components(space, z, jf.first, xi);
        const double r = space.rho(z);
        double frame = 1.0;
        if (gp > 0.0) {
            double x2 = 0.0;
            for (int i = 0; i < space.m(); ++i) x2 += z.xs[i] * z.xs[i];
            frame = std::pow(r, gp) / std::pow(x2, 0.5 * gp);
        }
        // eta = xi - (f / phi) grad phi with phi = exp(-alpha rho^(p'));
        // the seed cancels:  (f / phi) grad_gamma phi = -alpha p' rho^(p'-1) f grad_gamma rho.
        std::array<double, kMaxDim> gr;
        grad_rho_frame(space, z, r, gr);
        const double pull = alpha * pc * std::pow(r, pc - 1.0);
        std::array<cd, kMaxDim> eta;
        for (int i = 0; i < n; ++i) eta[i] = xi[i] + pull * gr[i] * jf.value;
        out[0] = frame * cp(p, std::span<const cd>(xi.data(), static_cast<std::size_t>(n)),
                            std::span<const cd>(eta.data(), static_cast<std::size_t>(n)));
    };
    auto res = integrate_batch(space, fn, 1, DomainDescriptor::whole_space(), settings);
    return res[0];
}

QuadratureSettings hpw_effective(const GrushinSpace& space,
                                 const QuadratureSettings& settings) {
    QuadratureSettings eff = settings;
    if (space.gamma() > 0.0) {
        eff.exclusion_x = effective_radius(eff.exclusion_x, true);
        eff.exclusion_origin = effective_radius(eff.exclusion_origin, true);
    }
    eff.validate(space.dim());
    return eff;
}

}  // namespace

double hpw_alpha(const GrushinSpace& space, double p, const FieldExpr& f,
                 const QuadratureSettings& settings) {
    if (!(p > 1.0)) throw std::invalid_argument("hpw_alpha: p must be > 1");
    if (!f.is_valid()) throw std::invalid_argument("hpw_alpha: empty f");
    const QuadratureSettings eff = hpw_effective(space, settings);
    const SeedMoments sm = seed_moments(space, p, f, eff);
    const double q = space.homogeneous_dimension();
    if (!(sm.l.refined > 0.0))
        throw FieldError("hpw_alpha: vanishing stretched moment (is f zero?)");
    return (q / p) * ((p - 1.0) / p) * (sm.m.refined / sm.l.refined);
}

HpwReport hpw_deficit(const GrushinSpace& space, double p, const FieldExpr& f,
                      const QuadratureSettings& settings, double tolerance,
                      std::optional<double> alpha) {
    if (!(p > 1.0)) throw std::invalid_argument("hpw_deficit: p must be > 1");
    if (!f.is_valid()) throw std::invalid_argument("hpw_deficit: empty f");
    const QuadratureSettings eff = hpw_effective(space, settings);
    const double q = space.homogeneous_dimension();

    const SeedMoments sm = seed_moments(space, p, f, eff);
    if (!(sm.l.refined > 0.0))
        throw FieldError("hpw_deficit: vanishing stretched moment (is f zero?)");

    double a = alpha ? *alpha
                     : (q / p) * ((p - 1.0) / p) * (sm.m.refined / sm.l.refined);
    if (!(a > 0.0)) throw std::invalid_argument("hpw_deficit: alpha must be > 0");

    const IntegralResult rem = seed_remainder(space, p, f, a, eff);

    HpwReport rep;
    rep.p = p;
    rep.alpha_star = a;
    rep.moment = {sm.m.value, sm.m.refined, sm.m.error_estimate};
    rep.stretched = {sm.l.value, sm.l.refined, sm.l.error_estimate};
    rep.energy = {sm.k.value, sm.k.refined, sm.k.error_estimate};
    rep.deficit = {rem.value, rem.refined, rem.error_estimate};
    rep.nodes_used = sm.nodes + rem.nodes_used;

    const double c = a * p / (p - 1.0);
    const double cpow = std::pow(c, p - 1.0);
    const auto assemble = [&](double M, double L, double K, double R, double& lhs,
                              double& weighted, double& remainder, double& residual) {
        lhs = K * std::pow(L, p - 1.0);
        // (alpha p')^(p-1) (Q M - alpha p L) L^(p-1), which at alpha = alpha*
        // collapses to (Q/p)^p M^p.
        weighted = cpow * (q * M - a * p * L) * std::pow(L, p - 1.0);
        remainder = std::pow(L, p - 1.0) * R;
        residual = std::abs(lhs - weighted - remainder) / std::max(std::abs(lhs), 1e-30);
    };
    assemble(sm.m.value, sm.l.value, sm.k.value, rem.value, rep.lhs, rep.weighted,
             rep.remainder, rep.residual_rel);
    assemble(sm.m.refined, sm.l.refined, sm.k.refined, rem.refined, rep.lhs_refined,
             rep.weighted_refined, rep.remainder_refined, rep.residual_refined);
    rep.pass = rep.residual_rel <= tolerance;
    return rep;
}

}  // namespace grushin
