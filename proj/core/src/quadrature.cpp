#include "grushin/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

namespace grushin {

void QuadratureSettings::validate(int dim) const {
    if (nodes_per_axis < 2)
        throw std::invalid_argument("quadrature: nodes_per_axis must be >= 2");
    if (panels_per_axis < 1)
        throw std::invalid_argument("quadrature: panels_per_axis must be >= 1");
    if (static_cast<int>(box.size()) != dim)
        throw std::invalid_argument("quadrature: box must have one [lo, hi] per axis (" +
                                    std::to_string(dim) + " expected)");
    for (const auto& ab : box)
        if (!(ab[0] < ab[1]))
            throw std::invalid_argument("quadrature: box entries must satisfy lo < hi");
    if (exclusion_x < 0.0 || exclusion_origin < 0.0)
        throw std::invalid_argument("quadrature: exclusion radii must be >= 0");
    if (node_budget == 0) throw std::invalid_argument("quadrature: node_budget must be > 0");
    if (!eps_ladder.empty()) {
        for (double e : eps_ladder)
            if (!(e > 0.0))
                throw std::invalid_argument("quadrature: eps ladder values must be > 0");
        for (std::size_t i = 1; i < eps_ladder.size(); ++i)
            if (!(eps_ladder[i] < eps_ladder[i - 1]))
                throw std::invalid_argument(
                    "quadrature: eps ladder must be strictly decreasing");
    }
}

QuadratureSettings QuadratureSettings::cube(int dim, double lo, double hi) {
    QuadratureSettings s;
    if (dim >= 3) {
        s.nodes_per_axis = 8;
        s.panels_per_axis = 5;
    }
    s.box.assign(static_cast<std::size_t>(dim), {lo, hi});
    return s;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    constexpr double kPi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration from the Chebyshev-like initial guess.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 64; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // one more pass so dp matches the converged node
                p0 = 1.0;
                p1 = x;
                for (int j = 2; j <= n; ++j) {
                    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if (n % 2 == 1) nodes[n / 2] = 0.0;
}

namespace {

const std::pair<std::vector<double>, std::vector<double>>& cached_rule(int n) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) {
        std::pair<std::vector<double>, std::vector<double>> rule;
        gauss_legendre(n, rule.first, rule.second);
        it = cache.emplace(n, std::move(rule)).first;
    }
    return it->second;
}

struct Kahan {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

struct Axis {
    std::vector<double> coord;
    std::vector<double> weight;
};

std::vector<Axis> build_axes(const QuadratureSettings& s, int panels) {
    const auto& [gx, gw] = cached_rule(s.nodes_per_axis);
    std::vector<Axis> axes(s.box.size());
    for (std::size_t a = 0; a < s.box.size(); ++a) {
        const double lo = s.box[a][0];
        const double h = (s.box[a][1] - lo) / panels;
        auto& ax = axes[a];
        ax.coord.reserve(panels * gx.size());
        ax.weight.reserve(panels * gx.size());
        for (int q = 0; q < panels; ++q) {
            const double left = lo + h * q;
            for (std::size_t j = 0; j < gx.size(); ++j) {
                ax.coord.push_back(left + 0.5 * h * (gx[j] + 1.0));
                ax.weight.push_back(0.5 * h * gw[j]);
            }
        }
    }
    return axes;
}

// One full sweep at a fixed panel count; returns per-slot sums.
std::vector<double> sweep(const GrushinSpace& space, const BatchIntegrand& fn, int slots,
                          const DomainDescriptor& domain, const QuadratureSettings& s,
                          int panels, std::size_t& evals) {
    const int m = space.m();
    const int k = space.k();
    const int dim = m + k;
    const std::vector<Axis> axes = build_axes(s, panels);

    std::vector<Kahan> acc(slots);
    std::vector<double> slot_buf(slots);
    std::array<std::size_t, 3> len{1, 1, 1};
    for (int d = 0; d < dim; ++d) len[d] = axes[d].coord.size();

    Point z;
    z.m = m;
    z.k = k;
    const double ex2 = s.exclusion_x * s.exclusion_x;

    std::array<double, 3> c{}, w{};
    for (std::size_t i0 = 0; i0 < len[0]; ++i0) {
        c[0] = axes[0].coord[i0];
        w[0] = axes[0].weight[i0];
        for (std::size_t i1 = 0; i1 < (dim > 1 ? len[1] : 1); ++i1) {
            if (dim > 1) {
                c[1] = axes[1].coord[i1];
                w[1] = axes[1].weight[i1];
            }
            for (std::size_t i2 = 0; i2 < (dim > 2 ? len[2] : 1); ++i2) {
                if (dim > 2) {
                    c[2] = axes[2].coord[i2];
                    w[2] = axes[2].weight[i2];
                }
                double weight = w[0];
                for (int d = 1; d < dim; ++d) weight *= w[d];
                for (int d = 0; d < dim; ++d) {
                    if (d < m)
                        z.xs[d] = c[d];
                    else
                        z.ys[d - m] = c[d];
                }
                if (!domain.contains(space, z)) continue;
                if (ex2 > 0.0) {
                    double x2 = 0.0;
                    for (int i = 0; i < m; ++i) x2 += z.xs[i] * z.xs[i];
                    if (x2 < ex2) continue;
                }
                if (s.exclusion_origin > 0.0 && space.rho(z) < s.exclusion_origin)
                    continue;
                fn(z, std::span<double>(slot_buf));
                ++evals;
                for (int t = 0; t < slots; ++t) acc[t].add(weight * slot_buf[t]);
            }
        }
    }
    std::vector<double> out(slots);
    for (int t = 0; t < slots; ++t) out[t] = acc[t].sum;
    return out;
}

std::size_t grid_size(const QuadratureSettings& s, int dim, int panels) {
    std::size_t total = 1;
    for (int d = 0; d < dim; ++d)
        total *= static_cast<std::size_t>(s.nodes_per_axis) * panels;
    return total;
}

}  // namespace

std::vector<IntegralResult> integrate_batch(const GrushinSpace& space,
                                            const BatchIntegrand& fn, int slots,
                                            const DomainDescriptor& domain,
                                            const QuadratureSettings& settings) {
    const int dim = space.m() + space.k();
    if (dim > 3)
        throw std::invalid_argument("integrate: tensor-product grids support m + k <= 3");
    if (slots < 1) throw std::invalid_argument("integrate: slot count must be >= 1");
    if (!fn) throw std::invalid_argument("integrate: empty integrand");
    settings.validate(dim);

    const std::size_t base_nodes = grid_size(settings, dim, settings.panels_per_axis);
    const std::size_t fine_nodes = grid_size(settings, dim, 2 * settings.panels_per_axis);
    if (base_nodes > settings.node_budget)
        throw BudgetExceeded("integrate: node budget exceeded before the base pass",
                             std::vector<IntegralResult>(slots));

    std::size_t evals = 0;
    const std::vector<double> base =
        sweep(space, fn, slots, domain, settings, settings.panels_per_axis, evals);

    std::vector<IntegralResult> out(slots);
    if (base_nodes + fine_nodes > settings.node_budget) {
        for (int t = 0; t < slots; ++t) {
            out[t].value = base[t];
            out[t].refined = base[t];
            out[t].error_estimate = std::numeric_limits<double>::infinity();
            out[t].nodes_used = evals;
        }
        throw BudgetExceeded("integrate: node budget exhausted before the refinement pass",
                             std::move(out));
    }

    const std::vector<double> fine =
        sweep(space, fn, slots, domain, settings, 2 * settings.panels_per_axis, evals);
    for (int t = 0; t < slots; ++t) {
        out[t].value = base[t];
        out[t].refined = fine[t];
        out[t].error_estimate = std::abs(fine[t] - base[t]);
        out[t].nodes_used = evals;
    }
    return out;
}

IntegralResult integrate(const GrushinSpace& space, const Integrand& fn,
                         const DomainDescriptor& domain,
                         const QuadratureSettings& settings) {
    if (!fn) throw std::invalid_argument("integrate: empty integrand");
    auto res = integrate_batch(
        space,
        [&fn](const Point& z, std::span<double> out) { out[0] = fn(z); }, 1, domain,
        settings);
    return res[0];
}

IntegralResult integrate_eps_limit(const GrushinSpace& space,
                                   const std::function<double(const Point&, double)>& fn,
                                   const DomainDescriptor& domain,
                                   const QuadratureSettings& settings) {
    if (!fn) throw std::invalid_argument("integrate_eps_limit: empty integrand");
    if (settings.eps_ladder.size() < 2)
        throw std::invalid_argument(
            "integrate_eps_limit: eps_ladder needs at least two rungs");

    std::vector<double> rung_values;
    std::size_t evals = 0;
    double last_error = 0.0;
    for (const double eps : settings.eps_ladder) {
        const IntegralResult r = integrate(
            space, [&fn, eps](const Point& z) { return fn(z, eps); }, domain, settings);
        rung_values.push_back(r.refined);
        evals += r.nodes_used;
        last_error = r.error_estimate;
    }

    const std::size_t n = rung_values.size();
    const double e_prev = settings.eps_ladder[n - 2];
    const double e_last = settings.eps_ladder[n - 1];
    const double i_prev = rung_values[n - 2];
    const double i_last = rung_values[n - 1];
    const double limit = i_last + (i_last - i_prev) * e_last / (e_prev - e_last);

    IntegralResult out;
    out.value = limit;
    out.refined = i_last;
    out.error_estimate = std::abs(limit - i_last) + last_error;
    out.nodes_used = evals;

    // The rungs should close in on the limit from one side as eps shrinks.
    const double scale = std::max(std::abs(limit), 1e-30);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d0 = std::abs(rung_values[i] - limit);
        const double d1 = std::abs(rung_values[i + 1] - limit);
        if (d1 > d0 + 1e-12 * scale) {
            out.ladder_monotone = false;
            break;
        }
    }
    return out;
}

}  // namespace grushin
