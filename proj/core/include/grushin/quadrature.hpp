/// @file quadrature.hpp
/// Deterministic composite Gauss-Legendre quadrature on boxes (m + k <= 3),
/// with domain masking, singular-set exclusion radii, a built-in refinement
/// pass at doubled panel counts, and an epsilon-ladder extrapolation for
/// regularized integrands.
#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "grushin/space.hpp"
#include "grushin/weights.hpp"

namespace grushin {

struct QuadratureSettings {
    int nodes_per_axis = 12;
    int panels_per_axis = 8;
    /// One [lo, hi] pair per axis: m x-axes first, then k y-axes.
    std::vector<std::array<double, 2>> box;
    /// Nodes with |x| below this radius are dropped (singular tube {x = 0}).
    double exclusion_x = 0.0;
    /// Nodes with rho below this radius are dropped (singular origin).
    double exclusion_origin = 0.0;
    /// Regularization values for integrate_eps_limit, strictly decreasing.
    std::vector<double> eps_ladder;
    /// Hard cap on quadrature nodes per call (both resolution levels).
    std::size_t node_budget = 400000000;

    void validate(int dim) const;

    /// Cube [lo, hi]^dim with dimension-appropriate node counts.
    static QuadratureSettings cube(int dim, double lo, double hi);
};

struct IntegralResult {
    double value = 0.0;            ///< result at the requested settings
    double refined = 0.0;          ///< result at doubled panels per axis
    double error_estimate = 0.0;   ///< |refined - value|
    std::size_t nodes_used = 0;    ///< integrand evaluations, both levels
    bool ladder_monotone = true;   ///< meaningful for integrate_eps_limit only
};

class BudgetExceeded : public std::runtime_error {
  public:
    BudgetExceeded(std::string what, std::vector<IntegralResult> partial_results)
        : std::runtime_error(std::move(what)), partial(std::move(partial_results)) {}
    std::vector<IntegralResult> partial;
};

using Integrand = std::function<double(const Point&)>;
/// Fills one value per accumulator slot at the given node.
using BatchIntegrand = std::function<void(const Point&, std::span<double>)>;

IntegralResult integrate(const GrushinSpace& space, const Integrand& fn,
                         const DomainDescriptor& domain, const QuadratureSettings& settings);

/// Evaluates `fn` once per node, accumulating `slots` integrals on a shared
/// grid; the node sweep order is fixed, so results are bit-reproducible.
std::vector<IntegralResult> integrate_batch(const GrushinSpace& space,
                                            const BatchIntegrand& fn, int slots,
                                            const DomainDescriptor& domain,
                                            const QuadratureSettings& settings);

/// Integrates fn(., eps) for every eps on the ladder and extrapolates the
/// eps -> 0 limit linearly from the last two rungs.  `value` holds the
/// extrapolated limit, `refined` the last rung, and `ladder_monotone` is
/// cleared when the rung values do not approach the limit monotonically.
IntegralResult integrate_eps_limit(const GrushinSpace& space,
                                   const std::function<double(const Point&, double)>& fn,
                                   const DomainDescriptor& domain,
                                   const QuadratureSettings& settings);

/// Gauss-Legendre rule on (-1, 1); nodes ascending.  Exposed for testing.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace grushin
