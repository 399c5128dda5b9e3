// Microbenchmarks for the hot paths: expression jets, the remainder density,
// quotient evaluation, quadrature sweeps and pointwise weight derivation.

#include <benchmark/benchmark.h>

#include <array>
#include <complex>
#include <vector>

#include "grushin/cp.hpp"
#include "grushin/field.hpp"
#include "grushin/parser.hpp"
#include "grushin/quadrature.hpp"
#include "grushin/space.hpp"
#include "grushin/weights.hpp"

namespace {

using namespace grushin;
using cd = std::complex<double>;

const GrushinSpace& plane() {
    static const GrushinSpace sp(1, 1, 1.0);
    return sp;
}

void BM_Jet2(benchmark::State& state) {
    const FieldExpr f = parse("exp(i * y1) * bump((rho - 1.5) / 0.5)");
    const Point z({1.1}, {0.7});
    for (auto _ : state) benchmark::DoNotOptimize(jet2(f, plane(), z));
}
BENCHMARK(BM_Jet2);

void BM_EvalReal(benchmark::State& state) {
    const FieldExpr f = parse("rho ^ 2 / (1 + absx ^ 2)");
    const Point z({1.1}, {0.7});
    for (auto _ : state) benchmark::DoNotOptimize(eval_real(f, plane(), z));
}
BENCHMARK(BM_EvalReal);

void BM_CpDensity(benchmark::State& state) {
    const std::array<cd, 3> xi{cd{1.2, 0.3}, cd{-0.4, 0.9}, cd{0.5, -1.1}};
    const std::array<cd, 3> eta{cd{0.7, -0.2}, cd{0.1, 0.8}, cd{-0.6, 0.4}};
    for (auto _ : state)
        benchmark::DoNotOptimize(cp(2.5, std::span<const cd>(xi), std::span<const cd>(eta)));
}
BENCHMARK(BM_CpDensity);

void BM_CpRatioShifted(benchmark::State& state) {
    double s = -3.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cp_ratio(1.5, s, 0.7, CpRatio::Shifted));
        s += 1e-9;  // defeat caching of a constant argument
    }
}
BENCHMARK(BM_CpRatioShifted);

void BM_Integrate2D(benchmark::State& state) {
    const FieldExpr f = parse("bump((rho - 1.5) / 0.5)");
    QuadratureSettings settings = QuadratureSettings::cube(2, -2.05, 2.05);
    settings.nodes_per_axis = 6;
    settings.panels_per_axis = 3;
    const Integrand fn = [&](const Point& z) { return eval_real(f, plane(), z); };
    for (auto _ : state)
        benchmark::DoNotOptimize(
            integrate(plane(), fn, DomainDescriptor::whole_space(), settings));
}
BENCHMARK(BM_Integrate2D);

void BM_DeriveWeight(benchmark::State& state) {
    const WeightTriple triple = catalog_get(
        "dambrosio", plane(), {{"p", 2.0}, {"alpha", 4.0}, {"beta", 2.0}});
    const Point z({0.9}, {0.7});
    for (auto _ : state)
        benchmark::DoNotOptimize(derive_weight(plane(), 2.0, triple.v, triple.phi, z));
}
BENCHMARK(BM_DeriveWeight);

}  // namespace
