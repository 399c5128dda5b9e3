#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "catalog_refs.hpp"
#include "doctest.h"
#include "grushin/calculus.hpp"
#include "grushin/field.hpp"
#include "grushin/space.hpp"
#include "grushin/weights.hpp"
#include "helpers.hpp"

using namespace grushin;

namespace {

double closed_total(const GrushinSpace& sp, const WeightTriple& t, const Point& z) {
    double total = eval_real(t.w, sp, z);
    for (const auto& extra : t.extras)
        total += extra.coefficient * eval_real(extra.weight, sp, z);
    return total;
}

void check_message(const std::function<void()>& fn, const std::string& needle) {
    try {
        fn();
        FAIL_CHECK("expected an exception mentioning '" << needle << "'");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    const double ratio = std::log(hi / lo);
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] =
            lo * std::exp(ratio * i / static_cast<double>(n - 1));
    return g;
}

}  // namespace

TEST_SUITE("weights") {

TEST_CASE("catalog lists all nine entries") {
    const auto names = catalog_names();
    REQUIRE(names.size() == 9);
    const GrushinSpace sp(2, 1, 1.0);
    for (const auto& rc : testutil::reference_cases()) {
        const GrushinSpace rsp(rc.m, rc.k, rc.gamma);
        CHECK_NOTHROW(catalog_get(rc.name, rsp, rc.params));
    }
    CHECK_THROWS_AS(catalog_get("nosuch", sp, {{"p", 2.0}}), std::invalid_argument);
    check_message([&] { catalog_get("nosuch", sp, {{"p", 2.0}}); }, "unknown triple");
}

TEST_CASE("closed-form spot values") {
    SUBCASE("power weight at the unit point") {
        const GrushinSpace sp(1, 1, 1.0);
        const auto t = catalog_get("dambrosio", sp,
                                   {{"p", 2.0}, {"alpha", 4.0}, {"beta", 2.0}});
        // ((Q + beta - alpha)/p)^p |x|^beta rho^-alpha = 0.25 |x|^2 / rho^4.
        CHECK(eval_real(t.w, sp, Point({1.0}, {0.0})) == doctest::Approx(0.25));
        CHECK(t.extras.empty());
    }
    SUBCASE("x-block weight with critical exponent") {
        const GrushinSpace sp(2, 1, 1.0);
        const auto t = catalog_get("dambrosio-x", sp, {{"p", 2.0}, {"alpha", -4.0}});
        // |m + alpha| = p makes the constant (|m + alpha|/p)^p = 1.
        CHECK(eval_real(t.w, sp, Point({1.0, 0.0}, {0.5})) == doctest::Approx(1.0));
    }
    SUBCASE("growing-weight second term coefficient") {
        const GrushinSpace sp(2, 1, 1.0);  // Q = 4
        const auto t = catalog_get("super", sp,
                                   {{"p", 2.0},
                                    {"a", 1.0},
                                    {"b", 1.0},
                                    {"alpha", 2.0},
                                    {"beta", 1.0},
                                    {"ell", 0.0}});
        REQUIRE(t.extras.size() == 1);
        CHECK(t.extras[0].coefficient == doctest::Approx(2.0));
    }
}

TEST_CASE("admissibility is enforced with the violated constraint named") {
    const GrushinSpace sp(1, 1, 1.0);
    const GrushinSpace sp2(2, 1, 1.0);
    const GrushinSpace flat(1, 1, 0.0);
    check_message([&] { catalog_get("log-rho", sp,
                                    {{"p", 2.0}, {"alpha", -0.5}, {"R", 4.0}}); },
                  "alpha < -1");
    check_message([&] { catalog_get("log-rho", flat,
                                    {{"p", 2.5}, {"alpha", -2.0}, {"R", 4.0}}); },
                  "Q > p");
    check_message([&] { catalog_get("hardy-poincare", sp, {{"p", 2.0}, {"alpha", 1.0}}); },
                  "alpha > 1");
    check_message([&] { catalog_get("dambrosio-x", sp2, {{"p", 2.0}, {"alpha", -1.0}}); },
                  "alpha < -m");
    check_message([&] { catalog_get("log-x", sp,
                                    {{"p", 1.5}, {"alpha", -2.5}, {"R", 4.0}}); },
                  "m > p");
    check_message([&] { catalog_get("super", flat,
                                    {{"p", 2.0},
                                     {"a", 1.0},
                                     {"b", 1.0},
                                     {"alpha", 2.0},
                                     {"beta", 1.0},
                                     {"ell", 1.0}}); },
                  "Q >= p (ell + 1)");
    check_message([&] { catalog_get("hpw-seed", sp, {{"p", 2.0}, {"alpha", 0.0}}); },
                  "alpha > 0");
    check_message([&] { catalog_get("nch", sp, {{"p", 1.0}, {"R", 4.0}}); }, "p > 1");
    check_message([&] { catalog_get("dambrosio", sp, {{"p", 2.0}, {"alpha", 4.0}}); },
                  "missing parameter 'beta'");
    check_message([&] { catalog_get("nch", sp, {{"p", 2.0}, {"R", 4.0}, {"zeta", 1.0}}); },
                  "unknown parameter 'zeta'");
    check_message([&] { catalog_get("dambrosio", flat,
                                    {{"p", 2.0}, {"alpha", 2.0}, {"beta", 0.0}}); },
                  "Q + beta - alpha != 0");
    const GrushinSpace no_y(1, 0, 1.0);
    check_message([&] { catalog_get("yener-nonradial", no_y, {{"p", 2.0}}); }, "k >= 1");
}

TEST_CASE("numeric derivation closed values") {
    SUBCASE("Euclidean inverse-square weight") {
        const GrushinSpace sp(2, 1, 0.0);  // n = 3, p = 2
        const FieldExpr v = constant(1.0);
        const FieldExpr phi = pow(rho_expr(), -0.5);
        // ((n-p)/p)^p / rho^p = (1/4) / rho^2 -> 0.0625 at rho = 2.
        CHECK(derive_weight(sp, 2.0, v, phi, Point({2.0, 0.0}, {0.0})) ==
              doctest::Approx(0.0625).epsilon(1e-7));
        CHECK(derive_weight(sp, 2.0, v, phi, Point({0.48, 1.2}, {1.52})) ==
              doctest::Approx(0.25 / 3.9808).epsilon(1e-7));
    }
    SUBCASE("anisotropic inverse-square weight") {
        const GrushinSpace sp(1, 1, 1.0);  // Q = 3
        CHECK(derive_weight(sp, 2.0, constant(1.0), pow(rho_expr(), -0.5),
                            Point({1.0}, {0.0})) == doctest::Approx(0.25).epsilon(1e-7));
    }
    SUBCASE("constant potential gives zero weight") {
        const GrushinSpace sp(1, 1, 1.0);
        const Point z({1.1}, {0.7});
        CHECK(derive_weight(sp, 2.0, constant(1.0), constant(1.0), z) ==
              doctest::Approx(0.0));
        CHECK(derive_weight(sp, 3.0, constant(1.0), constant(1.0), z) ==
              doctest::Approx(0.0));
        CHECK_THROWS_AS(derive_weight(sp, 1.5, constant(1.0), constant(1.0), z),
                        FieldError);
    }
    SUBCASE("invalid inputs") {
        const GrushinSpace sp(1, 1, 1.0);
        const Point z({1.1}, {0.7});
        CHECK_THROWS_AS(derive_weight(sp, 1.0, constant(1.0), rho_expr(), z),
                        std::invalid_argument);
        CHECK_THROWS_AS(derive_weight(sp, 2.0, constant(1.0), -rho_expr(), z),
                        FieldError);  // phi < 0
        CHECK_THROWS_AS(derive_weight(sp, 2.0, constant(1.0), rho_expr(),
                                      Point({0.0}, {0.7})),
                        FieldError);  // {x = 0} singular for gamma > 0
    }
}

TEST_CASE("derivation agrees with every catalog closed form") {
    auto rng = testutil::make_rng(61);
    for (const auto& rc : testutil::reference_cases()) {
        CAPTURE(rc.name);
        const GrushinSpace sp(rc.m, rc.k, rc.gamma);
        const WeightTriple t = catalog_get(rc.name, sp, rc.params);
        const double p = rc.params.at("p");
        int checked = 0;
        for (int trial = 0; trial < 200; ++trial) {
            const Point z = testutil::catalog_sample_point(rng, sp, t);
            const double closed = closed_total(sp, t, z);
            const double derived = derive_weight(sp, p, t.v, t.phi, z);
            const double wmain = eval_real(t.w, sp, z);
            CHECK(std::abs(derived - closed) <= 1e-6 * (1.0 + std::abs(wmain)));
            ++checked;
        }
        CHECK(checked == 200);
    }
}

TEST_CASE("closed weights are nonnegative where the hypotheses force it") {
    auto rng = testutil::make_rng(62);
    for (const auto& rc : testutil::reference_cases()) {
        const GrushinSpace sp(rc.m, rc.k, rc.gamma);
        const WeightTriple t = catalog_get(rc.name, sp, rc.params);
        if (!t.w_nonnegative) continue;
        CAPTURE(rc.name);
        for (int trial = 0; trial < 50; ++trial) {
            const Point z = testutil::catalog_sample_point(rng, sp, t);
            CHECK(closed_total(sp, t, z) >= -1e-10);
        }
    }
}

TEST_CASE("radial derivation matches the radial p-operator") {
    // phi = rho^(-(Q-p)/p), v = 1: the derived weight is the classical
    // inverse-p-power weight, also expressible through p_grushin_radial.
    const GrushinSpace sp(1, 1, 1.0);  // Q = 3
    const double p = 2.0;
    const double s = (sp.homogeneous_dimension() - p) / p;
    const RadialProfile prof = [s](Dual2 r) { return pow(r, -s); };
    auto rng = testutil::make_rng(63);
    for (int trial = 0; trial < 40; ++trial) {
        const Point z = testutil::annulus_point(rng, sp, 0.5, 2.0, 0.05);
        const double r = sp.rho(z);
        const double phival = std::pow(r, -s);
        const double via_radial =
            -p_grushin_radial(sp, p, prof, z) / std::pow(phival, p - 1.0);
        double x2 = 0.0;
        for (int i = 0; i < sp.m(); ++i)
            x2 += z.xs[static_cast<std::size_t>(i)] * z.xs[static_cast<std::size_t>(i)];
        const double closed = std::pow(s, p) * x2 / std::pow(r, 4.0);
        CHECK(via_radial == doctest::Approx(closed).epsilon(1e-7));
    }
}

TEST_CASE("radial balance closed examples") {
    const GrushinSpace sp(1, 1, 1.0);  // Q = 3
    const auto grid = log_grid(0.1, 5.0, 128);

    SUBCASE("inverse-p-power pair") {
        const double p = 2.0;
        const double s = 0.5;  // (Q - p)/p
        const RadialProfile v = [](Dual2) { return Dual2(1.0); };
        const RadialProfile w = [s, p](Dual2 r) { return Dual2(std::pow(s, p)) * pow(r, -p); };
        const RadialProfile phi = [s](Dual2 r) { return pow(r, -s); };
        CHECK(bessel_residual(sp, p, v, w, phi, grid) <= 1e-8);
    }
    SUBCASE("trivial pair") {
        const RadialProfile one = [](Dual2) { return Dual2(1.0); };
        const RadialProfile zero = [](Dual2) { return Dual2(0.0); };
        CHECK(bessel_residual(sp, 2.0, one, zero, one, grid) == doctest::Approx(0.0));
    }
    SUBCASE("growing-weight catalog entry") {
        const GrushinSpace sp2(2, 1, 1.0);
        const auto rc = testutil::reference_cases()[6];
        REQUIRE(rc.name == "super");
        const WeightTriple t = catalog_get(rc.name, sp2, rc.params);
        REQUIRE(t.radial.has_value());
        CHECK(bessel_residual(sp2, rc.params.at("p"), t.radial->v, t.radial->w,
                              t.radial->phi, grid) <= 1e-7);
    }
    SUBCASE("grid validation") {
        const RadialProfile one = [](Dual2) { return Dual2(1.0); };
        const std::vector<double> bad = {0.5, 0.0, 1.0};
        CHECK_THROWS_AS(bessel_residual(sp, 2.0, one, one, one, bad),
                        std::invalid_argument);
        CHECK_THROWS_AS(bessel_residual(sp, 2.0, one, one, one, std::vector<double>{}),
                        std::invalid_argument);
    }
}

TEST_CASE("radial balance holds for every radial catalog entry") {
    for (const auto& rc : testutil::reference_cases()) {
        const GrushinSpace sp(rc.m, rc.k, rc.gamma);
        const WeightTriple t = catalog_get(rc.name, sp, rc.params);
        if (!t.radial.has_value()) continue;
        CAPTURE(rc.name);
        const bool bounded = t.domain.kind == DomainKind::Ball;
        const auto grid =
            log_grid(0.05, bounded ? 0.95 * t.domain.radius : 20.0, 512);
        CHECK(bessel_residual(sp, rc.params.at("p"), t.radial->v, t.radial->w,
                              t.radial->phi, grid) <= 1e-6);
    }
}

TEST_CASE("domain membership") {
    const GrushinSpace sp(1, 1, 1.0);
    CHECK(DomainDescriptor::whole_space().contains(sp, Point({5.0}, {-3.0})));
    CHECK(DomainDescriptor::ball(2.0).contains(sp, Point({1.0}, {0.0})));
    CHECK_FALSE(DomainDescriptor::ball(2.0).contains(sp, Point({3.0}, {0.0})));
    CHECK(DomainDescriptor::x_slab(1.0).contains(sp, Point({0.5}, {9.0})));
    CHECK_FALSE(DomainDescriptor::x_slab(1.0).contains(sp, Point({1.5}, {0.0})));
    CHECK(DomainDescriptor::annulus(1.0, 2.0).contains(sp, Point({1.5}, {0.0})));
    CHECK_FALSE(DomainDescriptor::annulus(1.0, 2.0).contains(sp, Point({0.5}, {0.0})));
    CHECK(DomainDescriptor::half_quadrant().contains(sp, Point({1.5}, {1.5})));
    CHECK_FALSE(DomainDescriptor::half_quadrant().contains(sp, Point({0.5}, {1.5})));
}

}  // TEST_SUITE("weights")
