#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "grushin/calculus.hpp"
#include "grushin/field.hpp"
#include "grushin/space.hpp"
#include "helpers.hpp"

using namespace grushin;

namespace {

// F = rho^c |x|^s grad_gamma(rho), written componentwise in the anisotropic
// frame; its divergence has the closed form tested below.
VectorFieldExpr radial_flux(const GrushinSpace& sp, double c, double s) {
    const double gamma = sp.gamma();
    VectorFieldExpr F;
    const FieldExpr rad = pow(rho_expr(), c - 2.0 * gamma - 1.0);
    for (int i = 0; i < sp.m(); ++i)
        F.comp.push_back(coord_x(i) * pow(absx_expr(), s + 2.0 * gamma) * rad);
    for (int j = 0; j < sp.k(); ++j)
        F.comp.push_back((1.0 + gamma) * coord_y(j) * pow(absx_expr(), s + gamma) * rad);
    return F;
}

struct SpaceCase {
    int m;
    int k;
    double gamma;
};

const std::vector<SpaceCase> kSpaces = {{1, 1, 1.0}, {2, 1, 0.5}, {2, 3, 1.0}};

}  // namespace

TEST_SUITE("calculus") {

TEST_CASE("gradient of the coordinate functions") {
    const GrushinSpace sp(1, 1, 1.0);
    const Point z({2.0}, {0.7});
    const FrameVector gx = grad_gamma(coord_x(0), sp, z);
    CHECK(gx.comp[0].real() == doctest::Approx(1.0));
    CHECK(std::abs(gx.comp[1]) == doctest::Approx(0.0));

    // The y-slot carries the |x|^gamma frame factor.
    const FrameVector gy = grad_gamma(coord_y(0), sp, z);
    CHECK(std::abs(gy.comp[0]) == doctest::Approx(0.0));
    CHECK(gy.comp[1].real() == doctest::Approx(2.0));
}

TEST_CASE("gradient norm of the quasi-norm") {
    auto rng = testutil::make_rng(51);
    for (const auto& sc : kSpaces) {
        const GrushinSpace sp(sc.m, sc.k, sc.gamma);
        for (int trial = 0; trial < 500; ++trial) {
            const Point z = testutil::annulus_point(rng, sp, 0.2, 3.0, 1e-2);
            double x2 = 0.0;
            for (int i = 0; i < sp.m(); ++i)
                x2 += z.xs[static_cast<std::size_t>(i)] * z.xs[static_cast<std::size_t>(i)];
            const double expected =
                std::pow(std::sqrt(x2), sp.gamma()) / std::pow(sp.rho(z), sp.gamma());
            const double got = grad_gamma(rho_expr(), sp, z).norm();
            CHECK(std::abs(got - expected) <= 1e-8 * (1.0 + expected));
        }
    }
}

TEST_CASE("divergence of constant and linear fields") {
    const GrushinSpace sp(2, 1, 1.0);
    const Point z({1.1, -0.4}, {0.8});

    VectorFieldExpr constant_field;
    for (int d = 0; d < 3; ++d) constant_field.comp.push_back(constant(2.5 - d));
    CHECK(std::abs(div_gamma(constant_field, sp, z)) <= 1e-14);

    VectorFieldExpr identity_x;
    identity_x.comp.push_back(coord_x(0));
    identity_x.comp.push_back(coord_x(1));
    identity_x.comp.push_back(constant(0.0));
    CHECK(div_gamma(identity_x, sp, z).real() == doctest::Approx(2.0));
}

TEST_CASE("divergence identity for radial flux fields") {
    auto rng = testutil::make_rng(52);
    const std::vector<double> exponents = {-1.0, 0.0, 1.0, 2.5};
    for (const auto& sc : kSpaces) {
        const GrushinSpace sp(sc.m, sc.k, sc.gamma);
        const double q = sp.homogeneous_dimension();
        for (double c : exponents) {
            for (double s : exponents) {
                const VectorFieldExpr F = radial_flux(sp, c, s);
                for (int trial = 0; trial < 100; ++trial) {
                    const Point z = testutil::annulus_point(rng, sp, 0.5, 2.0, 1e-2);
                    double x2 = 0.0;
                    for (int i = 0; i < sp.m(); ++i)
                        x2 += z.xs[static_cast<std::size_t>(i)] *
                              z.xs[static_cast<std::size_t>(i)];
                    const double ax = std::sqrt(x2);
                    const double r = sp.rho(z);
                    const double expected = (q + c + s - 1.0) *
                                            std::pow(ax, 2.0 * sp.gamma() + s) /
                                            std::pow(r, 2.0 * sp.gamma() + 1.0 - c);
                    const auto got = div_gamma(F, sp, z);
                    CHECK(std::abs(got.imag()) <= 1e-9 * (1.0 + std::abs(expected)));
                    CHECK(std::abs(got.real() - expected) <=
                          1e-7 * (1.0 + std::abs(expected)));
                }
            }
        }
    }
}

TEST_CASE("radial p-operator closed forms") {
    const GrushinSpace sp(1, 1, 1.0);
    auto rng = testutil::make_rng(53);
    const double q = sp.homogeneous_dimension();

    SUBCASE("identity profile") {
        const RadialProfile linear = [](Dual2 r) { return r; };
        for (int trial = 0; trial < 30; ++trial) {
            const Point z = testutil::annulus_point(rng, sp, 0.5, 2.0, 1e-2);
            double x2 = 0.0;
            for (int i = 0; i < sp.m(); ++i)
                x2 += z.xs[static_cast<std::size_t>(i)] * z.xs[static_cast<std::size_t>(i)];
            const double r = sp.rho(z);
            for (double p : {1.5, 2.0, 3.0}) {
                const double frame = std::pow(std::sqrt(x2), sp.gamma() * p) /
                                     std::pow(r, sp.gamma() * p);
                const double expected = frame * (q - 1.0) / r;
                CHECK(p_grushin_radial(sp, p, linear, z) ==
                      doctest::Approx(expected).epsilon(1e-9));
            }
        }
    }

    SUBCASE("constant profile") {
        const RadialProfile one = [](Dual2) { return Dual2(1.0); };
        const Point z = testutil::annulus_point(rng, sp, 0.5, 2.0, 1e-2);
        CHECK(p_grushin_radial(sp, 2.0, one, z) == doctest::Approx(0.0));
        // p < 2 with a critical profile has no finite value.
        CHECK_THROWS_AS(p_grushin_radial(sp, 1.5, one, z), FieldError);
    }

    SUBCASE("agreement with divergence form at p = 2") {
        const RadialProfile gauss = [](Dual2 r) { return exp(Dual2(-1.0) * r * r); };
        const FieldExpr gauss_expr = exp(-pow(rho_expr(), 2.0));
        for (int trial = 0; trial < 50; ++trial) {
            const Point z = testutil::annulus_point(rng, sp, 0.5, 2.0, 0.05);
            const double direct = p_grushin_radial(sp, 2.0, gauss, z);
            // Assemble div_gamma(grad_gamma(phi)) through expression jets.
            VectorFieldExpr grad_field;
            const FieldExpr fx = constant(-2.0) * coord_x(0) * pow(absx_expr(), 2.0) *
                                 pow(rho_expr(), -2.0) * gauss_expr;
            const FieldExpr fy = constant(-4.0) * coord_y(0) * absx_expr() *
                                 pow(rho_expr(), -2.0) * gauss_expr;
            grad_field.comp.push_back(fx);
            grad_field.comp.push_back(fy);
            const auto via_div = div_gamma(grad_field, sp, z);
            CHECK(std::abs(via_div.real() - direct) <= 1e-6 * (1.0 + std::abs(direct)));
            CHECK(std::abs(via_div.imag()) <= 1e-10);
        }
    }

    SUBCASE("singular locus is rejected") {
        const RadialProfile linear = [](Dual2 r) { return r; };
        CHECK_THROWS_AS(p_grushin_radial(sp, 2.0, linear, Point({0.0}, {0.0})),
                        FieldError);
        CHECK_THROWS_AS(p_grushin_radial(sp, 2.0, linear, Point({0.0}, {1.0})),
                        FieldError);
    }
}

TEST_CASE("frame vector norm") {
    FrameVector v;
    v.n = 2;
    v.comp[0] = {3.0, 0.0};
    v.comp[1] = {0.0, 4.0};
    CHECK(v.norm() == doctest::Approx(5.0));
}

}  // TEST_SUITE("calculus")
