#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "grushin/cp.hpp"
#include "helpers.hpp"

using grushin::cp;
using grushin::CpConstants;
using grushin::cp_ratio;
using grushin::CpRatio;
using grushin::extremal_constants;

namespace {

using cvec = std::vector<std::complex<double>>;

double norm2(const cvec& v) {
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return s;
}

cvec random_vec(std::mt19937_64& g, int n, double lo = 0.3, double hi = 3.0) {
    cvec v(static_cast<std::size_t>(n));
    for (auto& c : v) {
        const double r = testutil::uniform(g, lo, hi);
        const double th = testutil::uniform(g, 0.0, 6.283185307179586);
        c = std::polar(r, th);
    }
    return v;
}

// Independent direct transcription of the plain quotient, used as a
// brute-force oracle for the global minimum at p = 4.
double plain_ratio_direct(double p, double s, double t) {
    const double num = std::pow(t * t + s * s + 2.0 * s + 1.0, 0.5 * p) - 1.0 - p * s;
    return num / std::pow(t * t + s * s, 0.5 * p);
}

}  // namespace

TEST_SUITE("cp") {

TEST_CASE("quadratic case collapses to the second argument") {
    // C_2(xi, eta) = |eta|^2 exactly.
    const cvec xi = {{1.0, 1.0}, {0.0, 0.0}};
    const cvec eta = {{0.0, 0.0}, {2.0, 0.0}};
    CHECK(cp(2.0, xi, eta) == doctest::Approx(4.0).epsilon(1e-13));

    auto rng = testutil::make_rng(41);
    for (int trial = 0; trial < 20000; ++trial) {
        const int n = 1 + static_cast<int>(trial % 3);
        const cvec a = random_vec(rng, n);
        const cvec b = random_vec(rng, n);
        const double value = cp(2.0, a, b);
        const double expected = norm2(b);
        CHECK(std::abs(value - expected) <= 1e-12 * expected);
    }
}

TEST_CASE("coincident arguments leave the full power") {
    const cvec xi = {{2.0, 0.0}};
    CHECK(cp(3.0, xi, xi) == doctest::Approx(8.0).epsilon(1e-13));
    const cvec zero = {{0.0, 0.0}};
    for (double p : {1.3, 2.0, 3.6}) CHECK(cp(p, xi, zero) == doctest::Approx(0.0));
    // p < 2 with xi = eta exercises the 0^(p-2) * 0 = 0 convention.
    CHECK(cp(1.5, xi, xi) == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-13));
}

TEST_CASE("nonnegativity on random pairs") {
    auto rng = testutil::make_rng(42);
    for (double p : {1.2, 1.5, 2.0, 3.0, 4.7}) {
        for (int trial = 0; trial < 4000; ++trial) {
            const int n = 1 + static_cast<int>(trial % 3);
            const cvec a = random_vec(rng, n);
            const cvec b = random_vec(rng, n);
            const double scale =
                std::pow(std::sqrt(norm2(a)) + std::sqrt(norm2(b)), p);
            CHECK(cp(p, a, b) >= -1e-10 * scale);
        }
    }
}

TEST_CASE("scale covariance") {
    auto rng = testutil::make_rng(43);
    for (double p : {1.4, 2.0, 3.3}) {
        for (double lambda : {0.02, 1.9, -1.7}) {
            for (int trial = 0; trial < 200; ++trial) {
                const cvec a = random_vec(rng, 2);
                const cvec b = random_vec(rng, 2);
                cvec la = a, lb = b;
                for (auto& c : la) c *= lambda;
                for (auto& c : lb) c *= lambda;
                const double lhs = cp(p, la, lb);
                const double rhs = std::pow(std::abs(lambda), p) * cp(p, a, b);
                CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(rhs) + 1e-30));
            }
        }
    }
}

TEST_CASE("argument validation") {
    const cvec a = {{1.0, 0.0}};
    const cvec b = {{1.0, 0.0}, {2.0, 0.0}};
    CHECK_THROWS_AS(cp(2.0, a, b), std::invalid_argument);
    CHECK_THROWS_AS(cp(1.0, a, a), std::invalid_argument);
    CHECK_THROWS_AS(cp(0.5, a, a), std::invalid_argument);
    CHECK_THROWS_AS(cp_ratio(2.0, 0.0, 0.0, CpRatio::Plain), std::invalid_argument);
    CHECK_THROWS_AS(extremal_constants(1.0), std::invalid_argument);
    CHECK_THROWS_AS(extremal_constants(0.0), std::invalid_argument);
}

TEST_CASE("quotient closed values") {
    // At p = 2 the plain quotient is identically 1.
    auto rng = testutil::make_rng(44);
    for (int trial = 0; trial < 200; ++trial) {
        const double s = testutil::uniform(rng, -5.0, 5.0);
        const double t = testutil::uniform(rng, -5.0, 5.0);
        if (s * s + t * t < 1e-12) continue;
        CHECK(cp_ratio(2.0, s, t, CpRatio::Plain) == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(cp_ratio(4.0, 0.0, 1.0, CpRatio::Plain) == doctest::Approx(3.0));
    // The shifted quotient loses its (p-2)-power factor as p -> 2.
    CHECK(cp_ratio(2.0, 1.0, 0.0, CpRatio::Shifted) == doctest::Approx(1.0));
    CHECK(cp_ratio(2.0 + 1e-7, 1.0, 0.0, CpRatio::Shifted) ==
          doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("quotients agree with the remainder functional") {
    // Plain quotient times |eta|^p equals C_p for collinear real data:
    // xi - eta = (1, 0), eta = (s, t).
    auto rng = testutil::make_rng(45);
    for (double p : {1.5, 2.5, 4.0}) {
        for (int trial = 0; trial < 300; ++trial) {
            const double s = testutil::uniform(rng, -3.0, 3.0);
            const double t = testutil::uniform(rng, -3.0, 3.0);
            if (s * s + t * t < 1e-6) continue;
            const cvec xi = {{1.0 + s, t}};
            const cvec eta = {{s, t}};
            const double direct = cp(p, xi, eta);
            const double via_ratio =
                cp_ratio(p, s, t, CpRatio::Plain) * std::pow(s * s + t * t, 0.5 * p);
            CHECK(std::abs(direct - via_ratio) <= 1e-10 * (1.0 + std::abs(direct)));
        }
    }
}

TEST_CASE("extremal constants at p = 2") {
    const CpConstants c = extremal_constants(2.0);
    REQUIRE(c.has_c1);
    CHECK(c.c1.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(c.c1.bracket <= 1e-4);
    CHECK_FALSE(c.has_c2c3);
}

TEST_CASE("extremal constants at p = 4 against a dense-grid oracle") {
    const CpConstants c = extremal_constants(4.0);
    REQUIRE(c.has_c1);
    CHECK(c.c1.value > 0.0);
    CHECK(c.c1.value <= 1.0 + 1e-12);
    // The minimum sits at (s, t) = (-3, 0) with value exactly 1/3.
    CHECK(c.c1.value == doctest::Approx(1.0 / 3.0).epsilon(1e-9));

    // Brute-force tan-compactified grid, written independently of the library
    // search (direct power formula; fine near the minimizer, which sits far
    // from the cancellation-prone origin).
    double grid_min = std::numeric_limits<double>::infinity();
    const int n = 2000;
    const double half_pi = 1.5707963267948966;
    for (int iu = 0; iu < n; ++iu) {
        const double u = -half_pi + (iu + 0.5) * (2.0 * half_pi / n);
        const double s = std::tan(u);
        for (int iw = 0; iw < n; ++iw) {
            const double w = -half_pi + (iw + 0.5) * (2.0 * half_pi / n);
            const double t = std::tan(w);
            const double r2 = s * s + t * t;
            if (r2 < 1e-4 || r2 > 1e8) continue;
            grid_min = std::min(grid_min, plain_ratio_direct(4.0, s, t));
        }
    }
    CHECK(c.c1.value == doctest::Approx(grid_min).epsilon(1e-3));
}

TEST_CASE("extremal constants for sub-quadratic exponents") {
    const CpConstants c = extremal_constants(1.5);
    REQUIRE(c.has_c2c3);
    CHECK_FALSE(c.has_c1);
    const double lower_endpoint = 1.5 * 0.5 / std::pow(2.0, 0.5);   // p(p-1)/2^(p-1)
    const double upper_endpoint = 1.5 / std::pow(2.0, 0.5);          // p/2^(p-1)
    CHECK(c.c2_inf.value > 0.0);
    CHECK(c.c2_inf.value <= lower_endpoint + 1e-12);
    CHECK(c.c3_sup.value >= upper_endpoint - 1e-12);
    CHECK(c.c2_inf.bracket <= 1e-4);
    CHECK(c.c3_sup.bracket <= 1e-4);
    // Frozen reference values from the deterministic search.
    CHECK(c.c2_inf.value == doctest::Approx(0.494105884401).epsilon(1e-6));
    CHECK(c.c3_sup.value == doctest::Approx(1.30656296488).epsilon(1e-6));
}

TEST_CASE("lower bound by the plain constant") {
    auto rng = testutil::make_rng(46);
    for (double p : {2.0, 3.0, 4.0}) {
        const double c1 = extremal_constants(p).c1.value;
        for (int trial = 0; trial < 20000; ++trial) {
            const int n = 1 + static_cast<int>(trial % 3);
            const cvec a = random_vec(rng, n);
            const cvec b = random_vec(rng, n);
            const double bound = (c1 - 1e-3) * std::pow(norm2(b), 0.5 * p);
            CHECK(cp(p, a, b) >= bound - 1e-12 * (1.0 + bound));
        }
    }
}

TEST_CASE("two-sided bounds by the shifted constants") {
    auto rng = testutil::make_rng(47);
    for (double p : {1.3, 1.5, 1.8}) {
        const CpConstants c = extremal_constants(p);
        REQUIRE(c.has_c2c3);
        for (int trial = 0; trial < 20000; ++trial) {
            const int n = 1 + static_cast<int>(trial % 3);
            const cvec a = random_vec(rng, n);
            const cvec b = random_vec(rng, n);
            cvec diff(a.size());
            for (std::size_t idx = 0; idx < a.size(); ++idx) diff[idx] = a[idx] - b[idx];
            const double denom = std::sqrt(norm2(a)) + std::sqrt(norm2(diff));
            REQUIRE(denom > 0.0);
            const double quotient = norm2(b) / std::pow(denom, 2.0 - p);
            const double value = cp(p, a, b);
            CHECK(value >= (c.c2_inf.value - 1e-3) * quotient -
                               1e-12 * (1.0 + quotient));
            CHECK(value <= (c.c3_sup.value + 1e-3) * quotient +
                               1e-12 * (1.0 + quotient));
        }
    }
}

}  // TEST_SUITE("cp")
