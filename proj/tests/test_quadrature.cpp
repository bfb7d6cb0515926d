#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qfem/errors.hpp"
#include "qfem/quadrature.hpp"

using namespace qfem;

TEST_CASE("gauss_legendre basic properties") {
    for (int n : {1, 2, 3, 5, 8, 20}) {
        const GaussRule1d g = gauss_legendre(n);
        double wsum = 0.0, x3 = 0.0;
        for (int i = 0; i < n; ++i) {
            wsum += g.weights[i];
            x3 += g.weights[i] * std::pow(g.points[i], 3);
        }
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(std::abs(x3) < 1e-14);
    }
    // degree 2n-1 exactness: int x^4 on [-1,1] = 2/5 with n = 3
    const GaussRule1d g = gauss_legendre(3);
    double x4 = 0.0;
    for (int i = 0; i < 3; ++i) x4 += g.weights[i] * std::pow(g.points[i], 4);
    CHECK(x4 == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("modified gauss rule avoids the axes and preserves measure") {
    const QuadratureRule r = modified_gauss_rule(2);
    CHECK(r.size() == 16);
    double wsum = 0.0, xy = 0.0, absx = 0.0;
    for (int q = 0; q < r.size(); ++q) {
        CHECK(r.points[q].x != 0.0);
        CHECK(r.points[q].y != 0.0);
        CHECK(std::abs(r.points[q].x) < 1.0);
        CHECK(std::abs(r.points[q].y) < 1.0);
        wsum += r.weights[q];
        xy += r.weights[q] * r.points[q].x * r.points[q].y;
        absx += r.weights[q] * std::abs(r.points[q].x);
    }
    CHECK(wsum == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(std::abs(xy) < 1e-14);
    CHECK(absx == doctest::Approx(2.0).epsilon(1e-14));  // int |xi| over the square
}

TEST_CASE("dunavant rules are exact to their degree") {
    for (int degree = 1; degree <= 6; ++degree) {
        const QuadratureRule r = dunavant_rule(degree);
        double wsum = 0.0;
        for (double w : r.weights) wsum += w;
        CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));
        for (int a = 0; a + 0 <= degree; ++a) {
            for (int b = 0; a + b <= degree; ++b) {
                double val = 0.0;
                for (int q = 0; q < r.size(); ++q)
                    val += r.weights[q] * std::pow(r.points[q].x, a) * std::pow(r.points[q].y, b);
                CHECK_MESSAGE(
                    val == doctest::Approx(test::triangle_monomial_integral(a, b)).epsilon(1e-13),
                    "degree ", degree, " monomial x^", a, " y^", b);
            }
        }
    }
}

TEST_CASE("dunavant degree 6 integrates x^6 to 1/56") {
    const QuadratureRule r = dunavant_rule(6);
    double val = 0.0;
    for (int q = 0; q < r.size(); ++q) val += r.weights[q] * std::pow(r.points[q].x, 6);
    CHECK(val == doctest::Approx(1.0 / 56.0).epsilon(1e-14));
    CHECK(r.size() == 12);
    for (int q = 0; q < r.size(); ++q) {
        CHECK(r.points[q].x > 0.0);
        CHECK(r.points[q].y > 0.0);
        CHECK(r.points[q].x + r.points[q].y < 1.0);
    }
}

TEST_CASE("unsupported dunavant degree") {
    CHECK_THROWS_AS(dunavant_rule(7), UnsupportedRuleError);
    CHECK_THROWS_AS(dunavant_rule(0), UnsupportedRuleError);
}
