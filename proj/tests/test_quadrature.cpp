#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "inveff/quadrature.hpp"

using namespace inveff;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("rule structure: symmetric nodes, positive weights summing to 2") {
    for (int n : {1, 2, 5, 16, 64, 256}) {
        const QuadratureRule& rule = gauss_legendre(n);
        REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
        double wsum = 0.0;
        for (int i = 0; i < n; ++i) {
            CHECK(rule.weights[i] > 0.0);
            CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[n - 1 - i]).epsilon(1e-14));
            wsum += rule.weights[i];
        }
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    }
}

TEST_CASE("an n-node rule is exact for polynomials of degree 2n-1") {
    // int_0^1 x^9 dx = 1/10, degree 9 with 5 nodes
    double got = integrate([](double x) { return std::pow(x, 9); }, 0.0, 1.0, 5);
    CHECK(got == doctest::Approx(0.1).epsilon(1e-14));
    // degree 15 with 8 nodes
    got = integrate([](double x) { return std::pow(x, 15); }, 0.0, 1.0, 8);
    CHECK(got == doctest::Approx(1.0 / 16.0).epsilon(1e-13));
}

TEST_CASE("smooth integrands converge to analytic values") {
    double got = integrate([](double x) { return std::sin(kPi * x); }, 0.0, 1.0, 32);
    CHECK(got == doctest::Approx(2.0 / kPi).epsilon(1e-14));

    got = integrate([](double x) { return std::exp(x); }, 0.0, 1.0, 24);
    CHECK(got == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("panelled symmetric rule integrates a standard normal to unit mass") {
    auto normal = [](double y) {
        return std::exp(-0.5 * y * y) / std::sqrt(2.0 * kPi);
    };
    double mass = integrate_symmetric(normal, 40.0, 40, 32);
    CHECK(std::abs(mass - 1.0) < 1e-12);
    double second = integrate_symmetric([&](double y) { return y * y * normal(y); }, 40.0, 40, 32);
    CHECK(std::abs(second - 1.0) < 1e-12);
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
    CHECK_THROWS_AS(integrate_symmetric([](double) { return 0.0; }, 1.0, 0, 8),
                    std::invalid_argument);
}
