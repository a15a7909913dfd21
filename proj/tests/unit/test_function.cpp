#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <memory>
#include <numbers>

#include "levy_elliptic/error.hpp"
#include "levy_elliptic/function.hpp"
#include "levy_elliptic/quadrature.hpp"

using namespace levy_elliptic;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("fourier_coeff examples") {
    const auto b = HyperBox::unit(1);
    const std::array<int, 1> k1{1}, k2{2};
    CHECK_THAT(fourier_coeff(b, k1, EigenFn{{1}, 1.0}), WithinAbs(1.0, 1e-15));
    CHECK_THAT(fourier_coeff(b, k2, EigenFn{{1}, 1.0}), WithinAbs(0.0, 1e-15));
    CHECK_THAT(fourier_coeff(b, k1, ConstantFn{1.0}), WithinRel(2.0 * std::sqrt(2.0) / pi, 1e-14));
    CHECK_THAT(fourier_coeff(b, k2, ConstantFn{1.0}), WithinAbs(0.0, 1e-15));
}

TEST_CASE("closed-form coefficients agree with quadrature") {
    const HyperBox b({{0.0, 1.0}, {0.0, 2.0}});
    const HyperBox region({{0.2, 0.7}, {0.5, 1.9}});
    const BoxIndicatorFn ind{region, 1.5};
    const TensorPolynomialFn poly{{{0.0, 1.0, -1.0}, {1.0, 0.0, 0.5}}};
    const std::array<int, 2> panels{8, 8};
    for (const auto& k : std::vector<std::array<int, 2>>{{1, 1}, {2, 3}, {5, 1}}) {
        INFO(k[0] << "," << k[1]);
        // The indicator's coefficient is a smooth integral over the sub-box.
        const double oracle = tensor_gauss_legendre(
            [&](std::span<const double> x) { return 1.5 * eigenfunction_eval(b, k, x); }, region, panels);
        CHECK_THAT(fourier_coeff(b, k, ind), WithinAbs(oracle, 1e-12));
        const CallableFn p{[&](std::span<const double> x) { return evaluate(poly, b, x); }, true, true};
        CHECK_THAT(fourier_coeff(b, k, p), WithinAbs(fourier_coeff(b, k, poly), 1e-10));
    }
}

TEST_CASE("singularity profiles and power integrability") {
    const auto b = HyperBox::unit(2);
    const auto sys = std::make_shared<const EigenSystem>(b, EigenCutoff::by_count(50));
    const auto inv = singularity(AxisPowerFn{0, -1.0, 1.0}, b);
    CHECK(inv.order == 1.0);
    CHECK(inv.codim == 1);
    CHECK(power_integrable(inv, 0.9));
    CHECK_FALSE(power_integrable(inv, 1.0));
    CHECK(power_integrable(singularity(ConstantFn{3.0}, b), 100.0));

    const auto g = singularity(GreenFn{1.0, {0.5, 0.5}, sys}, b);
    CHECK(g.logarithmic);
    CHECK(power_integrable(g, 50.0));
    const auto g3 = singularity(GreenFn{1.0, {0.5, 0.5, 0.5}, nullptr}, HyperBox::unit(3));
    CHECK(g3.order == 1.0);
    CHECK(power_integrable(g3, 2.9));
    CHECK_FALSE(power_integrable(g3, 3.0));

    const CallableFn unbounded{[](std::span<const double>) { return 1.0; }, true, false};
    CHECK_THROWS_AS(power_integrable(singularity(unbounded, b), 1.0), DomainError);
}

TEST_CASE("integral of the interval Green kernel") {
    const auto b = HyperBox::unit(1);
    for (double p : {0.1, 0.5, 0.8}) {
        CHECK_THAT(integral(b, GreenFn{1.0, {p}, nullptr}), WithinRel(p * (1 - p) / 2, 1e-9));
    }
}

TEST_CASE("parse_function syntax") {
    const auto b = HyperBox::unit(2);
    const auto sys = std::make_shared<const EigenSystem>(b, EigenCutoff::by_count(10));
    CHECK(std::holds_alternative<ConstantFn>(parse_function("const:2", b, 1.0, sys)));
    CHECK(std::holds_alternative<BoxIndicatorFn>(parse_function("indicator", b, 1.0, sys)));
    CHECK(std::holds_alternative<BoxIndicatorFn>(parse_function("indicator:0:0.5:0.2:1", b, 1.0, sys)));
    CHECK(std::holds_alternative<EigenFn>(parse_function("eigen:1,2", b, 1.0, sys)));
    CHECK(std::holds_alternative<AxisPowerFn>(parse_function("power:1:-0.5", b, 1.0, sys)));
    CHECK(std::holds_alternative<TensorPolynomialFn>(parse_function("poly:0,1,-1", b, 1.0, sys)));
    CHECK(std::holds_alternative<GreenFn>(parse_function("green", b, 1.0, sys)));
    CHECK_THROWS_AS(parse_function("eigen:1", b, 1.0, sys), DomainError);
    CHECK_THROWS_AS(parse_function("power:2:1", b, 1.0, sys), DomainError);
    CHECK_THROWS_AS(parse_function("wavelet:3", b, 1.0, sys), DomainError);
    CHECK_THROWS_AS(parse_function("const:x", b, 1.0, sys), DomainError);
}

TEST_CASE("grid-sampled functions interpolate multilinearly") {
    const HyperBox b({{0.0, 1.0}, {0.0, 2.0}});
    // f(x, y) = x + 2y sampled on a 3 x 3 grid is reproduced exactly.
    GridSampledFn g{{3, 3}, {}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g.values.push_back(0.5 * i + 2.0 * j);
    const std::array<double, 2> x{0.3, 1.7};
    CHECK_THAT(evaluate(g, b, x), WithinAbs(0.3 + 2.0 * 1.7, 1e-14));
}
