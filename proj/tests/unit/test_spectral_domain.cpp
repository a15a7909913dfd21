#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "levy_elliptic/error.hpp"
#include "levy_elliptic/quadrature.hpp"
#include "levy_elliptic/spectral_domain.hpp"

using namespace levy_elliptic;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("box construction and membership") {
    CHECK_THROWS_AS(HyperBox({{1.0, 1.0}}), DomainError);
    CHECK_THROWS_AS(HyperBox(std::vector<std::pair<double, double>>(7, {0.0, 1.0})), DomainError);
    const HyperBox b({{0.0, 2.0}, {-1.0, 1.0}});
    CHECK(b.volume() == 4.0);
    const std::array<double, 2> in{1.0, 0.0}, edge{2.0, 0.5}, out{2.5, 0.0};
    CHECK(b.contains(in));
    CHECK(b.contains(edge));
    CHECK(b.on_boundary(edge));
    CHECK_FALSE(b.on_boundary(in));
    CHECK_FALSE(b.contains(out));
    CHECK_THROWS_AS(b.require_contains(out), DomainError);
}

TEST_CASE("enumerate_eigen examples") {
    const auto unit = HyperBox::unit(1);
    const auto s = enumerate_eigen(unit, EigenCutoff::by_count(3));
    REQUIRE(s.size() == 3);
    CHECK_THAT(s.lambda(0), WithinRel(pi * pi, 1e-15));
    CHECK_THAT(s.lambda(1), WithinRel(4 * pi * pi, 1e-15));
    CHECK_THAT(s.lambda(2), WithinRel(9 * pi * pi, 1e-15));

    const auto sq = enumerate_eigen(HyperBox::unit(2), EigenCutoff::by_threshold(5 * pi * pi));
    REQUIRE(sq.size() == 3);
    CHECK(std::vector<int>(sq.index(0).begin(), sq.index(0).end()) == std::vector<int>{1, 1});
    CHECK(std::vector<int>(sq.index(1).begin(), sq.index(1).end()) == std::vector<int>{1, 2});
    CHECK(std::vector<int>(sq.index(2).begin(), sq.index(2).end()) == std::vector<int>{2, 1});
    CHECK(sq.lambda(1) == sq.lambda(2));

    const std::array<int, 1> k1{1};
    CHECK_THAT(eigenvalue(HyperBox({{0.0, 2.0}}), k1), WithinRel(pi * pi / 4, 1e-15));

    CHECK_THROWS_AS(enumerate_eigen(unit, EigenCutoff::by_threshold(5.0)), RefusedError);
    CHECK_THROWS_AS(enumerate_eigen(unit, EigenCutoff::by_count(0)), DomainError);
}

TEST_CASE("eigenvalues scale exactly with the interval length") {
    const double L = 3.0;
    const auto s = enumerate_eigen(HyperBox({{1.0, 1.0 + L}}), EigenCutoff::by_count(50));
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double k = static_cast<double>(i + 1);
        CHECK_THAT(s.lambda(i), WithinRel(pi * pi * k * k / (L * L), 1e-15));
    }
}

TEST_CASE("eigen listing is sorted with lexicographic ties and prefix-consistent") {
    const HyperBox b({{0.0, 1.0}, {0.0, 1.0}, {0.0, 2.0}});
    const auto big = enumerate_eigen(b, EigenCutoff::by_count(400));
    for (std::size_t i = 1; i < big.size(); ++i) {
        REQUIRE(big.lambda(i - 1) <= big.lambda(i));
        if (big.lambda(i - 1) == big.lambda(i)) {
            const auto a = big.index(i - 1), c = big.index(i);
            CHECK(std::lexicographical_compare(a.begin(), a.end(), c.begin(), c.end()));
        }
    }
    for (std::size_t k : {1u, 17u, 100u, 399u}) {
        const auto small = enumerate_eigen(b, EigenCutoff::by_count(k));
        REQUIRE(small.size() == k);
        for (std::size_t i = 0; i < k; ++i) {
            CHECK(std::equal(small.index(i).begin(), small.index(i).end(), big.index(i).begin()));
        }
    }
    for (std::size_t i = 0; i < big.size(); i += 37) CHECK(big.find(big.index(i)) == i);
    const std::array<int, 3> absent{500, 1, 1};
    CHECK(big.find(absent) == big.size());
}

TEST_CASE("eigenfunction_eval examples") {
    const auto u1 = HyperBox::unit(1);
    const std::array<double, 1> half{0.5};
    const std::array<int, 1> k1{1}, k2{2};
    CHECK_THAT(eigenfunction_eval(u1, k1, half), WithinAbs(std::sqrt(2.0), 1e-15));
    CHECK_THAT(eigenfunction_eval(u1, k2, half), WithinAbs(0.0, 1e-15));
    const std::array<double, 2> centre{0.5, 0.5};
    const std::array<int, 2> k11{1, 1};
    CHECK_THAT(eigenfunction_eval(HyperBox::unit(2), k11, centre), WithinAbs(2.0, 1e-14));
    const std::array<double, 1> outside{1.5};
    CHECK_THROWS_AS(eigenfunction_eval(u1, k1, outside), DomainError);
}

TEST_CASE("eigenfunctions vanish exactly on the boundary") {
    const HyperBox b({{-1.0, 0.3}, {2.0, 5.0}});
    const auto s = enumerate_eigen(b, EigenCutoff::by_count(200));
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (double t : {0.0, 0.37, 0.81}) {
            const std::array<double, 2> left{-1.0, 2.0 + 3.0 * t}, right{0.3, 2.0 + 3.0 * t}, bottom{-1.0 + 1.3 * t, 2.0},
                top{-1.0 + 1.3 * t, 5.0};
            CHECK(eigenfunction_eval(b, s.index(i), left) == 0.0);
            CHECK(eigenfunction_eval(b, s.index(i), right) == 0.0);
            CHECK(eigenfunction_eval(b, s.index(i), bottom) == 0.0);
            CHECK(eigenfunction_eval(b, s.index(i), top) == 0.0);
        }
    }
}

TEST_CASE("first 20 eigenfunctions are orthonormal") {
    const HyperBox b({{0.0, 1.0}, {0.0, 1.5}});
    const auto s = enumerate_eigen(b, EigenCutoff::by_count(20));
    const std::array<int, 2> panels{4, 4};
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i; j < s.size(); ++j) {
            const double g = tensor_gauss_legendre(
                [&](std::span<const double> x) { return eigenfunction_eval(b, s.index(i), x) * eigenfunction_eval(b, s.index(j), x); },
                b, panels);
            CHECK_THAT(g, WithinAbs(i == j ? 1.0 : 0.0, 1e-8));
        }
    }
}

TEST_CASE("weyl_count examples and law") {
    CHECK(weyl_count(HyperBox::unit(1), 100.0) == 3);
    CHECK(weyl_count(HyperBox::unit(1), pi * pi / 2) == 0);
    CHECK(weyl_count(HyperBox::unit(2), 5 * pi * pi) == 3);

    const double t = 1e4;
    const double ratio = static_cast<double>(weyl_count(HyperBox::unit(2), t)) * 4 * pi / t;
    CHECK(ratio >= 0.7);
    CHECK(ratio <= 1.1);

    std::size_t prev = 0;
    for (double s = 1.0; s < 3000.0; s *= 1.3) {
        const std::size_t n = weyl_count(HyperBox({{0.0, 1.0}, {0.0, 0.7}, {0.0, 1.2}}), s);
        CHECK(n >= prev);
        prev = n;
    }
}

TEST_CASE("weyl_count agrees with enumeration") {
    const HyperBox b({{0.0, 1.0}, {0.0, 2.0}});
    const auto s = enumerate_eigen(b, EigenCutoff::by_threshold(4000.0));
    for (double t : {10.0, 50.0, 333.3, 1000.0, 4000.0}) CHECK(weyl_count(b, t) == s.prefix_below(t));
}

TEST_CASE("weyl tail estimate") {
    const auto b = HyperBox::unit(1);
    // sum_{k > K} (pi k)^{-2} ~ 1/(pi^2 K).
    const double lmax = pi * pi * 1000.0 * 1000.0;
    CHECK_THAT(weyl_tail_estimate(b, lmax, 1.0), WithinRel(1.0 / (pi * pi * 1000.0), 1e-2));
    CHECK(std::isinf(weyl_tail_estimate(HyperBox::unit(2), lmax, 1.0)));
}

TEST_CASE("eigen csv dump") {
    std::ostringstream os;
    write_eigen_csv(os, enumerate_eigen(HyperBox::unit(2), EigenCutoff::by_count(2)));
    CHECK(os.str() == "ordinal,k_1,k_2,lambda\n1,1,1,19.739208802178716\n2,1,2,49.348022005446794\n");
}
