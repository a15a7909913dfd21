#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <vector>

#include "levy_elliptic/diagnostics.hpp"
#include "levy_elliptic/error.hpp"

using namespace levy_elliptic;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;
const std::array<double, 3> kU{0.5, 1.0, 2.0};

}  // namespace

TEST_CASE("report decision and directions") {
    TestReport r;
    r.statistic = 0.5;
    r.threshold = 1.0;
    r.decide();
    CHECK(r.pass);
    r.direction = Direction::at_least;
    r.decide();
    CHECK_FALSE(r.pass);
    CHECK(r.failed());
    r.outcome = Outcome::inconclusive;
    CHECK_FALSE(r.failed());
    const std::vector<TestReport> v{r};
    CHECK(all_pass(v));
}

TEST_CASE("target characteristic functionals") {
    const auto b = HyperBox::unit(1);
    const BoxIndicatorFn f{b, 1.0};
    const auto g = target_cf({0.0, 1.0, NullMeasure{}}, f, b, 1.0, PsiRoute::closed_form);
    CHECK_THAT(g.real(), WithinAbs(std::exp(-0.5), 1e-14));
    CHECK_THAT(g.imag(), WithinAbs(0.0, 1e-14));
    for (double u : kU) {
        const auto t = target_cf({0.0, 0.0, SymmetricTwoPoint{1.0, 1.0}}, f, b, u, PsiRoute::closed_form);
        CHECK_THAT(t.real(), WithinAbs(std::exp(std::cos(u) - 1.0), 1e-14));
        // Drift adds the phase u b.
        const auto d = target_cf({0.7, 0.0, NullMeasure{}}, f, b, u, PsiRoute::closed_form);
        CHECK_THAT(std::arg(d), WithinAbs(std::remainder(0.7 * u, 2 * pi), 1e-14));
    }
}

TEST_CASE("characteristic functional test") {
    const auto b = HyperBox::unit(1);
    const BoxIndicatorFn f{b, 1.0};
    const auto null = empirical_cf_test({0.0, 0.0, NullMeasure{}}, f, b, kU, 1000, 1);
    CHECK(null.statistic == 0.0);
    CHECK(null.pass);
    CHECK_THAT(null.threshold, WithinRel(4.0 / std::sqrt(1000.0), 1e-14));

    const auto tp = empirical_cf_test({0.0, 0.0, SymmetricTwoPoint{1.0, 1.0}}, f, b, kU, 20000, 2);
    CHECK(tp.pass);
    CHECK(tp.replicates == 20000);

    CfOptions o;
    o.eps = 0.05;
    const auto st = empirical_cf_test({0.0, 0.0, AlphaStable{1.0}}, f, b, kU, 4000, 3, o);
    CHECK(st.pass);

    CHECK_THROWS_AS(empirical_cf_test({0.0, 0.0, NullMeasure{}}, f, b, kU, 999, 1), DomainError);
}

TEST_CASE("characteristic functional test is worker independent") {
    const auto b = HyperBox::unit(1);
    CfOptions o1, o3;
    o3.workers = 3;
    const auto a = empirical_cf_test({0.1, 0.5, VarianceGamma{1.0, 1.0}}, ConstantFn{1.0}, b, kU, 2000, 9, o1);
    const auto c = empirical_cf_test({0.1, 0.5, VarianceGamma{1.0, 1.0}}, ConstantFn{1.0}, b, kU, 2000, 9, o3);
    CHECK(a.statistic == c.statistic);
}

TEST_CASE("isometry test") {
    const auto b = HyperBox::unit(1);
    const BoxIndicatorFn f{b, 1.0};
    const auto tp = isometry_test(SymmetricTwoPoint{1.0, 0.8}, 0.5, f, b, 40000, 5);
    CHECK(std::get<double>(tp.details.at("exact_variance")) == Catch::Approx(0.64).epsilon(1e-14));
    CHECK(tp.pass);
    const auto st = isometry_test(AlphaStable{1.0}, 0.1, f, b, 40000, 6);
    CHECK(std::get<double>(st.details.at("exact_variance")) == Catch::Approx(0.9).epsilon(1e-14));
    CHECK(st.pass);
    const auto null = isometry_test(NullMeasure{}, 0.1, f, b, 1000, 7);
    CHECK(null.outcome == Outcome::skipped);
    CHECK_FALSE(null.failed());
}

TEST_CASE("weak identity on a few realizations") {
    const HyperBox b({{0.0, 1.0}, {0.0, 1.0}});
    const auto sys = std::make_shared<const EigenSystem>(b, EigenCutoff::by_count(200));
    const TensorPolynomialFn phi{{{0.0, 1.0, -1.0}, {0.0, 1.0, -1.0}}};
    for (std::uint64_t s = 1; s <= 3; ++s) {
        const auto noise = sample_noise(b, {0.3, 0.5, AlphaStable{1.5}}, 0.05, SmallJumpPolicy::gaussianize, s);
        for (double g : {1.0, 2.0}) {
            const auto r = weak_identity_test(noise, phi, g, sys);
            CHECK(r.statistic <= kWeakIdentityTolerance);
            CHECK(r.pass);
        }
    }
    const auto noise = sample_noise(b, {0.0, 1.0, NullMeasure{}}, 0.05, SmallJumpPolicy::drop, 1);
    CHECK_THROWS_AS(weak_identity_test(noise, phi, 0.4, sys), RefusedError);
}

TEST_CASE("surrogate sweep locates the boundary") {
    for (int d : {1, 2}) {
        const auto b = HyperBox::unit(d);
        for (double g : {0.75, 1.0, 2.0}) {
            const double edge = 2 * g - d / 2.0;
            const std::array<double, 2> r{edge - 0.2, edge + 0.2};
            const auto s = sobolev_surrogate(b, g, r, d == 1 ? 10 : 7);
            REQUIRE(s.reports.size() == 3);
            CHECK(s.reports[0].pass);
            CHECK(s.reports[1].pass);
            INFO("d " << d << " gamma " << g << " boundary error " << s.reports[2].statistic);
            CHECK(s.reports[2].pass);
        }
    }
}

TEST_CASE("small random sobolev sweep") {
    const auto b = HyperBox::unit(1);
    const std::array<double, 2> r{0.5, 2.0};
    const std::array<std::size_t, 4> K{512, 1024, 2048, 4096};
    const auto s = sobolev_sweep(b, 1.0, {0.0, 1.0, NullMeasure{}}, r, K, 10, 4);
    REQUIRE(s.reports.size() == 2);
    CHECK(s.reports[0].pass);
    CHECK(s.reports[1].pass);
    REQUIRE(s.trajectories.size() == 2);
    for (const auto& t : s.trajectories)
        for (std::size_t j = 1; j < t.size(); ++j) CHECK(t[j] >= t[j - 1]);
    const std::array<std::size_t, 2> bad{512, 1500};
    CHECK_THROWS_AS(sobolev_sweep(b, 1.0, {0.0, 1.0, NullMeasure{}}, r, bad, 2, 4), DomainError);
}

TEST_CASE("spectral density examples") {
    const auto b = HyperBox::unit(2);
    const EigenSystem s(b, EigenCutoff::by_threshold(200.0));
    const std::array<double, 2> c{0.5, 0.5};
    CHECK_THAT(spectral_density(s, 5 * pi * pi, c), WithinAbs(4.0, 1e-12));
    const auto pts = default_sample_points(b, 16);
    REQUIRE(pts.size() == 32);
    for (std::size_t i = 0; i < 16; ++i) {
        const std::span<const double> x(pts.data() + 2 * i, 2);
        CHECK(b.contains(x));
        CHECK_FALSE(b.on_boundary(x));
        // |e_k|^2 <= 4 on the square, so V(t, x) <= 4 N(t).
        CHECK(spectral_density(s, 100.0, x) <= 4.0 * static_cast<double>(weyl_count(b, 100.0)));
    }
    // On (0,1): |e_k|^2 <= 2 and N(100) = 3, so V <= 6.
    const EigenSystem line(HyperBox::unit(1), EigenCutoff::by_count(10));
    for (double x : {0.1, 0.25, 0.5, 0.77}) {
        const std::array<double, 1> p{x};
        CHECK(spectral_density(line, 100.0, p) <= 6.0);
    }
}

TEST_CASE("spectral bound check") {
    const std::array<double, 5> t{100, 300, 1000, 3000, 10000};
    for (int d : {1, 2}) {
        const auto b = HyperBox::unit(d);
        const auto pts = default_sample_points(b, 8);
        const auto r = spectral_bound_check(b, t, pts);
        CHECK(r.pass);
        CHECK(std::abs(std::get<double>(r.details.at("loglog_slope"))) <= kSpectralSlopeBand);
    }
}

TEST_CASE("continuity probe in one dimension") {
    const auto b = HyperBox::unit(1);
    const std::array<int, 3> levels{5, 6, 7};
    const auto p = continuity_probe(b, 1.0, {0.0, 0.0, AlphaStable{1.5}}, levels, 10, 3);
    REQUIRE(p.levels.size() == 3);
    CHECK(p.report.pass);
    for (std::size_t i = 1; i < p.levels.size(); ++i) CHECK(p.levels[i].modes > p.levels[i - 1].modes);
}
