#include "levy_elliptic/levy_measure.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "levy_elliptic/error.hpp"

namespace levy_elliptic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw DomainError(std::string(what) + " must be finite");
}

// Density on z > 0 of a continuous variant; the measure is symmetric so the
// full density at z is density(|z|).
double half_density(const LevyMeasure& measure, double z) {
    return std::visit(Overloaded{
                          [&](const AlphaStable& s) { return 0.5 * s.alpha * std::pow(z, -s.alpha - 1.0); },
                          [&](const VarianceGamma& v) { return v.c * std::exp(-v.m * z) / z; },
                          [](const auto&) { return 0.0; },
                      },
                      measure);
}

// z^2 rho(z), finite near the origin where rho alone overflows.
double weighted_half_density(const LevyMeasure& measure, double z) {
    return std::visit(Overloaded{
                          [&](const AlphaStable& s) { return 0.5 * s.alpha * std::pow(z, 1.0 - s.alpha); },
                          [&](const VarianceGamma& v) { return v.c * z * std::exp(-v.m * z); },
                          [](const auto&) { return 0.0; },
                      },
                      measure);
}

}  // namespace

void validate(const LevyMeasure& measure) {
    std::visit(Overloaded{
                   [](const AlphaStable& s) {
                       if (!(s.alpha > 0.0 && s.alpha < 2.0))
                           throw DomainError("alpha-stable index must lie in (0, 2)");
                   },
                   [](const SymmetricTwoPoint& t) {
                       if (!(t.rate > 0.0 && std::isfinite(t.rate)))
                           throw DomainError("two-point rate must be positive and finite");
                       if (!(t.magnitude > 0.0 && std::isfinite(t.magnitude)))
                           throw DomainError("two-point magnitude must be positive and finite");
                   },
                   [](const VarianceGamma& v) {
                       if (!(v.c > 0.0 && std::isfinite(v.c)))
                           throw DomainError("variance-gamma c must be positive and finite");
                       if (!(v.m > 0.0 && std::isfinite(v.m)))
                           throw DomainError("variance-gamma m must be positive and finite");
                   },
                   [](const NullMeasure&) {},
               },
               measure);
    const double levy_integral = small_variance(measure, 1.0) + tail_mass(measure, 1.0);
    if (!std::isfinite(levy_integral)) throw DomainError("measure violates the Levy integrability condition");
}

void validate(const LevyTriplet& triplet) {
    require_finite(triplet.drift, "drift b");
    require_finite(triplet.sigma, "sigma");
    if (triplet.sigma < 0.0) throw DomainError("sigma must be non-negative");
    validate(triplet.measure);
}

std::string to_string(const LevyMeasure& measure) {
    std::ostringstream os;
    os.precision(17);
    std::visit(Overloaded{
                   [&](const AlphaStable& s) { os << "alpha:" << s.alpha; },
                   [&](const SymmetricTwoPoint& t) { os << "twopoint:" << t.rate << ':' << t.magnitude; },
                   [&](const VarianceGamma& v) { os << "vg:" << v.c << ':' << v.m; },
                   [&](const NullMeasure&) { os << "null"; },
               },
               measure);
    return os.str();
}

LevyMeasure parse_measure(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.empty()) throw DomainError("empty measure descriptor");

    auto number = [&](std::size_t i) {
        try {
            std::size_t used = 0;
            const double v = std::stod(parts.at(i), &used);
            if (used != parts[i].size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw DomainError("bad number in measure descriptor '" + text + "'");
        }
    };
    auto arity = [&](std::size_t n) {
        if (parts.size() != n + 1) throw DomainError("measure '" + parts[0] + "' expects " + std::to_string(n) + " parameter(s)");
    };

    LevyMeasure out;
    const std::string& tag = parts[0];
    if (tag == "alpha" || tag == "stable") {
        arity(1);
        out = AlphaStable{number(1)};
    } else if (tag == "twopoint" || tag == "two-point") {
        arity(2);
        out = SymmetricTwoPoint{number(1), number(2)};
    } else if (tag == "vg" || tag == "variance-gamma") {
        arity(2);
        out = VarianceGamma{number(1), number(2)};
    } else if (tag == "null" || tag == "none") {
        arity(0);
        out = NullMeasure{};
    } else {
        throw DomainError("unknown measure type '" + tag + "'");
    }
    validate(out);
    return out;
}

bool is_null(const LevyMeasure& measure) noexcept { return std::holds_alternative<NullMeasure>(measure); }

bool infinite_activity(const LevyMeasure& measure) noexcept {
    return std::holds_alternative<AlphaStable>(measure) || std::holds_alternative<VarianceGamma>(measure);
}

double tail_mass(const LevyMeasure& measure, double eps) {
    if (!(eps >= 0.0)) throw DomainError("tail threshold must be non-negative");
    return std::visit(Overloaded{
                          [&](const AlphaStable& s) { return eps == 0.0 ? kInf : std::pow(eps, -s.alpha); },
                          [&](const SymmetricTwoPoint& t) { return t.magnitude > eps ? t.rate : 0.0; },
                          [&](const VarianceGamma& v) {
                              if (eps == 0.0) return kInf;
                              if (std::isinf(eps)) return 0.0;
                              return 2.0 * v.c * boost::math::expint(1, v.m * eps);
                          },
                          [](const NullMeasure&) { return 0.0; },
                      },
                      measure);
}

double small_variance(const LevyMeasure& measure, double eps) {
    if (!(eps >= 0.0)) throw DomainError("variance threshold must be non-negative");
    return std::visit(Overloaded{
                          [&](const AlphaStable& s) {
                              if (std::isinf(eps)) return kInf;
                              return s.alpha * std::pow(eps, 2.0 - s.alpha) / (2.0 - s.alpha);
                          },
                          [&](const SymmetricTwoPoint& t) {
                              return t.magnitude <= eps ? t.rate * t.magnitude * t.magnitude : 0.0;
                          },
                          [&](const VarianceGamma& v) {
                              // 2c \int_0^eps z e^{-mz} dz = 2c P(2, m eps) / m^2
                              const double x = std::isinf(eps) ? 1.0 : boost::math::gamma_p(2.0, v.m * eps);
                              return 2.0 * v.c * x / (v.m * v.m);
                          },
                          [](const NullMeasure&) { return 0.0; },
                      },
                      measure);
}

double p_moment_small(const LevyMeasure& measure, double p) {
    if (!(p > 0.0)) throw DomainError("moment order p must be positive");
    return std::visit(Overloaded{
                          [&](const AlphaStable& s) { return p > s.alpha ? s.alpha / (p - s.alpha) : kInf; },
                          [&](const SymmetricTwoPoint& t) {
                              return t.magnitude <= 1.0 ? t.rate * std::pow(t.magnitude, p) : 0.0;
                          },
                          [&](const VarianceGamma& v) {
                              return 2.0 * v.c * std::pow(v.m, -p) * boost::math::tgamma_lower(p, v.m);
                          },
                          [](const NullMeasure&) { return 0.0; },
                      },
                      measure);
}

NuStats nu_stats(const LevyMeasure& measure, double eps, double p) {
    if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("eps must lie in (0, 1]");
    if (!(p > 0.0)) throw DomainError("moment order p must be positive");
    return NuStats{tail_mass(measure, eps), small_variance(measure, eps), p_moment_small(measure, p)};
}

double jump_exponent(const LevyMeasure& measure, double u) {
    require_finite(u, "u");
    if (u == 0.0) return 0.0;
    const double au = std::abs(u);
    return std::visit(Overloaded{
                          [&](const AlphaStable& s) {
                              if (std::abs(s.alpha - 1.0) < 1e-9) return -au * std::numbers::pi / 2.0;
                              return -std::pow(au, s.alpha) * std::tgamma(1.0 - s.alpha) *
                                     std::cos(std::numbers::pi * s.alpha / 2.0);
                          },
                          [&](const SymmetricTwoPoint& t) { return t.rate * (std::cos(u * t.magnitude) - 1.0); },
                          [&](const VarianceGamma& v) { return -v.c * std::log1p((u / v.m) * (u / v.m)); },
                          [](const NullMeasure&) { return 0.0; },
                      },
                      measure);
}

double jump_exponent_quadrature(const LevyMeasure& measure, double u) {
    require_finite(u, "u");
    if (std::holds_alternative<NullMeasure>(measure)) return 0.0;
    if (const auto* t = std::get_if<SymmetricTwoPoint>(&measure)) {
        // Atomic measure: the integral is the finite sum over both atoms.
        return 0.5 * t->rate * (std::cos(u * t->magnitude) - 1.0) + 0.5 * t->rate * (std::cos(-u * t->magnitude) - 1.0);
    }
    if (u == 0.0) return 0.0;
    const double au = std::abs(u);
    auto rho = [&](double z) { return half_density(measure, z); };

    // Head: \int_0^1 (cos(uz) - 1) rho(z) dz, written as -2 sin^2(uz/2) rho(z)
    // to avoid cancellation at the origin; split into half-periods when |u| is large.
    auto head_integrand = [&](double z) {
        if (z <= 0.0) return 0.0;
        const double s = std::sin(0.5 * au * z) / z;
        return -2.0 * s * s * weighted_half_density(measure, z);
    };
    const int pieces = std::max(1, static_cast<int>(std::ceil(au / std::numbers::pi)));
    const double width = 1.0 / pieces;
    boost::math::quadrature::tanh_sinh<double> ts;
    double head = ts.integrate(head_integrand, 0.0, width, 1e-13);
    for (int i = 1; i < pieces; ++i) {
        head += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(head_integrand, i * width, (i + 1) * width, 15, 1e-13);
    }

    // Tail: \int_1^inf cos(uz) rho(z) dz - \int_1^inf rho(z) dz, the oscillatory
    // part by a double-exponential Fourier rule after shifting z = 1 + t.
    auto shifted = [&](double t) { return rho(1.0 + t); };
    boost::math::quadrature::ooura_fourier_cos<double> cos_rule;
    boost::math::quadrature::ooura_fourier_sin<double> sin_rule;
    const double c = cos_rule.integrate(shifted, au).first;
    const double s = sin_rule.integrate(shifted, au).first;
    const double oscillatory = std::cos(au) * c - std::sin(au) * s;
    // Tail mass after z = 1/t; slowly decaying densities (small alpha) make the
    // untransformed half-line rule stop short.
    auto inverted = [&](double t) {
        const double z = 1.0 / t;
        if (!std::isfinite(z)) return 0.0;
        return weighted_half_density(measure, z);
    };
    const double mass = ts.integrate(inverted, 0.0, 1.0, 1e-13);
    return 2.0 * (head + oscillatory - mass);
}

std::complex<double> characteristic_exponent(const LevyTriplet& triplet, double u, PsiRoute route) {
    require_finite(u, "u");
    const double jumps = route == PsiRoute::closed_form ? jump_exponent(triplet.measure, u)
                                                        : jump_exponent_quadrature(triplet.measure, u);
    const double real = -0.5 * triplet.sigma * triplet.sigma * u * u + jumps;
    return {real, triplet.drift * u};
}

double sample_jump_size(const LevyMeasure& measure, double eps, CounterRng& rng) {
    if (!(eps >= 0.0)) throw DomainError("jump threshold must be non-negative");
    return std::visit(Overloaded{
                          [&](const AlphaStable& s) -> double {
                              if (eps == 0.0) throw DomainError("infinite jump intensity above threshold 0");
                              // Pareto tail: P(|z| > r) = (eps / r)^alpha.
                              const double r = eps * std::pow(rng.uniform(), -1.0 / s.alpha);
                              return rng.sign() * r;
                          },
                          [&](const SymmetricTwoPoint& t) -> double {
                              if (!(t.magnitude > eps)) throw RefusedError("no jumps above threshold");
                              return rng.sign() * t.magnitude;
                          },
                          [&](const VarianceGamma& v) -> double {
                              if (eps == 0.0) throw DomainError("infinite jump intensity above threshold 0");
                              // Target e^{-mz}/z on (eps, inf); envelope e^{-m(z-eps)}, acceptance eps/z.
                              for (;;) {
                                  const double z = eps + rng.exponential() / v.m;
                                  if (rng.uniform() * z <= eps) return rng.sign() * z;
                              }
                          },
                          [](const NullMeasure&) -> double { throw RefusedError("no jumps above threshold"); },
                      },
                      measure);
}

}  // namespace levy_elliptic
