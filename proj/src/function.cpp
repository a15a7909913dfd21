#include "levy_elliptic/function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "levy_elliptic/error.hpp"
#include "levy_elliptic/quadrature.hpp"

namespace levy_elliptic {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double horner(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
}

// \int_a^b sqrt(2/L) sin(pi k (x - a0)/L) dx over [lo, hi] within the axis.
double sine_integral(const HyperBox& box, int axis, int k, double lo, double hi) {
    const double len = box.length(axis);
    const double a = box.lower(axis);
    const double w = kPi * k / len;
    return std::sqrt(2.0 / len) * (std::cos(w * (lo - a)) - std::cos(w * (hi - a))) / w;
}

// Half-open membership so that adjacent indicator boxes partition the domain;
// the outer faces of the domain itself are included.
bool indicator_contains(const HyperBox& region, const HyperBox& box, std::span<const double> x) {
    for (int i = 0; i < region.dim(); ++i) {
        const double lo = region.lower(i);
        const double hi = region.upper(i);
        if (x[i] < lo) return false;
        if (x[i] > hi) return false;
        if (x[i] == hi && hi != box.upper(i)) return false;
    }
    return true;
}

double green_closed_form_1d(const HyperBox& box, double x, double y) {
    const double lo = std::min(x, y);
    const double hi = std::max(x, y);
    return (lo - box.lower(0)) * (box.upper(0) - hi) / box.length(0);
}

bool green_has_closed_form(const GreenFn& g, const HyperBox& box) { return box.dim() == 1 && g.gamma == 1.0; }

double series_eval(const EigenSystem& system, std::span<const double> coeffs, std::span<const double> x) {
    double v = 0.0;
    for (std::size_t i = 0; i < system.size(); ++i) {
        if (coeffs[i] == 0.0) continue;
        v += coeffs[i] * eigenfunction_eval(system.box(), system.index(i), x);
    }
    return v;
}

double green_series_eval(const GreenFn& g, std::span<const double> x) {
    if (!g.system) throw DomainError("Green descriptor needs an eigen system for series evaluation");
    const auto& sys = *g.system;
    double v = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const auto k = sys.index(i);
        v += eigenfunction_eval(sys.box(), k, g.pole) * eigenfunction_eval(sys.box(), k, x) / std::pow(sys.lambda(i), g.gamma);
    }
    return v;
}

double grid_eval(const GridSampledFn& g, const HyperBox& box, std::span<const double> x) {
    const int d = box.dim();
    if (static_cast<int>(g.counts.size()) != d) throw DomainError("grid descriptor dimension mismatch");
    std::vector<int> base(d);
    std::vector<double> frac(d);
    for (int i = 0; i < d; ++i) {
        if (g.counts[i] < 2) throw DomainError("grid descriptor needs at least 2 points per axis");
        const double t = (x[i] - box.lower(i)) / box.length(i) * (g.counts[i] - 1);
        int j = std::clamp(static_cast<int>(std::floor(t)), 0, g.counts[i] - 2);
        base[i] = j;
        frac[i] = t - j;
    }
    double v = 0.0;
    for (int corner = 0; corner < (1 << d); ++corner) {
        double w = 1.0;
        std::size_t flat = 0;
        for (int i = 0; i < d; ++i) {
            const int bit = (corner >> i) & 1;
            w *= bit ? frac[i] : 1.0 - frac[i];
            flat = flat * static_cast<std::size_t>(g.counts[i]) + static_cast<std::size_t>(base[i] + bit);
        }
        if (w != 0.0) v += w * g.values.at(flat);
    }
    return v;
}

double quadrature_coeff(const HyperBox& box, std::span<const int> k, const Integrand& f, double tol) {
    std::vector<int> panels(box.dim());
    for (int i = 0; i < box.dim(); ++i) panels[i] = std::max(1, (k[i] + 3) / 4);
    MultiIndex kk(k.begin(), k.end());
    const auto r = integrate_box([&](std::span<const double> x) { return f(x) * eigenfunction_eval(box, kk, x); }, box, tol, panels);
    if (!r.converged) throw QuadratureError("Fourier coefficient quadrature did not reach tolerance");
    return r.value;
}

}  // namespace

double evaluate(const FunctionDescriptor& f, const HyperBox& box, std::span<const double> x) {
    box.require_contains(x);
    return std::visit(Overloaded{
                          [&](const ConstantFn& c) { return c.value; },
                          [&](const EigenFn& e) { return e.scale * eigenfunction_eval(box, e.k, x); },
                          [&](const BoxIndicatorFn& b) { return indicator_contains(b.region, box, x) ? b.value : 0.0; },
                          [&](const TensorPolynomialFn& p) {
                              double v = 1.0;
                              for (int i = 0; i < box.dim(); ++i) v *= horner(p.axis_coefficients.at(i), x[i]);
                              return v;
                          },
                          [&](const AxisPowerFn& p) {
                              const double t = x[p.axis] - box.lower(p.axis);
                              if (t == 0.0 && p.exponent < 0.0) return kInf;
                              return p.scale * std::pow(t, p.exponent);
                          },
                          [&](const SeriesFn& s) { return series_eval(*s.system, s.coeffs, x); },
                          [&](const GreenFn& g) {
                              if (green_has_closed_form(g, box)) return green_closed_form_1d(box, g.pole[0], x[0]);
                              return green_series_eval(g, x);
                          },
                          [&](const GridSampledFn& g) { return grid_eval(g, box, x); },
                          [&](const CallableFn& c) { return c.fn(x); },
                      },
                      f);
}

SingularityProfile singularity(const FunctionDescriptor& f, const HyperBox& box) {
    return std::visit(Overloaded{
                          [&](const AxisPowerFn& p) {
                              return p.exponent < 0.0 ? SingularityProfile{-p.exponent, 1, false} : SingularityProfile{};
                          },
                          [&](const GreenFn& g) {
                              const double excess = box.dim() - 2.0 * g.gamma;
                              if (excess > 0.0) return SingularityProfile{excess, box.dim(), false};
                              if (excess == 0.0) return SingularityProfile{0.0, box.dim(), true};
                              return SingularityProfile{};
                          },
                          [&](const CallableFn& c) {
                              return c.bounded ? SingularityProfile{}
                                               : SingularityProfile{std::numeric_limits<double>::quiet_NaN(), 1, false};
                          },
                          [](const auto&) { return SingularityProfile{}; },
                      },
                      f);
}

bool power_integrable(const SingularityProfile& profile, double p) {
    if (std::isnan(profile.order)) throw DomainError("cannot decide integrability of an unbounded callable");
    if (profile.logarithmic || profile.order == 0.0) return true;
    return p * profile.order < profile.codim;
}

bool is_certified(const FunctionDescriptor& f) {
    if (const auto* c = std::get_if<CallableFn>(&f)) return c->certified;
    return true;
}

double fourier_coeff(const HyperBox& box, std::span<const int> k, const FunctionDescriptor& f, double tol) {
    if (static_cast<int>(k.size()) != box.dim()) throw DomainError("multi-index dimension does not match box");
    for (int v : k)
        if (v < 1) throw DomainError("multi-index components must be >= 1");
    const int d = box.dim();
    return std::visit(
        Overloaded{
            [&](const ConstantFn& c) {
                double v = c.value;
                for (int i = 0; i < d; ++i) v *= sine_integral(box, i, k[i], box.lower(i), box.upper(i));
                return v;
            },
            [&](const EigenFn& e) { return std::equal(k.begin(), k.end(), e.k.begin(), e.k.end()) ? e.scale : 0.0; },
            [&](const BoxIndicatorFn& b) {
                double v = b.value;
                for (int i = 0; i < d; ++i) {
                    const double lo = std::max(box.lower(i), b.region.lower(i));
                    const double hi = std::min(box.upper(i), b.region.upper(i));
                    if (!(lo < hi)) return 0.0;
                    v *= sine_integral(box, i, k[i], lo, hi);
                }
                return v;
            },
            [&](const TensorPolynomialFn& p) {
                double v = 1.0;
                for (int i = 0; i < d; ++i) {
                    const auto& c = p.axis_coefficients.at(i);
                    const HyperBox axis_box({{box.lower(i), box.upper(i)}});
                    const int panels = std::max(1, (k[i] + static_cast<int>(c.size()) + 3) / 4);
                    const auto r = adaptive_tensor_quadrature(
                        [&](std::span<const double> x) { return horner(c, x[0]) * axis_sine(box, i, k[i], x[0]); }, axis_box, tol,
                        {panels});
                    if (!r.converged) throw QuadratureError("polynomial Fourier coefficient did not converge");
                    v *= r.value;
                }
                return v;
            },
            [&](const AxisPowerFn& p) {
                if (p.exponent <= -2.0) throw DomainError("Fourier coefficient of the power descriptor diverges");
                double v = p.scale;
                for (int i = 0; i < d; ++i) {
                    if (i != p.axis) {
                        v *= sine_integral(box, i, k[i], box.lower(i), box.upper(i));
                        continue;
                    }
                    const double a = box.lower(i);
                    const auto r = integrate_1d([&](double x) { return std::pow(x - a, p.exponent) * axis_sine(box, i, k[i], x); }, a,
                                                box.upper(i), tol);
                    v *= r.value;
                }
                return v;
            },
            [&](const SeriesFn& s) {
                if (s.system->box() == box) {
                    const std::size_t pos = s.system->find(k);
                    return pos < s.system->size() ? s.coeffs[pos] : 0.0;
                }
                return quadrature_coeff(box, k, [&](std::span<const double> x) { return evaluate(f, box, x); }, tol);
            },
            [&](const GreenFn& g) { return eigenfunction_eval(box, k, g.pole) / std::pow(eigenvalue(box, k), g.gamma); },
            [&](const auto&) {
                return quadrature_coeff(box, k, [&](std::span<const double> x) { return evaluate(f, box, x); }, tol);
            },
        },
        f);
}

double integral(const HyperBox& box, const FunctionDescriptor& f, double tol) {
    const int d = box.dim();
    return std::visit(
        Overloaded{
            [&](const ConstantFn& c) { return c.value * box.volume(); },
            [&](const EigenFn& e) { return e.scale * fourier_coeff(box, e.k, ConstantFn{1.0}); },
            [&](const BoxIndicatorFn& b) {
                double v = b.value;
                for (int i = 0; i < d; ++i) {
                    const double lo = std::max(box.lower(i), b.region.lower(i));
                    const double hi = std::min(box.upper(i), b.region.upper(i));
                    v *= std::max(0.0, hi - lo);
                }
                return v;
            },
            [&](const TensorPolynomialFn& p) {
                double v = 1.0;
                for (int i = 0; i < d; ++i) {
                    const auto& c = p.axis_coefficients.at(i);
                    double s = 0.0;
                    for (std::size_t n = 0; n < c.size(); ++n) {
                        const double e = static_cast<double>(n + 1);
                        s += c[n] * (std::pow(box.upper(i), e) - std::pow(box.lower(i), e)) / e;
                    }
                    v *= s;
                }
                return v;
            },
            [&](const AxisPowerFn& p) {
                if (p.exponent <= -1.0) return p.scale == 0.0 ? 0.0 : std::copysign(kInf, p.scale);
                double v = p.scale * std::pow(box.length(p.axis), p.exponent + 1.0) / (p.exponent + 1.0);
                for (int i = 0; i < d; ++i)
                    if (i != p.axis) v *= box.length(i);
                return v;
            },
            [&](const SeriesFn& s) {
                double v = 0.0;
                for (std::size_t i = 0; i < s.system->size(); ++i) {
                    if (s.coeffs[i] != 0.0) v += s.coeffs[i] * fourier_coeff(s.system->box(), s.system->index(i), ConstantFn{1.0});
                }
                return v;
            },
            [&](const GreenFn& g) {
                if (green_has_closed_form(g, box)) {
                    return 0.5 * (g.pole[0] - box.lower(0)) * (box.upper(0) - g.pole[0]);
                }
                const auto& sys = *g.system;
                double v = 0.0;
                for (std::size_t i = 0; i < sys.size(); ++i) {
                    const auto k = sys.index(i);
                    v += eigenfunction_eval(box, k, g.pole) * fourier_coeff(box, k, ConstantFn{1.0}) / std::pow(sys.lambda(i), g.gamma);
                }
                return v;
            },
            [&](const auto&) {
                const auto r = integrate_box([&](std::span<const double> x) { return evaluate(f, box, x); }, box, tol);
                if (!r.converged) throw QuadratureError("integral quadrature did not reach tolerance");
                return r.value;
            },
        },
        f);
}

FunctionDescriptor parse_function(const std::string& text, const HyperBox& box, double gamma,
                                  std::shared_ptr<const EigenSystem> system) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.empty()) throw DomainError("empty function descriptor");
    auto numbers = [&](const std::string& s) {
        std::vector<double> out;
        std::stringstream in(s);
        for (std::string item; std::getline(in, item, ',');) {
            try {
                out.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw DomainError("bad number '" + item + "' in function descriptor '" + text + "'");
            }
        }
        return out;
    };
    const int d = box.dim();
    const std::string& tag = parts[0];
    if (tag == "const" && parts.size() == 2) return ConstantFn{numbers(parts[1]).at(0)};
    if (tag == "indicator") {
        if (parts.size() == 1) return BoxIndicatorFn{box, 1.0};
        if (parts.size() != static_cast<std::size_t>(1 + 2 * d)) throw DomainError("indicator needs a:b per axis");
        std::vector<std::pair<double, double>> iv;
        for (int i = 0; i < d; ++i) iv.emplace_back(numbers(parts[1 + 2 * i]).at(0), numbers(parts[2 + 2 * i]).at(0));
        return BoxIndicatorFn{HyperBox(iv), 1.0};
    }
    if (tag == "eigen" && parts.size() == 2) {
        const auto v = numbers(parts[1]);
        if (static_cast<int>(v.size()) != d) throw DomainError("eigen index needs one entry per axis");
        MultiIndex k;
        for (double x : v) k.push_back(static_cast<int>(x));
        return EigenFn{k, 1.0};
    }
    if (tag == "power" && parts.size() == 3) {
        const int axis = static_cast<int>(numbers(parts[1]).at(0));
        if (axis < 0 || axis >= d) throw DomainError("power descriptor axis out of range");
        return AxisPowerFn{axis, numbers(parts[2]).at(0), 1.0};
    }
    if (tag == "poly" && parts.size() == 2) {
        return TensorPolynomialFn{std::vector<std::vector<double>>(static_cast<std::size_t>(d), numbers(parts[1]))};
    }
    if (tag == "green") {
        Point pole = parts.size() == 2 ? numbers(parts[1]) : box.center();
        box.require_contains(pole);
        return GreenFn{gamma, pole, std::move(system)};
    }
    throw DomainError("unknown function descriptor '" + text + "'");
}

std::string describe(const FunctionDescriptor& f) {
    std::ostringstream os;
    os.precision(17);
    std::visit(Overloaded{
                   [&](const ConstantFn& c) { os << "const:" << c.value; },
                   [&](const EigenFn& e) {
                       os << "eigen:";
                       for (std::size_t i = 0; i < e.k.size(); ++i) os << (i ? "," : "") << e.k[i];
                       if (e.scale != 1.0) os << "*" << e.scale;
                   },
                   [&](const BoxIndicatorFn& b) {
                       os << "indicator";
                       for (int i = 0; i < b.region.dim(); ++i) os << ':' << b.region.lower(i) << ':' << b.region.upper(i);
                   },
                   [&](const TensorPolynomialFn&) { os << "poly"; },
                   [&](const AxisPowerFn& p) { os << "power:" << p.axis << ':' << p.exponent; },
                   [&](const SeriesFn& s) { os << "series[" << s.coeffs.size() << "]"; },
                   [&](const GreenFn& g) {
                       os << "green(gamma=" << g.gamma << ";pole=";
                       for (std::size_t i = 0; i < g.pole.size(); ++i) os << (i ? "," : "") << g.pole[i];
                       os << ")";
                   },
                   [&](const GridSampledFn&) { os << "grid"; },
                   [&](const CallableFn&) { os << "callable"; },
               },
               f);
    return os.str();
}

}  // namespace levy_elliptic
