#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "levy_elliptic/spectral_domain.hpp"

namespace levy_elliptic {

/// f(x) = value.
struct ConstantFn {
    double value = 1.0;
};

/// f = scale * e_k.
struct EigenFn {
    MultiIndex k;
    double scale = 1.0;
};

/// f = value * 1_region, region a sub-box of the domain.
struct BoxIndicatorFn {
    HyperBox region;
    double value = 1.0;
};

/// f = prod_i p_i(x_i); coefficients in increasing powers of x_i.
struct TensorPolynomialFn {
    std::vector<std::vector<double>> axis_coefficients;
};

/// f(x) = scale * (x_axis - a_axis)^exponent; singular on a face when exponent < 0.
struct AxisPowerFn {
    int axis = 0;
    double exponent = 1.0;
    double scale = 1.0;
};

/// f = sum_k coeffs[k] e_k over a fixed eigen system.
struct SeriesFn {
    std::shared_ptr<const EigenSystem> system;
    std::vector<double> coeffs;
};

/// f = G_gamma(pole, .). The 1-D gamma = 1 kernel is evaluated in closed form,
/// every other case by the truncated spectral series over `system`.
struct GreenFn {
    double gamma = 1.0;
    Point pole;
    std::shared_ptr<const EigenSystem> system;
};

/// Samples on the uniform tensor grid including the faces; multilinear
/// interpolation in between. `counts[i]` points along axis i.
struct GridSampledFn {
    std::vector<int> counts;
    std::vector<double> values;
};

/// Arbitrary callable; `certified` asserts that the caller has checked
/// integrability, `bounded` that |f| is bounded on the box.
struct CallableFn {
    std::function<double(std::span<const double>)> fn;
    bool certified = false;
    bool bounded = true;
};

using FunctionDescriptor = std::variant<ConstantFn, EigenFn, BoxIndicatorFn, TensorPolynomialFn, AxisPowerFn,
                                        SeriesFn, GreenFn, GridSampledFn, CallableFn>;

/// Evaluates f at x (x must lie in the closed box).
double evaluate(const FunctionDescriptor& f, const HyperBox& box, std::span<const double> x);

/// Power-type singularity of |f|: |f| ~ dist^{-order} to a set of codimension
/// `codim`; order 0 means bounded, `logarithmic` a log blow-up.
struct SingularityProfile {
    double order = 0.0;
    int codim = 1;
    bool logarithmic = false;
};

SingularityProfile singularity(const FunctionDescriptor& f, const HyperBox& box);

/// Whether \int_D |f|^p < inf, decided from the singularity profile.
bool power_integrable(const SingularityProfile& profile, double p);

/// True for every descriptor except an uncertified callable.
bool is_certified(const FunctionDescriptor& f);

/// Fourier coefficient <f, e_k>. Closed forms for constants, eigenfunctions,
/// indicators, series and Green kernels; tensor Gauss-Legendre quadrature
/// otherwise (throws QuadratureError when refinement stalls above `tol`).
double fourier_coeff(const HyperBox& box, std::span<const int> k, const FunctionDescriptor& f, double tol = 1e-10);

/// \int_D f(x) dx.
double integral(const HyperBox& box, const FunctionDescriptor& f, double tol = 1e-10);

/// Parses the CLI function syntax: "const:<c>", "indicator[:a:b[:a:b...]]",
/// "eigen:<k1>[,<k2>...]", "power:<axis>:<exponent>", "poly:<c0>,<c1>,...",
/// "green" (pole at the centre). `system` backs descriptors that need one.
FunctionDescriptor parse_function(const std::string& text, const HyperBox& box, double gamma,
                                  std::shared_ptr<const EigenSystem> system);

std::string describe(const FunctionDescriptor& f);

}  // namespace levy_elliptic
