#pragma once

#include <functional>
#include <span>
#include <vector>

#include "levy_elliptic/spectral_domain.hpp"

namespace levy_elliptic {

using Integrand = std::function<double(std::span<const double>)>;

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
    std::size_t evaluations = 0;
};

/// Nodes and weights of the composite 16-point Gauss-Legendre rule on [a, b].
void gauss_legendre_axis(double a, double b, int panels, std::vector<double>& nodes, std::vector<double>& weights);

/// n-th element of the van der Corput sequence in `base`.
double halton_coordinate(std::size_t n, unsigned base);

/// Composite 16-point Gauss-Legendre rule on `panels[i]` equal panels along
/// axis i of the box.
double tensor_gauss_legendre(const Integrand& f, const HyperBox& box, std::span<const int> panels);

/// Doubles the panel counts until two successive values agree to
/// tol * max(1, |value|) or the evaluation budget is exhausted.
QuadratureResult adaptive_tensor_quadrature(const Integrand& f, const HyperBox& box, double tol,
                                            std::vector<int> initial_panels = {},
                                            std::size_t max_evaluations = 20'000'000);

/// 1-D adaptive integral on [a, b] tolerant of integrable endpoint singularities.
QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b, double tol);

/// Halton quasi-Monte Carlo estimate with n points (used above dimension 3).
double halton_integral(const Integrand& f, const HyperBox& box, std::size_t n);

/// Quadrature for d <= 3, Halton points (with a halving-based error estimate)
/// above; `converged` reports whether the tolerance was met.
QuadratureResult integrate_box(const Integrand& f, const HyperBox& box, double tol,
                               std::vector<int> initial_panels = {});

}  // namespace levy_elliptic
