#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "levy_elliptic/function.hpp"
#include "levy_elliptic/kernels.hpp"
#include "levy_elliptic/noise_field.hpp"
#include "levy_elliptic/spectral_domain.hpp"

namespace levy_elliptic {

struct Provenance {
    enum class Kind { manual, solved_from_noise, torsion, green_convolution };
    Kind kind = Kind::manual;
    std::uint64_t seed = 0;
};

std::string to_string(const Provenance& p);

/// u = sum_k a_k e_k, coefficients aligned with the eigen system order.
struct SpectralField {
    std::shared_ptr<const EigenSystem> system;
    double gamma = 1.0;
    std::vector<double> coeffs;
    Provenance provenance;

    const HyperBox& box() const { return system->box(); }
    std::size_t size() const noexcept { return coeffs.size(); }
};

/// Checks coeffs.size() == system size and gamma > 0.
void validate(const SpectralField& field);

struct GreenValue {
    double value = 0.0;
    /// Weyl estimate of sum over the omitted tail of sup|e_k|^2 / lambda_k^gamma.
    double tail_estimate = 0.0;
};

/// Truncated G_gamma(x, y) = sum_k e_k(x) e_k(y) / lambda_k^gamma. On the
/// diagonal the value depends on the cutoff whenever gamma <= d/2.
GreenValue green_gamma_eval(const HyperBox& box, double gamma, std::span<const double> x, std::span<const double> y,
                            const EigenSystem& system);

/// G_1 on an interval: (min - a)(b - max)/L.
double green_interval_closed_form(double a, double b, double x, double y);

/// G_2 on an interval, the kernel of the squared Green operator.
double green2_interval_closed_form(double a, double b, double x, double y);

struct SolveOptions {
    /// Allow gamma <= d/4 (the series then has no limit as the cutoff grows).
    bool override_existence = false;
    int workers = 1;
    kernels::SineTable sine_mode = kernels::SineTable::direct;
};

/// a_k = <noise, e_k> / lambda_k^gamma. Throws RefusedError when gamma <= d/4
/// unless overridden.
SpectralField solve_mild(const NoiseRealization& realization, double gamma, std::shared_ptr<const EigenSystem> system,
                         const SolveOptions& options = {});

/// Evaluates u at row-major points (n x d); exactly 0 on the boundary.
std::vector<double> eval_field(const SpectralField& field, std::span<const double> points, int workers = 1);

/// u on the tensor grid axis_points[0] x ... (last axis fastest).
std::vector<double> eval_field_grid(const SpectralField& field, const std::vector<std::vector<double>>& axis_points,
                                    int workers = 1);

struct SobolevNorm {
    /// sum_k lambda_k^r a_k^2.
    double squared = 0.0;
    /// Contribution of the last ordinal half [K/2, K).
    double last_dyadic_increment = 0.0;
};

SobolevNorm sobolev_norm(const SpectralField& field, double r);

/// Partial sums of lambda_k^r a_k^2 over the first n entries, for each n in `counts`.
std::vector<double> sobolev_partial_sums(const SpectralField& field, double r, std::span<const std::size_t> counts);

/// Solution of -Laplacian v = 1 with zero boundary values, coefficients F_k[1]/lambda_k.
SpectralField torsion_solution(std::shared_ptr<const EigenSystem> system);

/// G_gamma * phi as a series descriptor with coefficients F_k[phi]/lambda_k^gamma.
FunctionDescriptor green_convolve(double gamma, const FunctionDescriptor& phi, std::shared_ptr<const EigenSystem> system);

/// The same coefficients wrapped as a field.
SpectralField green_convolve_field(double gamma, const FunctionDescriptor& phi, std::shared_ptr<const EigenSystem> system);

/// CSV (ordinal, k_1..k_d, lambda, a_k).
void write_coeffs_csv(std::ostream& os, const SpectralField& field);

/// CSV (x_1..x_d, value) over the tensor grid.
void write_grid_csv(std::ostream& os, const std::vector<std::vector<double>>& axis_points, std::span<const double> values);

/// n + 1 equispaced points covering [lower, upper] of each axis.
std::vector<std::vector<double>> uniform_grid(const HyperBox& box, int intervals);

}  // namespace levy_elliptic
