#pragma once

#include <complex>
#include <string>
#include <variant>

#include "levy_elliptic/rng.hpp"

namespace levy_elliptic {

/// Symmetric alpha-stable measure nu(dz) = (alpha/2) |z|^{-alpha-1} dz.
struct AlphaStable {
    double alpha = 1.0;
};

/// nu = rate * (delta_{+a} + delta_{-a}) / 2.
struct SymmetricTwoPoint {
    double rate = 1.0;
    double magnitude = 1.0;
};

/// Density (c/|z|) exp(-m|z|).
struct VarianceGamma {
    double c = 1.0;
    double m = 1.0;
};

/// nu = 0.
struct NullMeasure {};

using LevyMeasure = std::variant<AlphaStable, SymmetricTwoPoint, VarianceGamma, NullMeasure>;

/// Characteristic triplet (b, sigma, nu).
struct LevyTriplet {
    double drift = 0.0;
    double sigma = 0.0;
    LevyMeasure measure = NullMeasure{};
};

/// Throws DomainError unless the parameters are valid and the Levy condition
/// \int (z^2 ^ 1) nu(dz) < inf holds.
void validate(const LevyMeasure& measure);
void validate(const LevyTriplet& triplet);

/// Human-readable / round-trippable form, e.g. "alpha:1.5", "twopoint:1:0.8",
/// "vg:1:2", "null".
std::string to_string(const LevyMeasure& measure);
LevyMeasure parse_measure(const std::string& text);

bool is_null(const LevyMeasure& measure) noexcept;

/// True when nu has infinitely many jumps in every neighbourhood of zero.
bool infinite_activity(const LevyMeasure& measure) noexcept;

/// nu({|z| > eps}) for any eps >= 0 (may be +inf).
double tail_mass(const LevyMeasure& measure, double eps);

/// \int_{|z| <= eps} z^2 nu(dz) for any eps >= 0 (eps may be +inf).
double small_variance(const LevyMeasure& measure, double eps);

/// \int_{|z| <= 1} |z|^p nu(dz); +inf when divergent.
double p_moment_small(const LevyMeasure& measure, double p);

struct NuStats {
    double tail_mass = 0.0;
    double small_variance = 0.0;
    double p_moment_small = 0.0;
};

/// Closed-form tail mass above eps, variance below eps and the p-th small-jump
/// moment. eps must lie in (0, 1] and p must be positive.
NuStats nu_stats(const LevyMeasure& measure, double eps, double p);

/// \int (cos(uz) - 1) nu(dz), closed form for every variant.
double jump_exponent(const LevyMeasure& measure, double u);

/// Same integral by adaptive quadrature (split at |z| = 1, Fourier-type rule on
/// the tail). Independent route used for cross-checks and quadrature targets.
double jump_exponent_quadrature(const LevyMeasure& measure, double u);

enum class PsiRoute { closed_form, quadrature };

/// Psi(u) = i b u - sigma^2 u^2 / 2 + \int (e^{iuz} - 1 - iuz 1_{|z|<=1}) nu(dz).
/// For the symmetric measures above the compensator term integrates to zero.
std::complex<double> characteristic_exponent(const LevyTriplet& triplet, double u,
                                             PsiRoute route = PsiRoute::closed_form);

/// Draws z from nu restricted to {|z| > eps}, normalised. Throws RefusedError
/// when that restriction has zero mass and DomainError when it is infinite.
double sample_jump_size(const LevyMeasure& measure, double eps, CounterRng& rng);

}  // namespace levy_elliptic
