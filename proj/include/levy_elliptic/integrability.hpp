#pragma once

#include <string>

#include "levy_elliptic/function.hpp"
#include "levy_elliptic/levy_measure.hpp"
#include "levy_elliptic/spectral_domain.hpp"

namespace levy_elliptic {

/// The three integrals deciding whether f can be integrated against the noise:
/// \int |b f|, \int |sigma f|^2 and \int\int (|z f(x)|^2 ^ 1) dx nu(dz).
struct IntegrabilityReport {
    double drift_integral = 0.0;
    double gauss_integral = 0.0;
    double jump_integral = 0.0;
    bool verdict = true;
    /// False when a finite integral was only approximated within budget.
    bool converged = true;
};

inline constexpr double kDriftGaussTolerance = 1e-8;
inline constexpr double kJumpTolerance = 1e-6;

/// Infinite integrals are detected from the singularity profile of f (never by
/// quadrature blow-up); finite ones are computed numerically. For each x the
/// inner z-integral is evaluated in closed form, split at |z| = 1/|f(x)|.
IntegrabilityReport rr_integrability(const FunctionDescriptor& f, const LevyTriplet& triplet, const HyperBox& box);

/// \int (|c z|^2 ^ 1) nu(dz).
double truncated_second_moment(const LevyMeasure& measure, double c);

enum class OperatorMode { spectral, laplacian_green_bound };

std::string to_string(OperatorMode mode);
OperatorMode parse_operator_mode(const std::string& text);

struct ExistenceVerdict {
    int d = 1;
    double gamma = 1.0;
    OperatorMode mode = OperatorMode::spectral;
    std::string triplet_summary;
    bool exists = false;
    /// Admissible small-jump moment orders p; open at both ends unless p_lo == p_hi.
    double p_lo = 2.0;
    double p_hi = 2.0;
    double r_max = 0.0;
    bool continuous = false;
    std::string reason;
};

/// Spectral mode: a mild solution of (-Laplacian)^gamma u = noise exists iff
/// gamma > d/4, with Sobolev regularity r < 2 gamma - d/2 and a continuous
/// version iff gamma > d/2. Laplacian-bound mode (gamma is ignored and taken as
/// 1): for d >= 4 it needs sigma = 0 and a finite small-jump p-moment for some
/// p < d/(d-2). All thresholds are strict.
ExistenceVerdict existence_verdict(int d, double gamma, const LevyTriplet& triplet,
                                   OperatorMode mode = OperatorMode::spectral);

/// Infimum of the moment orders p > 0 with \int_{|z|<=1} |z|^p nu(dz) < inf
/// (the infimum itself is excluded).
double moment_order_infimum(const LevyMeasure& measure);

std::string summarize(const LevyTriplet& triplet);

}  // namespace levy_elliptic
