#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "levy_elliptic/function.hpp"
#include "levy_elliptic/kernels.hpp"
#include "levy_elliptic/levy_measure.hpp"
#include "levy_elliptic/noise_field.hpp"
#include "levy_elliptic/spectral_domain.hpp"

namespace levy_elliptic {

using DetailValue = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;

enum class Direction { at_most, at_least };
enum class Outcome { decided, inconclusive, skipped };

std::string to_string(Direction d);
std::string to_string(Outcome o);

/// pass = statistic <= threshold (at_most) or >= threshold (at_least);
/// inconclusive and skipped reports never pass and never count as failures.
struct TestReport {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::size_t replicates = 0;
    std::uint64_t seed = 0;
    Direction direction = Direction::at_most;
    Outcome outcome = Outcome::decided;
    std::map<std::string, DetailValue> details;

    /// Sets `pass` from statistic, threshold and direction.
    void decide();
    bool failed() const noexcept { return outcome == Outcome::decided && !pass; }
};

/// True when no decided report failed.
bool all_pass(std::span<const TestReport> reports);

// ---------------------------------------------------------------- CF test

struct CfOptions {
    /// Jump truncation level; negative picks 0 for finite and 0.01 for
    /// infinite activity.
    double eps = -1.0;
    SmallJumpPolicy policy = SmallJumpPolicy::gaussianize;
    /// Eigen cutoff for the Gaussian and small-jump parts of the pairing.
    std::size_t K = 2000;
    PsiRoute route = PsiRoute::closed_form;
    int workers = 1;
};

inline constexpr std::size_t kMinCfReplicates = 1000;

/// max_u |mean exp(iu<noise, f>) - exp(\int Psi(u f(x)) dx)| over M
/// replicates, against the envelope 4/sqrt(M).
TestReport empirical_cf_test(const LevyTriplet& triplet, const FunctionDescriptor& f, const HyperBox& box,
                             std::span<const double> u_grid, std::size_t M, std::uint64_t seed,
                             const CfOptions& options = {});

/// exp(\int_D Psi(u f(x)) dx), complex.
std::complex<double> target_cf(const LevyTriplet& triplet, const FunctionDescriptor& f, const HyperBox& box, double u,
                               PsiRoute route);

// ---------------------------------------------------------- isometry test

/// Variance of \int f z dJ over the band eps < |z| <= 1 against
/// \int f^2 * \int_{band} z^2 nu(dz); threshold 0.05.
TestReport isometry_test(const LevyMeasure& measure, double eps, const FunctionDescriptor& f, const HyperBox& box,
                         std::size_t M, std::uint64_t seed, int workers = 1);

// ------------------------------------------------------ weak identity test

inline constexpr double kWeakIdentityTolerance = 1e-6;

/// <u, phi> by tensor quadrature against <noise, G * phi> by direct pairing,
/// relative to max(1, |lhs|, |rhs|).
TestReport weak_identity_test(const NoiseRealization& realization, const FunctionDescriptor& phi, double gamma,
                              std::shared_ptr<const EigenSystem> system, bool override_existence = false);

// --------------------------------------------------------- Sobolev sweeps

inline constexpr double kConvergedIncrement = 0.01;
inline constexpr double kDivergingSlope = 0.05;

struct SweepOptions {
    double eps = 0.05;
    SmallJumpPolicy policy = SmallJumpPolicy::gaussianize;
    int workers = 1;
    bool override_existence = false;
    kernels::SineTable sine_mode = kernels::SineTable::recurrence;
};

struct SobolevSweep {
    std::vector<TestReport> reports;
    std::vector<double> r_list;
    /// Cutoff counts K.
    std::vector<std::size_t> K_list;
    /// trajectories[i][j]: median over replicates of the partial norm at r_list[i], K_list[j].
    std::vector<std::vector<double>> trajectories;
};

/// Partial Sobolev norms of sampled solutions at every K; per r the median
/// trajectory is classified convergent (last-doubling relative increment
/// < 0.01), divergent (log-log slope >= 0.05) or inconclusive, and compared
/// with the prediction r < 2 gamma - d/2. K_list must double at its last step.
SobolevSweep sobolev_sweep(const HyperBox& box, double gamma, const LevyTriplet& triplet, std::span<const double> r_list,
                           std::span<const std::size_t> K_list, std::size_t replicates, std::uint64_t seed,
                           const SweepOptions& options = {});

inline constexpr double kSurrogateSlack = 0.01;
inline constexpr double kSurrogateBoundaryTolerance = 0.01;

/// Deterministic surrogate a_k = lambda_k^{-gamma}. Eigenvalues are grouped
/// in blocks (lambda_1 4^{n-1}, lambda_1 4^n]; the block growth exponent
/// e(r) = log_4(B_N / B_{N-1}) tends to r - 2 gamma + d/2. r is classified
/// divergent when e(r) >= -kSurrogateSlack. A final report compares the root
/// of e with 2 gamma - d/2.
SobolevSweep sobolev_surrogate(const HyperBox& box, double gamma, std::span<const double> r_list, int blocks);

/// Growth exponent of the last surrogate block.
double surrogate_exponent(const EigenSystem& system, double gamma, double r, int blocks);

// -------------------------------------------------------- continuity probe

inline constexpr double kClassFraction = 0.8;
inline constexpr double kSupGrowth = 0.01;

struct ContinuityLevel {
    int level = 0;
    std::size_t modes = 0;
    /// Medians over replicates.
    double median_increment = 0.0;
    double median_sup = 0.0;
};

struct ContinuityProbe {
    TestReport report;
    std::vector<ContinuityLevel> levels;
};

/// At level l the field is truncated to lambda <= (pi 2^l / L_min)^2 and
/// sampled on (2^l + 1)^d grid points. A replicate is continuous-consistent
/// when the largest adjacent increment drops across the two finest levels,
/// blowup-consistent when the grid sup-norm grows by at least 1% at every
/// refinement.
ContinuityProbe continuity_probe(const HyperBox& box, double gamma, const LevyTriplet& triplet,
                                 std::span<const int> grid_levels, std::size_t replicates, std::uint64_t seed,
                                 const SweepOptions& options = {});

// ---------------------------------------------------- spectral bound check

inline constexpr double kSpectralSlopeBand = 0.1;

/// V(t, x) = sum_{lambda_k <= t} e_k(x)^2 against t^{d/2}: statistic
/// max V / t^{d/2}, threshold the lattice bound prod (2/L_i)(L_i/pi); passes
/// only if in addition the least-squares log-log slope of max_x V/t^{d/2}
/// lies within +-0.1.
TestReport spectral_bound_check(const HyperBox& box, std::span<const double> t_list, std::span<const double> x_sample);

/// V(t, x) for one point.
double spectral_density(const EigenSystem& system, double t, std::span<const double> x);

/// n quasi-random interior points (row-major).
std::vector<double> default_sample_points(const HyperBox& box, std::size_t n);

}  // namespace levy_elliptic
