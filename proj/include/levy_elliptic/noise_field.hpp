#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "levy_elliptic/function.hpp"
#include "levy_elliptic/kernels.hpp"
#include "levy_elliptic/levy_measure.hpp"
#include "levy_elliptic/rng.hpp"
#include "levy_elliptic/spectral_domain.hpp"

namespace levy_elliptic {

/// Atoms (y_j, z_j) of the Poisson random measure restricted to |z| > eps.
class JumpAtomSet {
public:
    JumpAtomSet(HyperBox box, double eps);

    void add(std::span<const double> location, double size);

    const HyperBox& box() const noexcept { return box_; }
    double eps() const noexcept { return eps_; }
    std::size_t size() const noexcept { return sizes_.size(); }
    bool empty() const noexcept { return sizes_.empty(); }

    std::span<const double> location(std::size_t j) const {
        const auto d = static_cast<std::size_t>(box_.dim());
        return {locations_.data() + j * d, d};
    }
    double jump(std::size_t j) const { return sizes_[j]; }

    std::span<const double> locations() const noexcept { return locations_; }
    std::span<const double> sizes() const noexcept { return sizes_; }

private:
    HyperBox box_;
    double eps_;
    std::vector<double> locations_;
    std::vector<double> sizes_;
};

/// Compound-Poisson sample of the jumps above eps: Poisson(|D| nu(|z|>eps))
/// atoms, uniform locations, sizes from the restricted measure.
JumpAtomSet sample_prm_large(const HyperBox& box, const LevyMeasure& measure, double eps, CounterRng& rng);

/// Treatment of the jumps with |z| <= eps.
enum class SmallJumpPolicy { drop, gaussianize };

std::string to_string(SmallJumpPolicy policy);
SmallJumpPolicy parse_policy(const std::string& text);

/// One sample of the white noise: drift, Gaussian eigen-coefficients, jump
/// atoms and (optionally) a Gaussian surrogate for the small jumps. The
/// Gaussian coefficient of index k is a pure function of (seed, k).
class NoiseRealization {
public:
    NoiseRealization(LevyTriplet triplet, JumpAtomSet atoms, SmallJumpPolicy policy, std::uint64_t seed);

    const LevyTriplet& triplet() const noexcept { return triplet_; }
    const JumpAtomSet& atoms() const noexcept { return atoms_; }
    const HyperBox& box() const noexcept { return atoms_.box(); }
    SmallJumpPolicy policy() const noexcept { return policy_; }
    std::uint64_t seed() const noexcept { return seed_; }
    double eps() const noexcept { return atoms_.eps(); }

    /// Variance of each small-jump surrogate coefficient (0 under `drop`).
    double small_jump_variance() const noexcept { return small_variance_; }

    /// sigma * g_k with g_k ~ N(0,1) keyed by (seed, k); exactly 0 when sigma = 0.
    double gaussian_coeff(std::span<const int> k) const;

    /// Small-jump surrogate coefficient h_k ~ N(0, small_jump_variance()).
    double small_jump_coeff(std::span<const int> k) const;

private:
    LevyTriplet triplet_;
    JumpAtomSet atoms_;
    SmallJumpPolicy policy_;
    std::uint64_t seed_;
    double small_variance_;
};

/// Samples atoms with a stream derived from `seed` and wraps them with the
/// Gaussian / small-jump streams of the same seed.
NoiseRealization sample_noise(const HyperBox& box, const LevyTriplet& triplet, double eps, SmallJumpPolicy policy,
                              std::uint64_t seed);

/// c_k = <noise, e_k> for every entry of the system, in system order.
std::vector<double> pair_eigen(const NoiseRealization& realization, const EigenSystem& system, int workers = 1,
                               kernels::SineTable mode = kernels::SineTable::direct);

/// Precomputed pieces of <noise, f>: the drift integral and the sparse
/// eigen-expansion used for the Gaussian and small-jump parts.
struct PairingPlan {
    FunctionDescriptor f;
    HyperBox box;
    double drift_integral = 0.0;
    std::vector<MultiIndex> indices;
    std::vector<double> coeffs;
};

/// Builds a plan; refuses uncertified callables.
PairingPlan make_pairing_plan(const FunctionDescriptor& f, const EigenSystem& system);

double pair(const NoiseRealization& realization, const PairingPlan& plan);

/// <noise, f>: drift by b \int f, Gaussian and small-jump parts through the
/// eigen-expansion of f, jumps by direct summation over the atoms.
double pair_with_function(const NoiseRealization& realization, const FunctionDescriptor& f, const EigenSystem& system);

/// CSV columns y_1..y_d, z.
void write_atoms_csv(std::ostream& os, const JumpAtomSet& atoms);

}  // namespace levy_elliptic
