#include "levy_elliptic/noise_field.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "levy_elliptic/csv.hpp"
#include "levy_elliptic/error.hpp"

namespace levy_elliptic {

JumpAtomSet::JumpAtomSet(HyperBox box, double eps) : box_(std::move(box)), eps_(eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("truncation level eps must lie in [0, 1]");
}

void JumpAtomSet::add(std::span<const double> location, double size) {
    box_.require_contains(location);
    if (!std::isfinite(size)) throw DomainError("jump size must be finite");
    if (!(std::abs(size) > eps_)) throw DomainError("jump size must exceed the truncation level");
    locations_.insert(locations_.end(), location.begin(), location.end());
    sizes_.push_back(size);
}

JumpAtomSet sample_prm_large(const HyperBox& box, const LevyMeasure& measure, double eps, CounterRng& rng) {
    JumpAtomSet atoms(box, eps);
    const double mass = tail_mass(measure, eps);
    if (std::isinf(mass)) throw DomainError("infinite jump intensity above eps; use eps > 0 for infinite-activity measures");
    if (mass == 0.0) return atoms;
    const std::uint64_t n = rng.poisson(box.volume() * mass);
    Point y(static_cast<std::size_t>(box.dim()));
    for (std::uint64_t j = 0; j < n; ++j) {
        for (int i = 0; i < box.dim(); ++i) y[i] = box.lower(i) + box.length(i) * rng.uniform();
        atoms.add(y, sample_jump_size(measure, eps, rng));
    }
    return atoms;
}

std::string to_string(SmallJumpPolicy policy) { return policy == SmallJumpPolicy::drop ? "drop" : "gaussianize"; }

SmallJumpPolicy parse_policy(const std::string& text) {
    if (text == "drop") return SmallJumpPolicy::drop;
    if (text == "gaussianize") return SmallJumpPolicy::gaussianize;
    throw DomainError("small-jump policy must be 'drop' or 'gaussianize'");
}

NoiseRealization::NoiseRealization(LevyTriplet triplet, JumpAtomSet atoms, SmallJumpPolicy policy, std::uint64_t seed)
    : triplet_(std::move(triplet)), atoms_(std::move(atoms)), policy_(policy), seed_(seed) {
    validate(triplet_);
    small_variance_ = policy_ == SmallJumpPolicy::gaussianize ? small_variance(triplet_.measure, atoms_.eps()) : 0.0;
}

double NoiseRealization::gaussian_coeff(std::span<const int> k) const {
    if (triplet_.sigma == 0.0) return 0.0;
    return triplet_.sigma * keyed_normal(derive_key(seed_, StreamTag::gaussian, hash_index(k)));
}

double NoiseRealization::small_jump_coeff(std::span<const int> k) const {
    if (small_variance_ == 0.0) return 0.0;
    return std::sqrt(small_variance_) * keyed_normal(derive_key(seed_, StreamTag::small_jumps, hash_index(k)));
}

NoiseRealization sample_noise(const HyperBox& box, const LevyTriplet& triplet, double eps, SmallJumpPolicy policy,
                              std::uint64_t seed) {
    validate(triplet);
    CounterRng rng(derive_key(seed, StreamTag::atoms));
    return NoiseRealization(triplet, sample_prm_large(box, triplet.measure, eps, rng), policy, seed);
}

std::vector<double> pair_eigen(const NoiseRealization& realization, const EigenSystem& system, int workers,
                               kernels::SineTable mode) {
    if (!(realization.box() == system.box())) throw DomainError("noise realization and eigen system live on different boxes");
    std::vector<double> jumps(system.size(), 0.0);
    const auto& atoms = realization.atoms();
    if (!atoms.empty()) {
        if (workers > 1) {
            kernels::accumulate_atoms_parallel(system, atoms.locations(), atoms.sizes(), jumps, workers, mode);
        } else {
            kernels::accumulate_atoms_serial(system, atoms.locations(), atoms.sizes(), jumps, mode);
        }
    }
    const double b = realization.triplet().drift;
    std::vector<double> c(system.size());
    const long n = static_cast<long>(system.size());
#pragma omp parallel for schedule(static) num_threads(workers > 0 ? workers : 1) if (workers > 1)
    for (long e = 0; e < n; ++e) {
        const auto k = system.index(static_cast<std::size_t>(e));
        const double drift = b * fourier_coeff(system.box(), k, ConstantFn{1.0});
        const double gauss = realization.gaussian_coeff(k);
        const double small = realization.small_jump_coeff(k);
        c[e] = ((drift + gauss) + jumps[e]) + small;
    }
    return c;
}

PairingPlan make_pairing_plan(const FunctionDescriptor& f, const EigenSystem& system) {
    if (!is_certified(f)) throw RefusedError("function is not a recognised descriptor and was not certified integrable");
    const HyperBox& box = system.box();
    PairingPlan plan{f, box, 0.0, {}, {}};
    try {
        plan.drift_integral = integral(box, f);
    } catch (const QuadratureError&) {
        plan.drift_integral = std::numeric_limits<double>::quiet_NaN();
    }

    if (const auto* e = std::get_if<EigenFn>(&f)) {
        plan.indices.push_back(e->k);
        plan.coeffs.push_back(e->scale);
        return plan;
    }
    if (const auto* s = std::get_if<SeriesFn>(&f); s != nullptr && s->system->box() == box) {
        for (std::size_t i = 0; i < s->system->size(); ++i) {
            if (s->coeffs[i] == 0.0) continue;
            const auto k = s->system->index(i);
            plan.indices.emplace_back(k.begin(), k.end());
            plan.coeffs.push_back(s->coeffs[i]);
        }
        return plan;
    }
    for (std::size_t i = 0; i < system.size(); ++i) {
        const auto k = system.index(i);
        const double c = fourier_coeff(box, k, f);
        if (c == 0.0) continue;
        plan.indices.emplace_back(k.begin(), k.end());
        plan.coeffs.push_back(c);
    }
    return plan;
}

double pair(const NoiseRealization& realization, const PairingPlan& plan) {
    if (!(realization.box() == plan.box)) throw DomainError("noise realization and pairing plan live on different boxes");
    const double b = realization.triplet().drift;
    double drift = 0.0;
    if (b != 0.0 || std::isfinite(plan.drift_integral)) {
        if (std::isnan(plan.drift_integral)) throw QuadratureError("drift integral of the test function is unavailable");
        drift = b * plan.drift_integral;
    }
    double gauss = 0.0;
    double small = 0.0;
    const bool need_gauss = realization.triplet().sigma != 0.0;
    const bool need_small = realization.small_jump_variance() != 0.0;
    if (need_gauss || need_small) {
        for (std::size_t i = 0; i < plan.indices.size(); ++i) {
            if (need_gauss) gauss += plan.coeffs[i] * realization.gaussian_coeff(plan.indices[i]);
            if (need_small) small += plan.coeffs[i] * realization.small_jump_coeff(plan.indices[i]);
        }
    }
    double jumps = 0.0;
    const auto& atoms = realization.atoms();
    for (std::size_t j = 0; j < atoms.size(); ++j) jumps += evaluate(plan.f, plan.box, atoms.location(j)) * atoms.jump(j);
    return ((drift + gauss) + jumps) + small;
}

double pair_with_function(const NoiseRealization& realization, const FunctionDescriptor& f, const EigenSystem& system) {
    return pair(realization, make_pairing_plan(f, system));
}

void write_atoms_csv(std::ostream& os, const JumpAtomSet& atoms) {
    const int d = atoms.box().dim();
    for (int i = 0; i < d; ++i) os << "y_" << (i + 1) << ',';
    os << "z\n";
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        for (double y : atoms.location(j)) os << fmt17(y) << ',';
        os << fmt17(atoms.jump(j)) << '\n';
    }
}

}  // namespace levy_elliptic
