#include "levy_elliptic/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <cstdio>
#include <limits>

#include "levy_elliptic/csv.hpp"
#include "levy_elliptic/error.hpp"
#include "levy_elliptic/integrability.hpp"
#include "levy_elliptic/quadrature.hpp"
#include "levy_elliptic/rng.hpp"
#include "levy_elliptic/solver.hpp"

namespace levy_elliptic {

namespace {

constexpr double kTargetTolerance = 1e-10;

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::uint64_t replicate_seed(std::uint64_t seed, std::size_t i) { return derive_key(seed, StreamTag::replicate, i); }

// Region on which f is a nonzero constant, when f has that form.
struct PiecewiseConstant {
    double value = 0.0;
    double volume = 0.0;
};

std::optional<PiecewiseConstant> as_piecewise_constant(const FunctionDescriptor& f, const HyperBox& box) {
    if (const auto* c = std::get_if<ConstantFn>(&f)) return PiecewiseConstant{c->value, box.volume()};
    if (const auto* b = std::get_if<BoxIndicatorFn>(&f)) {
        double vol = 1.0;
        for (int i = 0; i < box.dim(); ++i) {
            const double lo = std::max(b->region.lower(i), box.lower(i));
            const double hi = std::min(b->region.upper(i), box.upper(i));
            vol *= std::max(0.0, hi - lo);
        }
        return PiecewiseConstant{b->value, vol};
    }
    return std::nullopt;
}

double integral_of_square(const FunctionDescriptor& f, const HyperBox& box) {
    if (auto pc = as_piecewise_constant(f, box)) return pc->value * pc->value * pc->volume;
    const auto r = integrate_box(
        [&](std::span<const double> x) {
            const double v = evaluate(f, box, x);
            return v * v;
        },
        box, 1e-10);
    if (!r.converged) throw QuadratureError("quadrature for the integral of f^2 did not converge");
    return r.value;
}

std::vector<int> weak_panels(const EigenSystem& system, const FunctionDescriptor& phi) {
    std::vector<int> kmax = system.max_index();
    if (const auto* e = std::get_if<EigenFn>(&phi)) {
        for (std::size_t i = 0; i < kmax.size(); ++i) kmax[i] += e->k[i];
    } else {
        for (auto& k : kmax) k *= 2;
    }
    for (auto& k : kmax) k = k / 4 + 2;
    return kmax;
}

struct Classification {
    std::string label;
    double increment = 0.0;
    double slope = 0.0;
};

Classification classify_trajectory(double previous, double last, double k_ratio) {
    Classification c;
    c.increment = last > 0.0 ? (last - previous) / last : 0.0;
    c.slope = (previous > 0.0 && last > 0.0) ? std::log(last / previous) / std::log(k_ratio) : 0.0;
    if (c.increment < kConvergedIncrement) {
        c.label = "convergent";
    } else if (c.slope >= kDivergingSlope) {
        c.label = "divergent";
    } else {
        c.label = "inconclusive";
    }
    return c;
}

std::string r_label(double r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", r);
    return buf;
}

double lattice_bound(const HyperBox& box) {
    double c = 1.0;
    for (int i = 0; i < box.dim(); ++i) c *= (2.0 / box.length(i)) * (box.length(i) / std::numbers::pi);
    return c;
}

}  // namespace

std::string to_string(Direction d) { return d == Direction::at_most ? "at_most" : "at_least"; }

std::string to_string(Outcome o) {
    switch (o) {
    case Outcome::decided:
        return "decided";
    case Outcome::inconclusive:
        return "inconclusive";
    case Outcome::skipped:
        return "skipped";
    }
    return "decided";
}

void TestReport::decide() {
    if (outcome != Outcome::decided) {
        pass = false;
        return;
    }
    pass = direction == Direction::at_most ? statistic <= threshold : statistic >= threshold;
}

bool all_pass(std::span<const TestReport> reports) {
    return std::none_of(reports.begin(), reports.end(), [](const TestReport& r) { return r.failed(); });
}

// ---------------------------------------------------------------- CF test

std::complex<double> target_cf(const LevyTriplet& triplet, const FunctionDescriptor& f, const HyperBox& box, double u,
                               PsiRoute route) {
    if (auto pc = as_piecewise_constant(f, box)) {
        if (pc->value == 0.0 || pc->volume == 0.0) return 1.0;
        return std::exp(pc->volume * characteristic_exponent(triplet, u * pc->value, route));
    }
    const auto re = integrate_box(
        [&](std::span<const double> x) { return characteristic_exponent(triplet, u * evaluate(f, box, x), route).real(); },
        box, kTargetTolerance);
    if (!re.converged) throw QuadratureError("quadrature for the target characteristic functional did not converge");
    const double im = triplet.drift == 0.0 ? 0.0 : triplet.drift * u * integral(box, f);
    return std::exp(std::complex<double>(re.value, im));
}

TestReport empirical_cf_test(const LevyTriplet& triplet, const FunctionDescriptor& f, const HyperBox& box,
                             std::span<const double> u_grid, std::size_t M, std::uint64_t seed, const CfOptions& options) {
    if (M < kMinCfReplicates) throw DomainError("characteristic functional test needs M >= 1000 replicates");
    if (u_grid.empty()) throw DomainError("u grid is empty");
    const auto integrability = rr_integrability(f, triplet, box);
    if (!integrability.verdict) throw RefusedError("test function is not integrable against this noise");

    const double eps = options.eps >= 0.0 ? options.eps : (infinite_activity(triplet.measure) ? 0.01 : 0.0);
    const EigenSystem system(box, EigenCutoff::by_count(options.K));
    const PairingPlan plan = make_pairing_plan(f, system);
    const int workers = kernels::resolve_workers(options.workers);

    const auto samples = kernels::map_replicates<double>(M, workers, [&](std::size_t m) {
        const auto realization = sample_noise(box, triplet, eps, options.policy, replicate_seed(seed, m));
        return pair(realization, plan);
    });

    TestReport report;
    report.name = "cf";
    report.replicates = M;
    report.seed = seed;
    report.threshold = 4.0 / std::sqrt(static_cast<double>(M));
    std::vector<double> errors, target_re, target_im, emp_re, emp_im;
    for (double u : u_grid) {
        std::complex<double> sum = 0.0;
        for (double x : samples) sum += std::complex<double>(std::cos(u * x), std::sin(u * x));
        const std::complex<double> empirical = sum / static_cast<double>(M);
        const std::complex<double> target = target_cf(triplet, f, box, u, options.route);
        errors.push_back(std::abs(empirical - target));
        target_re.push_back(target.real());
        target_im.push_back(target.imag());
        emp_re.push_back(empirical.real());
        emp_im.push_back(empirical.imag());
    }
    report.statistic = *std::max_element(errors.begin(), errors.end());
    report.decide();
    report.details["direction"] = to_string(report.direction);
    report.details["triplet"] = summarize(triplet);
    report.details["f"] = describe(f);
    report.details["eps"] = eps;
    report.details["policy"] = to_string(options.policy);
    report.details["K"] = static_cast<std::int64_t>(options.K);
    report.details["psi_route"] = std::string(options.route == PsiRoute::closed_form ? "closed-form" : "quadrature");
    report.details["u_grid"] = std::vector<double>(u_grid.begin(), u_grid.end());
    report.details["error"] = errors;
    report.details["target_re"] = target_re;
    report.details["target_im"] = target_im;
    report.details["empirical_re"] = emp_re;
    report.details["empirical_im"] = emp_im;
    return report;
}

// ---------------------------------------------------------- isometry test

TestReport isometry_test(const LevyMeasure& measure, double eps, const FunctionDescriptor& f, const HyperBox& box,
                         std::size_t M, std::uint64_t seed, int workers) {
    validate(measure);
    if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("band lower edge eps must lie in (0, 1]");
    if (M < 2) throw DomainError("isometry test needs at least two replicates");

    TestReport report;
    report.name = "isometry";
    report.replicates = M;
    report.seed = seed;
    report.threshold = 0.05;
    report.details["direction"] = to_string(report.direction);
    report.details["measure"] = to_string(measure);
    report.details["eps"] = eps;
    report.details["f"] = describe(f);

    const double band = small_variance(measure, 1.0) - small_variance(measure, eps);
    const double exact = integral_of_square(f, box) * band;
    report.details["exact_variance"] = exact;
    if (!(exact > 0.0)) {
        report.outcome = Outcome::skipped;
        report.statistic = 0.0;
        report.details["reason"] = std::string("zero exact variance on the band");
        report.decide();
        return report;
    }

    const auto samples = kernels::map_replicates<double>(M, kernels::resolve_workers(workers), [&](std::size_t m) {
        CounterRng rng(derive_key(replicate_seed(seed, m), StreamTag::atoms));
        const auto atoms = sample_prm_large(box, measure, eps, rng);
        double x = 0.0;
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            if (std::abs(atoms.jump(j)) <= 1.0) x += evaluate(f, box, atoms.location(j)) * atoms.jump(j);
        }
        return x;
    });
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(M);
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    const double empirical = ss / static_cast<double>(M - 1);
    report.details["empirical_variance"] = empirical;
    report.details["ratio"] = empirical / exact;
    report.statistic = std::abs(empirical / exact - 1.0);
    report.decide();
    return report;
}

// ------------------------------------------------------ weak identity test

TestReport weak_identity_test(const NoiseRealization& realization, const FunctionDescriptor& phi, double gamma,
                              std::shared_ptr<const EigenSystem> system, bool override_existence) {
    if (!system) throw DomainError("missing eigen system");
    const HyperBox& box = system->box();
    SolveOptions so;
    so.override_existence = override_existence;
    const SpectralField u = solve_mild(realization, gamma, system, so);

    // Tensor Gauss-Legendre with u evaluated on the node grid by sum factorisation.
    const auto panels = weak_panels(*system, phi);
    const int d = box.dim();
    std::vector<std::vector<double>> nodes(d), weights(d);
    for (int i = 0; i < d; ++i) gauss_legendre_axis(box.lower(i), box.upper(i), panels[i], nodes[i], weights[i]);
    const auto values = eval_field_grid(u, nodes);
    std::vector<std::size_t> pos(d, 0);
    std::vector<double> x(d);
    double lhs = 0.0;
    for (std::size_t p = 0; p < values.size(); ++p) {
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            x[i] = nodes[i][pos[i]];
            w *= weights[i][pos[i]];
        }
        lhs += w * values[p] * evaluate(phi, box, x);
        for (int i = d; i-- > 0;) {
            if (++pos[i] < nodes[i].size()) break;
            pos[i] = 0;
        }
    }

    const FunctionDescriptor g_phi = green_convolve(gamma, phi, system);
    const double rhs = pair_with_function(realization, g_phi, *system);

    TestReport report;
    report.name = "weak_identity";
    report.replicates = 1;
    report.seed = realization.seed();
    report.threshold = kWeakIdentityTolerance;
    report.statistic = std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
    report.decide();
    report.details["direction"] = to_string(report.direction);
    report.details["lhs"] = lhs;
    report.details["rhs"] = rhs;
    report.details["gamma"] = gamma;
    report.details["phi"] = describe(phi);
    report.details["K"] = static_cast<std::int64_t>(system->size());
    return report;
}

// --------------------------------------------------------- Sobolev sweeps

SobolevSweep sobolev_sweep(const HyperBox& box, double gamma, const LevyTriplet& triplet, std::span<const double> r_list,
                           std::span<const std::size_t> K_list, std::size_t replicates, std::uint64_t seed,
                           const SweepOptions& options) {
    if (r_list.empty()) throw DomainError("r list is empty");
    if (K_list.size() < 2) throw DomainError("K list needs at least two cutoffs");
    if (!std::is_sorted(K_list.begin(), K_list.end()) || K_list.front() < 1)
        throw DomainError("K list must be positive and increasing");
    const std::size_t k_last = K_list.back();
    const std::size_t k_prev = K_list[K_list.size() - 2];
    if (k_last != 2 * k_prev) throw DomainError("the last two cutoffs in the K list must differ by a factor of 2");
    if (replicates < 1) throw DomainError("at least one replicate is required");
    const auto verdict = existence_verdict(box.dim(), gamma, triplet);
    if (!verdict.exists && !options.override_existence)
        throw RefusedError("no mild solution for this gamma and dimension (" + verdict.reason + ")");

    auto system = std::make_shared<const EigenSystem>(box, EigenCutoff::by_count(k_last));
    const std::size_t nr = r_list.size();
    const std::size_t nk = K_list.size();

    // Each replicate: flattened (r, K) partial sums.
    const auto sums = kernels::map_replicates<std::vector<double>>(
        replicates, kernels::resolve_workers(options.workers), [&](std::size_t i) {
            const auto realization = sample_noise(box, triplet, options.eps, options.policy, replicate_seed(seed, i));
            SolveOptions so;
            so.override_existence = true;
            so.sine_mode = options.sine_mode;
            const SpectralField field = solve_mild(realization, gamma, system, so);
            std::vector<double> out;
            out.reserve(nr * nk);
            for (double r : r_list) {
                const auto partial = sobolev_partial_sums(field, r, K_list);
                out.insert(out.end(), partial.begin(), partial.end());
            }
            return out;
        });

    SobolevSweep sweep;
    sweep.r_list.assign(r_list.begin(), r_list.end());
    sweep.K_list.assign(K_list.begin(), K_list.end());
    for (std::size_t a = 0; a < nr; ++a) {
        std::vector<double> trajectory(nk);
        for (std::size_t j = 0; j < nk; ++j) {
            std::vector<double> column(replicates);
            for (std::size_t i = 0; i < replicates; ++i) column[i] = sums[i][a * nk + j];
            trajectory[j] = median(std::move(column));
        }
        const double r = r_list[a];
        const auto c = classify_trajectory(trajectory[nk - 2], trajectory[nk - 1], 2.0);
        const bool predicted_convergent = r < verdict.r_max;

        TestReport report;
        report.name = "sobolev[r=" + r_label(r) + "]";
        report.replicates = replicates;
        report.seed = seed;
        if (predicted_convergent) {
            report.statistic = c.increment;
            report.threshold = kConvergedIncrement;
            report.direction = Direction::at_most;
        } else {
            report.statistic = c.slope;
            report.threshold = kDivergingSlope;
            report.direction = Direction::at_least;
        }
        if (c.label == "inconclusive") report.outcome = Outcome::inconclusive;
        report.decide();
        if (report.outcome == Outcome::decided) report.pass = c.label == (predicted_convergent ? "convergent" : "divergent");
        report.details["direction"] = to_string(report.direction);
        report.details["r"] = r;
        report.details["r_max"] = verdict.r_max;
        report.details["gamma"] = gamma;
        report.details["d"] = static_cast<std::int64_t>(box.dim());
        report.details["triplet"] = summarize(triplet);
        report.details["eps"] = options.eps;
        report.details["classification"] = c.label;
        report.details["prediction"] = std::string(predicted_convergent ? "convergent" : "divergent");
        report.details["relative_increment"] = c.increment;
        report.details["loglog_slope"] = c.slope;
        report.details["verdict"] = c.label == "inconclusive"
                                        ? std::string("inconclusive")
                                        : "consistent with " + std::string(c.label == "convergent" ? "u in H_r" : "u not in H_r");
        sweep.reports.push_back(std::move(report));
        sweep.trajectories.push_back(std::move(trajectory));
    }
    return sweep;
}

double surrogate_exponent(const EigenSystem& system, double gamma, double r, int blocks) {
    const double lambda1 = system.lambda(0);
    const double top = lambda1 * std::pow(4.0, blocks);
    const double mid = top / 4.0;
    const double low = mid / 4.0;
    const std::size_t n_top = system.prefix_below(top);
    const std::size_t n_mid = system.prefix_below(mid);
    const std::size_t n_low = system.prefix_below(low);
    double last = 0.0, previous = 0.0;
    const double s = r - 2.0 * gamma;
    for (std::size_t i = n_low; i < n_mid; ++i) previous += std::pow(system.lambda(i), s);
    for (std::size_t i = n_mid; i < n_top; ++i) last += std::pow(system.lambda(i), s);
    return std::log(last / previous) / std::log(4.0);
}

SobolevSweep sobolev_surrogate(const HyperBox& box, double gamma, std::span<const double> r_list, int blocks) {
    if (blocks < 2) throw DomainError("surrogate mode needs at least two eigenvalue blocks");
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    double lambda1 = 0.0;
    for (int i = 0; i < box.dim(); ++i) lambda1 += std::pow(std::numbers::pi / box.length(i), 2);
    const EigenSystem system(box, EigenCutoff::by_threshold(lambda1 * std::pow(4.0, blocks)));
    const double r_star = 2.0 * gamma - box.dim() / 2.0;

    SobolevSweep sweep;
    sweep.r_list.assign(r_list.begin(), r_list.end());
    for (int n = 0; n <= blocks; ++n) sweep.K_list.push_back(system.prefix_below(system.lambda(0) * std::pow(4.0, n)));

    SpectralField field{std::make_shared<const EigenSystem>(system), gamma, {}, {}};
    field.coeffs.resize(system.size());
    for (std::size_t i = 0; i < system.size(); ++i) field.coeffs[i] = std::pow(system.lambda(i), -gamma);

    for (double r : r_list) {
        const double e = surrogate_exponent(system, gamma, r, blocks);
        const bool predicted_convergent = r < r_star;
        TestReport report;
        report.name = "sobolev_surrogate[r=" + r_label(r) + "]";
        report.statistic = e;
        report.threshold = -kSurrogateSlack;
        report.direction = predicted_convergent ? Direction::at_most : Direction::at_least;
        report.decide();
        if (predicted_convergent) report.pass = e < -kSurrogateSlack;
        report.details["direction"] = to_string(report.direction);
        report.details["r"] = r;
        report.details["r_max"] = r_star;
        report.details["gamma"] = gamma;
        report.details["d"] = static_cast<std::int64_t>(box.dim());
        report.details["classification"] = std::string(e < -kSurrogateSlack ? "convergent" : "divergent");
        report.details["prediction"] = std::string(predicted_convergent ? "convergent" : "divergent");
        report.details["limit_exponent"] = r - 2.0 * gamma + box.dim() / 2.0;
        sweep.reports.push_back(std::move(report));
        sweep.trajectories.push_back(sobolev_partial_sums(field, r, sweep.K_list));
    }

    // Root of the growth exponent by bisection; e is increasing in r.
    double lo = r_star - 1.0, hi = r_star + 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (surrogate_exponent(system, gamma, mid, blocks) < 0.0 ? lo : hi) = mid;
    }
    const double r_hat = 0.5 * (lo + hi);
    TestReport boundary;
    boundary.name = "sobolev_surrogate_boundary";
    boundary.statistic = std::abs(r_hat - r_star);
    boundary.threshold = kSurrogateBoundaryTolerance;
    boundary.decide();
    boundary.details["direction"] = to_string(boundary.direction);
    boundary.details["r_hat"] = r_hat;
    boundary.details["r_max"] = r_star;
    boundary.details["gamma"] = gamma;
    boundary.details["d"] = static_cast<std::int64_t>(box.dim());
    boundary.details["blocks"] = static_cast<std::int64_t>(blocks);
    sweep.reports.push_back(std::move(boundary));
    return sweep;
}

// -------------------------------------------------------- continuity probe

ContinuityProbe continuity_probe(const HyperBox& box, double gamma, const LevyTriplet& triplet,
                                 std::span<const int> grid_levels, std::size_t replicates, std::uint64_t seed,
                                 const SweepOptions& options) {
    if (grid_levels.size() < 2) throw DomainError("continuity probe needs at least two grid levels");
    for (std::size_t i = 0; i < grid_levels.size(); ++i) {
        if (grid_levels[i] < 1 || grid_levels[i] > 12) throw DomainError("grid levels must lie in 1..12");
        if (i > 0 && grid_levels[i] <= grid_levels[i - 1]) throw DomainError("grid levels must be increasing");
    }
    if (replicates < 1) throw DomainError("at least one replicate is required");
    const auto verdict = existence_verdict(box.dim(), gamma, triplet);
    if (!verdict.exists && !options.override_existence)
        throw RefusedError("no mild solution for this gamma and dimension (" + verdict.reason + ")");

    const int d = box.dim();
    double min_length = box.length(0);
    for (int i = 1; i < d; ++i) min_length = std::min(min_length, box.length(i));
    auto level_threshold = [&](int level) {
        const double w = std::numbers::pi * std::ldexp(1.0, level) / min_length;
        return w * w;
    };
    auto system = std::make_shared<const EigenSystem>(box, EigenCutoff::by_threshold(level_threshold(grid_levels.back())));
    const std::size_t nl = grid_levels.size();
    std::vector<std::size_t> modes(nl);
    std::vector<std::vector<std::vector<double>>> grids(nl);
    for (std::size_t l = 0; l < nl; ++l) {
        modes[l] = system->prefix_below(level_threshold(grid_levels[l]));
        grids[l] = uniform_grid(box, 1 << grid_levels[l]);
    }

    // Per replicate: (increment, sup) for each level.
    const auto stats = kernels::map_replicates<std::vector<double>>(
        replicates, kernels::resolve_workers(options.workers), [&](std::size_t i) {
            const auto realization = sample_noise(box, triplet, options.eps, options.policy, replicate_seed(seed, i));
            SolveOptions so;
            so.override_existence = true;
            so.sine_mode = options.sine_mode;
            const SpectralField field = solve_mild(realization, gamma, system, so);
            std::vector<double> out;
            for (std::size_t l = 0; l < nl; ++l) {
                const auto& grid = grids[l];
                const auto values = kernels::eval_grid_serial(*system, std::span<const double>(field.coeffs).first(modes[l]), grid);
                const std::size_t n = grid[0].size();
                double sup = 0.0, inc = 0.0;
                std::size_t stride = 1;
                std::vector<std::size_t> strides(d);
                for (int a = d; a-- > 0;) {
                    strides[a] = stride;
                    stride *= n;
                }
                for (std::size_t p = 0; p < values.size(); ++p) {
                    sup = std::max(sup, std::abs(values[p]));
                    for (int a = 0; a < d; ++a) {
                        if ((p / strides[a]) % n + 1 < n) inc = std::max(inc, std::abs(values[p + strides[a]] - values[p]));
                    }
                }
                out.push_back(inc);
                out.push_back(sup);
            }
            return out;
        });

    std::size_t continuous = 0, blowup = 0;
    for (const auto& s : stats) {
        const double inc_last = s[2 * (nl - 1)];
        const double inc_prev = s[2 * (nl - 2)];
        if (inc_last < inc_prev || (inc_last == 0.0 && inc_prev == 0.0)) ++continuous;
        bool grows = true;
        for (std::size_t l = 1; l < nl; ++l) {
            if (!(s[2 * l + 1] >= (1.0 + kSupGrowth) * s[2 * l - 1])) grows = false;
        }
        if (grows) ++blowup;
    }
    const double n = static_cast<double>(replicates);
    const double f_cont = continuous / n;
    const double f_blow = blowup / n;
    std::string label = "inconclusive";
    if (f_cont >= kClassFraction && f_blow < kClassFraction) label = "continuous-consistent";
    if (f_blow >= kClassFraction && f_cont < kClassFraction) label = "blowup-consistent";
    const bool predicted_continuous = verdict.continuous;

    ContinuityProbe probe;
    for (std::size_t l = 0; l < nl; ++l) {
        std::vector<double> incs(replicates), sups(replicates);
        for (std::size_t i = 0; i < replicates; ++i) {
            incs[i] = stats[i][2 * l];
            sups[i] = stats[i][2 * l + 1];
        }
        probe.levels.push_back({grid_levels[l], modes[l], median(std::move(incs)), median(std::move(sups))});
    }
    TestReport& report = probe.report;
    report.name = "continuity";
    report.replicates = replicates;
    report.seed = seed;
    report.statistic = predicted_continuous ? f_cont : f_blow;
    report.threshold = kClassFraction;
    report.direction = Direction::at_least;
    if (label == "inconclusive") report.outcome = Outcome::inconclusive;
    report.decide();
    if (report.outcome == Outcome::decided)
        report.pass = label == (predicted_continuous ? "continuous-consistent" : "blowup-consistent");
    report.details["direction"] = to_string(report.direction);
    report.details["d"] = static_cast<std::int64_t>(d);
    report.details["gamma"] = gamma;
    report.details["triplet"] = summarize(triplet);
    report.details["eps"] = options.eps;
    report.details["continuous_fraction"] = f_cont;
    report.details["blowup_fraction"] = f_blow;
    report.details["classification"] = label;
    report.details["prediction"] = std::string(predicted_continuous ? "continuous-consistent" : "blowup-consistent");
    report.details["verdict"] = label == "inconclusive" ? std::string("inconclusive")
                                                        : "consistent with " + std::string(label == "continuous-consistent"
                                                                                               ? "a continuous version"
                                                                                               : "an unbounded field");
    return probe;
}

// ---------------------------------------------------- spectral bound check

double spectral_density(const EigenSystem& system, double t, std::span<const double> x) {
    const std::size_t n = system.prefix_below(t);
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = eigenfunction_eval(system.box(), system.index(i), x);
        v += e * e;
    }
    return v;
}

std::vector<double> default_sample_points(const HyperBox& box, std::size_t n) {
    static constexpr unsigned primes[] = {2, 3, 5, 7, 11, 13};
    const int d = box.dim();
    std::vector<double> pts;
    pts.reserve(n * static_cast<std::size_t>(d));
    for (std::size_t j = 0; j < n; ++j) {
        for (int a = 0; a < d; ++a) pts.push_back(box.lower(a) + box.length(a) * halton_coordinate(j + 1, primes[a]));
    }
    return pts;
}

TestReport spectral_bound_check(const HyperBox& box, std::span<const double> t_list, std::span<const double> x_sample) {
    if (t_list.empty()) throw DomainError("t list is empty");
    for (std::size_t i = 0; i < t_list.size(); ++i) {
        if (!(t_list[i] > 0.0)) throw DomainError("t values must be positive");
        if (i > 0 && !(t_list[i] > t_list[i - 1])) throw DomainError("t list must be increasing");
    }
    const auto d = static_cast<std::size_t>(box.dim());
    if (x_sample.empty() || x_sample.size() % d != 0) throw DomainError("sample points do not match the dimension");
    for (std::size_t p = 0; p < x_sample.size(); p += d) box.require_contains(x_sample.subspan(p, d));

    TestReport report;
    report.name = "spectral_bound";
    report.threshold = lattice_bound(box);
    double t_max = t_list.back();
    double lambda1 = 0.0;
    for (std::size_t a = 0; a < d; ++a) lambda1 += std::pow(std::numbers::pi / box.length(static_cast<int>(a)), 2);
    std::vector<double> ratios;
    report.statistic = 0.0;
    if (t_max >= lambda1) {
        const EigenSystem system(box, EigenCutoff::by_threshold(t_max));
        for (double t : t_list) {
            double best = 0.0;
            for (std::size_t p = 0; p < x_sample.size(); p += d) {
                best = std::max(best, spectral_density(system, t, x_sample.subspan(p, d)) / std::pow(t, d / 2.0));
            }
            ratios.push_back(best);
        }
    } else {
        ratios.assign(t_list.size(), 0.0);
    }
    report.statistic = *std::max_element(ratios.begin(), ratios.end());

    // Least-squares slope of log ratio against log t over the positive ratios.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < t_list.size(); ++i) {
        if (!(ratios[i] > 0.0)) continue;
        const double lx = std::log(t_list[i]);
        const double ly = std::log(ratios[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++used;
    }
    double slope = 0.0;
    if (used >= 2) {
        const double nu = static_cast<double>(used);
        slope = (nu * sxy - sx * sy) / (nu * sxx - sx * sx);
    }
    report.decide();
    report.pass = report.pass && std::abs(slope) <= kSpectralSlopeBand;
    report.details["direction"] = to_string(report.direction);
    report.details["loglog_slope"] = slope;
    report.details["slope_band"] = kSpectralSlopeBand;
    report.details["points_in_fit"] = static_cast<std::int64_t>(used);
    report.details["t_list"] = std::vector<double>(t_list.begin(), t_list.end());
    report.details["max_ratio"] = ratios;
    return report;
}

}  // namespace levy_elliptic
