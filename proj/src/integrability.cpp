#include "levy_elliptic/integrability.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "levy_elliptic/error.hpp"
#include "levy_elliptic/quadrature.hpp"

namespace levy_elliptic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct NumericIntegral {
    double value = 0.0;
    bool converged = true;
};

std::vector<int> initial_panels(const FunctionDescriptor& f, const HyperBox& box) {
    std::vector<int> panels(static_cast<std::size_t>(box.dim()), 1);
    const EigenSystem* sys = nullptr;
    if (const auto* s = std::get_if<SeriesFn>(&f)) sys = s->system.get();
    if (const auto* g = std::get_if<GreenFn>(&f)) sys = g->system.get();
    if (const auto* e = std::get_if<EigenFn>(&f)) {
        for (int i = 0; i < box.dim(); ++i) panels[i] = std::max(1, (e->k[i] + 3) / 4);
    }
    if (sys != nullptr) {
        for (int i = 0; i < box.dim(); ++i) panels[i] = std::max(1, std::min(64, (sys->max_index()[i] + 3) / 4));
    }
    return panels;
}

// \int_D h(|f(x)|) dx for a non-negative h with h(0) = 0.
template <class H>
NumericIntegral integrate_transformed(const FunctionDescriptor& f, const HyperBox& box, H h, double tol) {
    if (const auto* p = std::get_if<AxisPowerFn>(&f)) {
        double other = 1.0;
        for (int i = 0; i < box.dim(); ++i)
            if (i != p->axis) other *= box.length(i);
        const double scale = std::abs(p->scale);
        const auto r = integrate_1d([&](double t) { return t > 0.0 ? h(scale * std::pow(t, p->exponent)) : 0.0; }, 0.0,
                                    box.length(p->axis), tol);
        return {other * r.value, r.converged};
    }
    if (const auto* g = std::get_if<GreenFn>(&f); g != nullptr && box.dim() == 1 && g->gamma == 1.0) {
        auto one_d = [&](double x) {
            const std::array<double, 1> pt{x};
            return h(std::abs(evaluate(f, box, pt)));
        };
        const double p = g->pole[0];
        NumericIntegral out{0.0, true};
        if (p > box.lower(0)) {
            const auto r = integrate_1d(one_d, box.lower(0), p, tol);
            out.value += r.value;
            out.converged = out.converged && r.converged;
        }
        if (p < box.upper(0)) {
            const auto r = integrate_1d(one_d, p, box.upper(0), tol);
            out.value += r.value;
            out.converged = out.converged && r.converged;
        }
        return out;
    }
    const auto r = integrate_box([&](std::span<const double> x) { return h(std::abs(evaluate(f, box, x))); }, box, tol,
                                 initial_panels(f, box));
    return {r.value, r.converged};
}

}  // namespace

double truncated_second_moment(const LevyMeasure& measure, double c) {
    c = std::abs(c);
    if (c == 0.0) return 0.0;
    if (std::isinf(c)) return tail_mass(measure, 0.0);
    const double cut = 1.0 / c;
    return c * c * small_variance(measure, cut) + tail_mass(measure, cut);
}

IntegrabilityReport rr_integrability(const FunctionDescriptor& f, const LevyTriplet& triplet, const HyperBox& box) {
    validate(triplet);
    const SingularityProfile profile = singularity(f, box);
    IntegrabilityReport report;

    if (triplet.drift != 0.0) {
        if (!power_integrable(profile, 1.0)) {
            report.drift_integral = kInf;
        } else {
            const auto r = integrate_transformed(f, box, [](double a) { return a; }, kDriftGaussTolerance);
            report.drift_integral = std::abs(triplet.drift) * r.value;
            report.converged = report.converged && r.converged;
        }
    }
    if (triplet.sigma != 0.0) {
        if (!power_integrable(profile, 2.0)) {
            report.gauss_integral = kInf;
        } else {
            const auto r = integrate_transformed(f, box, [](double a) { return a * a; }, kDriftGaussTolerance);
            report.gauss_integral = triplet.sigma * triplet.sigma * r.value;
            report.converged = report.converged && r.converged;
        }
    }
    if (const auto* s = std::get_if<AlphaStable>(&triplet.measure)) {
        // Scaling: \int (|c z|^2 ^ 1) nu_alpha(dz) = |c|^alpha * 2/(2 - alpha).
        if (!power_integrable(profile, s->alpha)) {
            report.jump_integral = kInf;
        } else {
            const double alpha = s->alpha;
            const auto r = integrate_transformed(f, box, [alpha](double a) { return std::pow(a, alpha); }, kJumpTolerance);
            report.jump_integral = 2.0 / (2.0 - alpha) * r.value;
            report.converged = report.converged && r.converged;
        }
    } else if (!is_null(triplet.measure)) {
        // Two-point and variance-gamma: the inner integral grows at most
        // logarithmically in |f|, so power singularities stay integrable.
        const auto& m = triplet.measure;
        const auto r = integrate_transformed(f, box, [&m](double a) { return truncated_second_moment(m, a); }, kJumpTolerance);
        report.jump_integral = r.value;
        report.converged = report.converged && r.converged;
    }
    report.verdict = std::isfinite(report.drift_integral) && std::isfinite(report.gauss_integral) &&
                     std::isfinite(report.jump_integral);
    return report;
}

std::string to_string(OperatorMode mode) { return mode == OperatorMode::spectral ? "spectral" : "laplacian-green-bound"; }

OperatorMode parse_operator_mode(const std::string& text) {
    if (text == "spectral") return OperatorMode::spectral;
    if (text == "laplacian-green-bound" || text == "laplacian") return OperatorMode::laplacian_green_bound;
    throw DomainError("operator mode must be 'spectral' or 'laplacian-green-bound'");
}

double moment_order_infimum(const LevyMeasure& measure) {
    if (const auto* s = std::get_if<AlphaStable>(&measure)) return s->alpha;
    return 0.0;
}

std::string summarize(const LevyTriplet& triplet) {
    std::ostringstream os;
    os.precision(17);
    os << "b=" << triplet.drift << ";sigma=" << triplet.sigma << ";nu=" << to_string(triplet.measure);
    return os.str();
}

ExistenceVerdict existence_verdict(int d, double gamma, const LevyTriplet& triplet, OperatorMode mode) {
    if (d < 1) throw DomainError("dimension must be at least 1");
    if (mode == OperatorMode::laplacian_green_bound) gamma = 1.0;
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be positive and finite");
    validate(triplet);

    ExistenceVerdict v;
    v.d = d;
    v.gamma = gamma;
    v.mode = mode;
    v.triplet_summary = summarize(triplet);
    const double half_d = d / 2.0;
    v.r_max = 2.0 * gamma - half_d;

    if (mode == OperatorMode::spectral) {
        v.exists = gamma > d / 4.0;
        v.p_lo = v.p_hi = 2.0;
        v.reason = v.exists ? "gamma > d/4" : "gamma <= d/4";
    } else if (d <= 3) {
        v.exists = std::isfinite(p_moment_small(triplet.measure, 2.0));
        v.p_lo = v.p_hi = 2.0;
        v.reason = "d <= 3: finite second small-jump moment";
    } else {
        const double p_cap = d / (d - 2.0);
        const double p_inf = moment_order_infimum(triplet.measure);
        v.p_lo = p_inf;
        v.p_hi = p_cap;
        if (triplet.sigma != 0.0) {
            v.exists = false;
            v.reason = "d >= 4 requires sigma = 0";
        } else {
            v.exists = p_inf < p_cap;
            v.reason = v.exists ? "finite p-moment for some p < d/(d-2)" : "no finite p-moment with p < d/(d-2)";
        }
    }
    v.continuous = v.exists && gamma > half_d;
    return v;
}

}  // namespace levy_elliptic
