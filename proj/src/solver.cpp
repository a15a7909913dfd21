#include "levy_elliptic/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "levy_elliptic/csv.hpp"
#include "levy_elliptic/error.hpp"
#include "levy_elliptic/integrability.hpp"

namespace levy_elliptic {

std::string to_string(const Provenance& p) {
    switch (p.kind) {
    case Provenance::Kind::manual:
        return "manual";
    case Provenance::Kind::solved_from_noise:
        return "solved-from-noise(" + std::to_string(p.seed) + ")";
    case Provenance::Kind::torsion:
        return "torsion";
    case Provenance::Kind::green_convolution:
        return "green-convolution";
    }
    return "manual";
}

void validate(const SpectralField& field) {
    if (!field.system) throw DomainError("field has no eigen system");
    if (field.coeffs.size() != field.system->size()) throw DomainError("field coefficients do not match the eigen system");
    if (!(field.gamma > 0.0)) throw DomainError("field gamma must be positive");
}

GreenValue green_gamma_eval(const HyperBox& box, double gamma, std::span<const double> x, std::span<const double> y,
                            const EigenSystem& system) {
    if (!(box == system.box())) throw DomainError("eigen system belongs to a different box");
    box.require_contains(x);
    box.require_contains(y);
    GreenValue g;
    for (std::size_t i = 0; i < system.size(); ++i) {
        const auto k = system.index(i);
        g.value += eigenfunction_eval(box, k, x) * eigenfunction_eval(box, k, y) / std::pow(system.lambda(i), gamma);
    }
    double sup = 1.0;
    for (int i = 0; i < box.dim(); ++i) sup *= 2.0 / box.length(i);
    g.tail_estimate = sup * weyl_tail_estimate(box, system.max_lambda(), gamma);
    return g;
}

double green_interval_closed_form(double a, double b, double x, double y) {
    const double lo = std::min(x, y);
    const double hi = std::max(x, y);
    return (lo - a) * (b - hi) / (b - a);
}

double green2_interval_closed_form(double a, double b, double x, double y) {
    // Rescale to (0,1): G_2 scales by L^3.
    const double L = b - a;
    const double s = (std::min(x, y) - a) / L;
    const double t = (std::max(x, y) - a) / L;
    return L * L * L * s * (1.0 - t) * (2.0 * t - s * s - t * t) / 6.0;
}

SpectralField solve_mild(const NoiseRealization& realization, double gamma, std::shared_ptr<const EigenSystem> system,
                         const SolveOptions& options) {
    if (!system) throw DomainError("missing eigen system");
    const auto verdict = existence_verdict(system->dim(), gamma, realization.triplet());
    if (!verdict.exists && !options.override_existence) {
        throw RefusedError("no mild solution for gamma = " + fmt17(gamma) + " in dimension " + std::to_string(system->dim()) +
                           " (" + verdict.reason + "); pass an override to sample the divergent series");
    }
    auto c = pair_eigen(realization, *system, options.workers, options.sine_mode);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] /= std::pow(system->lambda(i), gamma);
    return SpectralField{std::move(system), gamma, std::move(c), {Provenance::Kind::solved_from_noise, realization.seed()}};
}

std::vector<double> eval_field(const SpectralField& field, std::span<const double> points, int workers) {
    validate(field);
    const auto d = static_cast<std::size_t>(field.system->dim());
    if (points.size() % d != 0) throw DomainError("point array length is not a multiple of the dimension");
    for (std::size_t p = 0; p < points.size(); p += d) field.box().require_contains(points.subspan(p, d));
    if (workers > 1) return kernels::eval_points_parallel(*field.system, field.coeffs, points, workers);
    return kernels::eval_points_serial(*field.system, field.coeffs, points);
}

std::vector<double> eval_field_grid(const SpectralField& field, const std::vector<std::vector<double>>& axis_points,
                                    int workers) {
    validate(field);
    const HyperBox& box = field.box();
    if (static_cast<int>(axis_points.size()) != box.dim()) throw DomainError("grid dimension does not match box");
    for (int i = 0; i < box.dim(); ++i) {
        for (double v : axis_points[i])
            if (!(v >= box.lower(i) && v <= box.upper(i))) throw DomainError("grid point outside the box");
    }
    if (workers > 1) return kernels::eval_grid_parallel(*field.system, field.coeffs, axis_points, workers);
    return kernels::eval_grid_serial(*field.system, field.coeffs, axis_points);
}

SobolevNorm sobolev_norm(const SpectralField& field, double r) {
    validate(field);
    SobolevNorm out;
    const std::size_t n = field.coeffs.size();
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = field.coeffs[i];
        if (a == 0.0) continue;
        const double term = std::pow(field.system->lambda(i), r) * a * a;
        out.squared += term;
        if (i >= half) out.last_dyadic_increment += term;
    }
    return out;
}

std::vector<double> sobolev_partial_sums(const SpectralField& field, double r, std::span<const std::size_t> counts) {
    validate(field);
    if (!std::is_sorted(counts.begin(), counts.end())) throw DomainError("partial-sum counts must be increasing");
    if (!counts.empty() && counts.back() > field.coeffs.size()) throw DomainError("partial-sum count exceeds field size");
    std::vector<double> out;
    out.reserve(counts.size());
    double sum = 0.0;
    std::size_t i = 0;
    for (std::size_t n : counts) {
        for (; i < n; ++i) {
            const double a = field.coeffs[i];
            if (a != 0.0) sum += std::pow(field.system->lambda(i), r) * a * a;
        }
        out.push_back(sum);
    }
    return out;
}

SpectralField torsion_solution(std::shared_ptr<const EigenSystem> system) {
    auto field = green_convolve_field(1.0, ConstantFn{1.0}, std::move(system));
    field.provenance = {Provenance::Kind::torsion, 0};
    return field;
}

SpectralField green_convolve_field(double gamma, const FunctionDescriptor& phi, std::shared_ptr<const EigenSystem> system) {
    if (!system) throw DomainError("missing eigen system");
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    std::vector<double> c(system->size(), 0.0);
    if (const auto* e = std::get_if<EigenFn>(&phi)) {
        const std::size_t pos = system->find(e->k);
        if (pos < c.size()) c[pos] = e->scale / std::pow(system->lambda(pos), gamma);
    } else {
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double f = fourier_coeff(system->box(), system->index(i), phi);
            if (f != 0.0) c[i] = f / std::pow(system->lambda(i), gamma);
        }
    }
    return SpectralField{std::move(system), gamma, std::move(c), {Provenance::Kind::green_convolution, 0}};
}

FunctionDescriptor green_convolve(double gamma, const FunctionDescriptor& phi, std::shared_ptr<const EigenSystem> system) {
    auto field = green_convolve_field(gamma, phi, std::move(system));
    return SeriesFn{field.system, std::move(field.coeffs)};
}

void write_coeffs_csv(std::ostream& os, const SpectralField& field) {
    validate(field);
    const int d = field.system->dim();
    os << "ordinal";
    for (int i = 1; i <= d; ++i) os << ",k_" << i;
    os << ",lambda,a_k\n";
    for (std::size_t e = 0; e < field.coeffs.size(); ++e) {
        os << (e + 1);
        for (int v : field.system->index(e)) os << ',' << v;
        os << ',' << fmt17(field.system->lambda(e)) << ',' << fmt17(field.coeffs[e]) << '\n';
    }
}

void write_grid_csv(std::ostream& os, const std::vector<std::vector<double>>& axis_points, std::span<const double> values) {
    const std::size_t d = axis_points.size();
    std::size_t total = 1;
    for (const auto& a : axis_points) total *= a.size();
    if (values.size() != total) throw DomainError("grid values do not match the grid size");
    for (std::size_t i = 1; i <= d; ++i) os << "x_" << i << ',';
    os << "value\n";
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t p = 0; p < total; ++p) {
        for (std::size_t i = 0; i < d; ++i) os << fmt17(axis_points[i][idx[i]]) << ',';
        os << fmt17(values[p]) << '\n';
        for (std::size_t i = d; i-- > 0;) {
            if (++idx[i] < axis_points[i].size()) break;
            idx[i] = 0;
        }
    }
}

std::vector<std::vector<double>> uniform_grid(const HyperBox& box, int intervals) {
    if (intervals < 1) throw DomainError("grid needs at least one interval per axis");
    std::vector<std::vector<double>> grid(static_cast<std::size_t>(box.dim()));
    for (int i = 0; i < box.dim(); ++i) {
        auto& g = grid[i];
        g.resize(static_cast<std::size_t>(intervals) + 1);
        const double h = box.length(i) / intervals;
        for (int j = 0; j <= intervals; ++j) g[j] = box.lower(i) + h * j;
        g.back() = box.upper(i);
    }
    return grid;
}

}  // namespace levy_elliptic
