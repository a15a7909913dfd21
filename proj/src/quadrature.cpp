#include "levy_elliptic/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <array>
#include <cmath>

#include "levy_elliptic/error.hpp"

namespace levy_elliptic {

namespace {

constexpr int kOrder = 16;

struct ReferenceRule {
    std::array<double, kOrder> nodes{};
    std::array<double, kOrder> weights{};
};

const ReferenceRule& reference_rule() {
    static const ReferenceRule rule = [] {
        using Gauss = boost::math::quadrature::gauss<double, kOrder>;
        ReferenceRule r;
        const auto& x = Gauss::abscissa();
        const auto& w = Gauss::weights();
        const int half = kOrder / 2;
        for (int i = 0; i < half; ++i) {
            // Mirror the non-negative half onto [-1, 1] in increasing order.
            r.nodes[half - 1 - i] = -x[i];
            r.weights[half - 1 - i] = w[i];
            r.nodes[half + i] = x[i];
            r.weights[half + i] = w[i];
        }
        return r;
    }();
    return rule;
}

double radical_inverse(std::size_t n, unsigned base) {
    double inv = 1.0 / base;
    double factor = inv;
    double value = 0.0;
    while (n > 0) {
        value += factor * static_cast<double>(n % base);
        n /= base;
        factor *= inv;
    }
    return value;
}

}  // namespace

void gauss_legendre_axis(double a, double b, int panels, std::vector<double>& nodes, std::vector<double>& weights) {
    const auto& ref = reference_rule();
    nodes.clear();
    weights.clear();
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double left = a + p * h;
        for (int i = 0; i < kOrder; ++i) {
            nodes.push_back(left + 0.5 * h * (ref.nodes[i] + 1.0));
            weights.push_back(0.5 * h * ref.weights[i]);
        }
    }
}

double halton_coordinate(std::size_t n, unsigned base) { return radical_inverse(n, base); }

double tensor_gauss_legendre(const Integrand& f, const HyperBox& box, std::span<const int> panels) {
    const int d = box.dim();
    std::vector<std::vector<double>> nodes(d), weights(d);
    for (int i = 0; i < d; ++i) gauss_legendre_axis(box.lower(i), box.upper(i), std::max(1, panels[i]), nodes[i], weights[i]);

    std::vector<std::size_t> pos(d, 0);
    std::vector<double> x(d);
    double total = 0.0;
    for (;;) {
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            x[i] = nodes[i][pos[i]];
            w *= weights[i][pos[i]];
        }
        total += w * f(x);
        int axis = d - 1;
        while (axis >= 0 && ++pos[axis] == nodes[axis].size()) {
            pos[axis] = 0;
            --axis;
        }
        if (axis < 0) break;
    }
    return total;
}

QuadratureResult adaptive_tensor_quadrature(const Integrand& f, const HyperBox& box, double tol,
                                            std::vector<int> initial_panels, std::size_t max_evaluations) {
    const int d = box.dim();
    if (initial_panels.empty()) initial_panels.assign(d, 1);
    auto cost = [&](const std::vector<int>& p) {
        double n = 1.0;
        for (int v : p) n *= static_cast<double>(kOrder) * v;
        return n;
    };

    QuadratureResult result;
    std::vector<int> panels = initial_panels;
    double previous = tensor_gauss_legendre(f, box, panels);
    result.evaluations = static_cast<std::size_t>(cost(panels));
    for (;;) {
        std::vector<int> refined = panels;
        for (int& p : refined) p *= 2;
        if (result.evaluations + cost(refined) > static_cast<double>(max_evaluations)) {
            result.value = previous;
            result.error_estimate = std::numeric_limits<double>::infinity();
            result.converged = false;
            return result;
        }
        const double current = tensor_gauss_legendre(f, box, refined);
        result.evaluations += static_cast<std::size_t>(cost(refined));
        const double diff = std::abs(current - previous);
        if (diff <= tol * std::max(1.0, std::abs(current))) {
            result.value = current;
            result.error_estimate = diff;
            result.converged = true;
            return result;
        }
        previous = current;
        panels = refined;
    }
}

QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b, double tol) {
    boost::math::quadrature::tanh_sinh<double> rule;
    QuadratureResult result;
    double error = 0.0;
    double l1 = 0.0;
    std::size_t levels = 0;
    result.value = rule.integrate(f, a, b, tol, &error, &l1, &levels);
    result.error_estimate = error * std::max(1.0, l1);
    result.converged = std::isfinite(result.value) && error <= std::max(tol, 1e-14) * 10.0;
    return result;
}

double halton_integral(const Integrand& f, const HyperBox& box, std::size_t n) {
    static constexpr std::array<unsigned, kMaxDimension> primes{2, 3, 5, 7, 11, 13};
    const int d = box.dim();
    std::vector<double> x(d);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (int a = 0; a < d; ++a) x[a] = box.lower(a) + box.length(a) * radical_inverse(i + 20, primes[a]);
        sum += f(x);
    }
    return box.volume() * sum / static_cast<double>(n);
}

QuadratureResult integrate_box(const Integrand& f, const HyperBox& box, double tol, std::vector<int> initial_panels) {
    if (box.dim() <= 3) return adaptive_tensor_quadrature(f, box, tol, std::move(initial_panels));
    QuadratureResult r;
    const double coarse = halton_integral(f, box, 1u << 13);
    r.value = halton_integral(f, box, 1u << 14);
    r.error_estimate = std::abs(r.value - coarse);
    r.converged = r.error_estimate <= tol * std::max(1.0, std::abs(r.value));
    r.evaluations = (1u << 13) + (1u << 14);
    return r;
}

}  // namespace levy_elliptic
