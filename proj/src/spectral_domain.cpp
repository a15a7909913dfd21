#include "levy_elliptic/spectral_domain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "levy_elliptic/csv.hpp"
#include "levy_elliptic/error.hpp"

namespace levy_elliptic {

namespace {

constexpr double kPi = std::numbers::pi;

double with_slack(double t) { return t * (1.0 + kThresholdSlack); }

// Recursive lattice walk over k_axis >= 1 with lambda <= limit. `partial` is the
// contribution of the axes already fixed, `rest_min` the minimum contribution
// of the axes still to come.
template <class Visit>
void walk_lattice(const HyperBox& box, double limit, int axis, double partial, std::array<int, kMaxDimension>& k,
                  const std::vector<double>& rest_min, Visit&& visit) {
    const double w = (kPi / box.length(axis)) * (kPi / box.length(axis));
    for (int ki = 1;; ++ki) {
        const double contribution = w * static_cast<double>(ki) * static_cast<double>(ki);
        if (partial + contribution + rest_min[axis + 1] > limit) break;
        k[axis] = ki;
        if (axis + 1 == box.dim()) {
            visit(k);
        } else {
            walk_lattice(box, limit, axis + 1, partial + contribution, k, rest_min, visit);
        }
    }
}

std::vector<double> rest_minimum(const HyperBox& box) {
    std::vector<double> rest(box.dim() + 1, 0.0);
    for (int i = box.dim() - 1; i >= 0; --i) {
        rest[i] = rest[i + 1] + (kPi / box.length(i)) * (kPi / box.length(i));
    }
    return rest;
}

}  // namespace

std::string fmt17(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

HyperBox HyperBox::unit(int dim) {
    return HyperBox(std::vector<std::pair<double, double>>(static_cast<std::size_t>(std::max(dim, 0)), {0.0, 1.0}));
}

HyperBox::HyperBox(std::vector<std::pair<double, double>> intervals) {
    if (intervals.empty()) throw DomainError("box dimension must be at least 1");
    if (intervals.size() > static_cast<std::size_t>(kMaxDimension))
        throw DomainError("box dimension exceeds " + std::to_string(kMaxDimension));
    for (const auto& [a, b] : intervals) {
        if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) throw DomainError("box intervals need finite a < b");
        lower_.push_back(a);
        upper_.push_back(b);
    }
}

double HyperBox::volume() const noexcept {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= length(i);
    return v;
}

bool HyperBox::contains(std::span<const double> x) const noexcept {
    if (x.size() != lower_.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) return false;
    }
    return true;
}

void HyperBox::require_contains(std::span<const double> x) const {
    if (x.size() != lower_.size()) throw DomainError("point dimension does not match box dimension");
    if (!contains(x)) throw DomainError("point lies outside the closed box");
}

bool HyperBox::on_boundary(std::span<const double> x) const noexcept {
    for (std::size_t i = 0; i < x.size() && i < lower_.size(); ++i) {
        if (x[i] == lower_[i] || x[i] == upper_[i]) return true;
    }
    return false;
}

Point HyperBox::center() const {
    Point c(lower_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (lower_[i] + upper_[i]);
    return c;
}

double eigenvalue(const HyperBox& box, std::span<const int> k) {
    const int d = box.dim();
    if (static_cast<int>(k.size()) != d) throw DomainError("multi-index dimension does not match box");
    std::array<bool, kMaxDimension> used{};
    double lambda = 0.0;
    for (int i = 0; i < d; ++i) {
        if (k[i] < 1) throw DomainError("multi-index components must be >= 1");
        if (used[i]) continue;
        std::int64_t squares = 0;
        for (int j = i; j < d; ++j) {
            if (!used[j] && box.length(j) == box.length(i)) {
                used[j] = true;
                squares += static_cast<std::int64_t>(k[j]) * k[j];
            }
        }
        const double w = (kPi / box.length(i)) * (kPi / box.length(i));
        lambda += w * static_cast<double>(squares);
    }
    return lambda;
}

double axis_sine(const HyperBox& box, int axis, int k, double x) {
    if (x == box.lower(axis) || x == box.upper(axis)) return 0.0;
    const double len = box.length(axis);
    const double t = (x - box.lower(axis)) / len;
    return std::sqrt(2.0 / len) * std::sin(kPi * static_cast<double>(k) * t);
}

double eigenfunction_eval(const HyperBox& box, std::span<const int> k, std::span<const double> x) {
    if (static_cast<int>(k.size()) != box.dim()) throw DomainError("multi-index dimension does not match box");
    box.require_contains(x);
    double value = 1.0;
    for (int i = 0; i < box.dim(); ++i) {
        if (k[i] < 1) throw DomainError("multi-index components must be >= 1");
        value *= axis_sine(box, i, k[i], x[i]);
    }
    return value;
}

EigenSystem::EigenSystem(HyperBox box, EigenCutoff cutoff) : box_(std::move(box)), cutoff_(cutoff) {
    const int d = box_.dim();
    const double lambda_min = rest_minimum(box_)[0];

    double limit = 0.0;
    if (cutoff.kind == EigenCutoff::Kind::threshold) {
        if (!std::isfinite(cutoff.threshold)) throw DomainError("eigen threshold must be finite");
        if (with_slack(cutoff.threshold) < lambda_min) throw RefusedError("eigen threshold lies below the first eigenvalue: empty system");
        limit = cutoff.threshold;
    } else {
        if (cutoff.count < 1) throw DomainError("eigen count must be at least 1");
        // Grow a threshold from the Weyl estimate until it covers `count` entries.
        double t = lambda_min;
        while (weyl_leading_term(box_, t) < 1.2 * static_cast<double>(cutoff.count) + 16.0) t *= 1.5;
        while (weyl_count(box_, t) < cutoff.count) t *= 1.5;
        limit = t;
    }

    struct Entry {
        double lambda;
        std::array<int, kMaxDimension> k;
    };
    std::vector<Entry> entries;
    std::array<int, kMaxDimension> k{};
    const auto rest = rest_minimum(box_);
    const double slack_limit = with_slack(limit);
    walk_lattice(box_, slack_limit * (1.0 + 1e-12), 0, 0.0, k, rest, [&](const std::array<int, kMaxDimension>& idx) {
        const double lambda = eigenvalue(box_, std::span<const int>(idx.data(), static_cast<std::size_t>(d)));
        if (lambda <= slack_limit) entries.push_back({lambda, idx});
    });
    std::sort(entries.begin(), entries.end(), [d](const Entry& a, const Entry& b) {
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        return std::lexicographical_compare(a.k.begin(), a.k.begin() + d, b.k.begin(), b.k.begin() + d);
    });
    if (cutoff.kind == EigenCutoff::Kind::count) entries.resize(cutoff.count);

    lambdas_.reserve(entries.size());
    indices_.reserve(entries.size() * static_cast<std::size_t>(d));
    max_index_.assign(static_cast<std::size_t>(d), 0);
    for (const auto& e : entries) {
        lambdas_.push_back(e.lambda);
        for (int i = 0; i < d; ++i) {
            indices_.push_back(e.k[i]);
            max_index_[i] = std::max(max_index_[i], e.k[i]);
        }
    }
}

std::size_t EigenSystem::find(std::span<const int> k) const {
    if (static_cast<int>(k.size()) != dim()) return size();
    if (dim() == 1) {
        const auto pos = static_cast<std::size_t>(k[0] - 1);
        if (k[0] >= 1 && pos < size() && indices_[pos] == k[0]) return pos;
    }
    for (std::size_t i = 0; i < size(); ++i) {
        if (std::equal(k.begin(), k.end(), index(i).begin())) return i;
    }
    return size();
}

std::size_t EigenSystem::prefix_below(double t) const {
    const double limit = with_slack(t);
    return static_cast<std::size_t>(std::upper_bound(lambdas_.begin(), lambdas_.end(), limit) - lambdas_.begin());
}

EigenSystem enumerate_eigen(const HyperBox& box, EigenCutoff cutoff) { return EigenSystem(box, cutoff); }

std::size_t weyl_count(const HyperBox& box, double t) {
    if (!(t > 0.0)) throw DomainError("Weyl count needs t > 0");
    const int d = box.dim();
    const auto rest = rest_minimum(box);
    const double limit = with_slack(t);
    if (rest[0] > limit) return 0;
    std::size_t count = 0;
    if (d == 1) {
        const double len = box.length(0);
        auto n = static_cast<std::size_t>(std::floor(len * std::sqrt(limit) / kPi));
        while (n > 0 && eigenvalue(box, std::array<int, 1>{static_cast<int>(n)}) > limit) --n;
        while (eigenvalue(box, std::array<int, 1>{static_cast<int>(n + 1)}) <= limit) ++n;
        return n;
    }
    std::array<int, kMaxDimension> k{};
    walk_lattice(box, limit * (1.0 + 1e-12), 0, 0.0, k, rest, [&](const std::array<int, kMaxDimension>& idx) {
        if (eigenvalue(box, std::span<const int>(idx.data(), static_cast<std::size_t>(d))) <= limit) ++count;
    });
    return count;
}

double weyl_leading_term(const HyperBox& box, double t) {
    const double d = box.dim();
    const double omega = std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
    return box.volume() * omega * std::pow(t, d / 2.0) / std::pow(2.0 * kPi, d);
}

double weyl_tail_estimate(const HyperBox& box, double lambda_max, double s) {
    const double half_d = box.dim() / 2.0;
    if (s <= half_d) return std::numeric_limits<double>::infinity();
    if (!(lambda_max > 0.0)) return std::numeric_limits<double>::infinity();
    const double c = weyl_leading_term(box, 1.0);
    return c * half_d * std::pow(lambda_max, half_d - s) / (s - half_d);
}

void write_eigen_csv(std::ostream& os, const EigenSystem& system) {
    os << "ordinal";
    for (int i = 0; i < system.dim(); ++i) os << ",k_" << (i + 1);
    os << ",lambda\n";
    for (std::size_t n = 0; n < system.size(); ++n) {
        os << (n + 1);
        for (int k : system.index(n)) os << ',' << k;
        os << ',' << fmt17(system.lambda(n)) << '\n';
    }
}

}  // namespace levy_elliptic
