#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace levy_elliptic {

inline constexpr int kMaxDimension = 6;

using Point = std::vector<double>;
using MultiIndex = std::vector<int>;

/// Axis-aligned box prod_i (a_i, b_i).
class HyperBox {
public:
    /// Unit cube (0,1)^d.
    static HyperBox unit(int dim);

    explicit HyperBox(std::vector<std::pair<double, double>> intervals);

    int dim() const noexcept { return static_cast<int>(lower_.size()); }
    double lower(int axis) const { return lower_[axis]; }
    double upper(int axis) const { return upper_[axis]; }
    double length(int axis) const { return upper_[axis] - lower_[axis]; }
    double volume() const noexcept;

    /// Closed-box membership.
    bool contains(std::span<const double> x) const noexcept;
    /// Throws DomainError unless x has the right dimension and lies in the closed box.
    void require_contains(std::span<const double> x) const;
    /// True when x lies on some face of the box.
    bool on_boundary(std::span<const double> x) const noexcept;

    Point center() const;

    bool operator==(const HyperBox&) const = default;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

/// Dirichlet eigenvalue of a single index, lambda = sum_i (pi k_i / L_i)^2.
/// Axes with identical lengths are summed in integer arithmetic first so that
/// symmetric indices produce bit-identical eigenvalues.
double eigenvalue(const HyperBox& box, std::span<const int> k);

/// sqrt(2/L) sin(pi k (x - a) / L), exactly zero at both ends of the interval.
double axis_sine(const HyperBox& box, int axis, int k, double x);

/// Product-of-sines eigenfunction e_k(x) on the closed box.
double eigenfunction_eval(const HyperBox& box, std::span<const int> k, std::span<const double> x);

/// Cutoff of an eigen enumeration: exactly `count` entries, or every entry
/// with lambda <= threshold.
struct EigenCutoff {
    enum class Kind { count, threshold };
    Kind kind = Kind::count;
    std::size_t count = 0;
    double threshold = 0.0;

    static EigenCutoff by_count(std::size_t k) { return {Kind::count, k, 0.0}; }
    static EigenCutoff by_threshold(double lambda_max) { return {Kind::threshold, 0, lambda_max}; }
};

/// Relative slack used when comparing eigenvalues against a threshold, so that
/// lambda_max = 5 pi^2 includes the index (1,2) whatever the rounding.
inline constexpr double kThresholdSlack = 1e-12;

/// Dirichlet eigenpairs of -Laplacian on a box, sorted by eigenvalue with
/// lexicographic tie-break. Immutable after construction.
class EigenSystem {
public:
    EigenSystem(HyperBox box, EigenCutoff cutoff);

    const HyperBox& box() const noexcept { return box_; }
    int dim() const noexcept { return box_.dim(); }
    std::size_t size() const noexcept { return lambdas_.size(); }
    const EigenCutoff& cutoff() const noexcept { return cutoff_; }

    std::span<const int> index(std::size_t i) const {
        return {indices_.data() + i * static_cast<std::size_t>(dim()), static_cast<std::size_t>(dim())};
    }
    double lambda(std::size_t i) const { return lambdas_[i]; }
    std::span<const double> lambdas() const noexcept { return lambdas_; }
    std::span<const int> flat_indices() const noexcept { return indices_; }

    /// Largest k along each axis over all entries.
    const std::vector<int>& max_index() const noexcept { return max_index_; }

    /// Position of a multi-index in the listing, or size() when absent.
    std::size_t find(std::span<const int> k) const;

    /// Number of leading entries with lambda <= t (with kThresholdSlack).
    std::size_t prefix_below(double t) const;

    double max_lambda() const { return lambdas_.empty() ? 0.0 : lambdas_.back(); }

private:
    HyperBox box_;
    EigenCutoff cutoff_;
    std::vector<int> indices_;
    std::vector<double> lambdas_;
    std::vector<int> max_index_;
};

/// Builds the eigen system; throws RefusedError when a threshold cutoff lies
/// below the first eigenvalue, DomainError on invalid cutoffs.
EigenSystem enumerate_eigen(const HyperBox& box, EigenCutoff cutoff);

/// N(t) = #{k : lambda_k <= t}, by exact lattice enumeration.
std::size_t weyl_count(const HyperBox& box, double t);

/// Leading Weyl term |D| omega_d t^{d/2} / (2 pi)^d.
double weyl_leading_term(const HyperBox& box, double t);

/// Estimate of sum_{lambda_k > lambda_max} lambda_k^{-s} from the leading Weyl
/// density; +inf when s <= d/2.
double weyl_tail_estimate(const HyperBox& box, double lambda_max, double s);

/// CSV dump (ordinal, k_1..k_d, lambda).
void write_eigen_csv(std::ostream& os, const EigenSystem& system);

}  // namespace levy_elliptic
