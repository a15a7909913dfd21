#pragma once

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP version; the parallel versions keep the per-element summation order
// of the serial ones, so both produce bit-identical output for any worker count.

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

#include "levy_elliptic/spectral_domain.hpp"

namespace levy_elliptic::kernels {

/// How per-axis sine tables are filled: `direct` calls std::sin for every
/// entry (bit-compatible with eigenfunction_eval); `recurrence` rotates from a
/// direct value every kResyncStride steps, which is much cheaper for long tables.
enum class SineTable { direct, recurrence };

inline constexpr int kResyncStride = 64;

/// table[k - k_lo] = sqrt(2/L) sin(pi k (x - a)/L) for k in [k_lo, k_hi].
void fill_sine_table(const HyperBox& box, int axis, double x, int k_lo, int k_hi, SineTable mode, std::span<double> table);

/// out[e] += sum_j z_j e_{k_e}(y_j) for e < entries, atoms visited in order.
/// `locations` holds the atom positions row-major (n x d).
void accumulate_atoms_serial(const EigenSystem& system, std::span<const double> locations, std::span<const double> sizes,
                             std::span<double> out, SineTable mode = SineTable::direct);
void accumulate_atoms_parallel(const EigenSystem& system, std::span<const double> locations, std::span<const double> sizes,
                               std::span<double> out, int workers, SineTable mode = SineTable::direct);

/// u(x_p) = sum_e coeffs[e] e_{k_e}(x_p) for row-major points (n x d);
/// only the first coeffs.size() entries of the system are used.
std::vector<double> eval_points_serial(const EigenSystem& system, std::span<const double> coeffs, std::span<const double> points);
std::vector<double> eval_points_parallel(const EigenSystem& system, std::span<const double> coeffs, std::span<const double> points,
                                         int workers);

/// Same expansion on the tensor grid axis_points[0] x ... x axis_points[d-1]
/// by sum factorisation; output row-major with the last axis fastest.
std::vector<double> eval_grid_serial(const EigenSystem& system, std::span<const double> coeffs,
                                     const std::vector<std::vector<double>>& axis_points);
std::vector<double> eval_grid_parallel(const EigenSystem& system, std::span<const double> coeffs,
                                       const std::vector<std::vector<double>>& axis_points, int workers);

/// Worker count: `requested` when positive, else LEVY_ELLIPTIC_WORKERS, else 1.
int resolve_workers(int requested);

/// Runs fn(i) for i in [0, n) across `workers` threads and returns the results
/// in index order. The first exception (by index) is rethrown after the loop.
template <class Result, class Fn>
std::vector<Result> map_replicates(std::size_t n, int workers, Fn&& fn) {
    std::vector<Result> out(n);
    std::vector<std::exception_ptr> errors(n);
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(workers > 0 ? workers : 1)
    for (long i = 0; i < count; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace levy_elliptic::kernels
