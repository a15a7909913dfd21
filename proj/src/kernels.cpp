#include "levy_elliptic/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "levy_elliptic/error.hpp"

namespace levy_elliptic::kernels {

namespace {

struct AxisRange {
    int lo = 1;
    int hi = 0;
};

std::vector<AxisRange> chunk_ranges(const EigenSystem& system, std::size_t begin, std::size_t end) {
    const int d = system.dim();
    std::vector<AxisRange> r(d, AxisRange{1 << 30, 0});
    for (std::size_t e = begin; e < end; ++e) {
        const auto k = system.index(e);
        for (int i = 0; i < d; ++i) {
            r[i].lo = std::min(r[i].lo, k[i]);
            r[i].hi = std::max(r[i].hi, k[i]);
        }
    }
    return r;
}

void accumulate_chunk(const EigenSystem& system, std::span<const double> locations, std::span<const double> sizes,
                      std::span<double> out, std::size_t begin, std::size_t end, SineTable mode) {
    if (begin >= end) return;
    const int d = system.dim();
    const auto ranges = chunk_ranges(system, begin, end);
    std::vector<std::vector<double>> tables(d);
    for (int i = 0; i < d; ++i) tables[i].resize(static_cast<std::size_t>(ranges[i].hi - ranges[i].lo + 1));
    const auto flat = system.flat_indices();
    const auto ud = static_cast<std::size_t>(d);

    for (std::size_t j = 0; j < sizes.size(); ++j) {
        const double z = sizes[j];
        for (int i = 0; i < d; ++i) {
            fill_sine_table(system.box(), i, locations[j * ud + i], ranges[i].lo, ranges[i].hi, mode, tables[i]);
        }
        if (d == 1) {
            const double* t = tables[0].data() - ranges[0].lo;
            for (std::size_t e = begin; e < end; ++e) {
                double value = 1.0;
                value *= t[flat[e]];
                out[e] += z * value;
            }
            continue;
        }
        for (std::size_t e = begin; e < end; ++e) {
            double value = 1.0;
            for (int i = 0; i < d; ++i) value *= tables[i][static_cast<std::size_t>(flat[e * ud + i] - ranges[i].lo)];
            out[e] += z * value;
        }
    }
}

void check_atoms(const EigenSystem& system, std::span<const double> locations, std::span<const double> sizes,
                 std::span<double> out) {
    if (locations.size() != sizes.size() * static_cast<std::size_t>(system.dim()))
        throw DomainError("atom locations and sizes disagree in length");
    if (out.size() > system.size()) throw DomainError("output longer than the eigen system");
}

std::vector<std::size_t> split(std::size_t n, int workers) {
    const std::size_t parts = std::max<std::size_t>(1, std::min<std::size_t>(n, static_cast<std::size_t>(workers) * 4));
    std::vector<std::size_t> bounds(parts + 1);
    for (std::size_t p = 0; p <= parts; ++p) bounds[p] = n * p / parts;
    return bounds;
}

void eval_points_range(const EigenSystem& system, std::span<const double> coeffs, std::span<const double> points,
                       std::span<double> out, std::size_t begin, std::size_t end) {
    const int d = system.dim();
    const auto ud = static_cast<std::size_t>(d);
    const auto& kmax = system.max_index();
    std::vector<std::vector<double>> tables(d);
    for (int i = 0; i < d; ++i) tables[i].resize(static_cast<std::size_t>(kmax[i]));
    const auto flat = system.flat_indices();
    for (std::size_t p = begin; p < end; ++p) {
        const auto x = points.subspan(p * ud, ud);
        system.box().require_contains(x);
        for (int i = 0; i < d; ++i) fill_sine_table(system.box(), i, x[i], 1, kmax[i], SineTable::direct, tables[i]);
        double sum = 0.0;
        for (std::size_t e = 0; e < coeffs.size(); ++e) {
            double value = coeffs[e];
            for (int i = 0; i < d; ++i) value *= tables[i][static_cast<std::size_t>(flat[e * ud + i] - 1)];
            sum += value;
        }
        out[p] = sum;
    }
}

// Contracts axis `axis` of a row-major tensor with dims `dims` against
// table[k][p] (k < dims[axis], p < npoints).
std::vector<double> contract_axis(const std::vector<double>& tensor, std::vector<std::size_t>& dims, int axis,
                                  const std::vector<double>& table, std::size_t npoints, int workers) {
    std::size_t pre = 1, post = 1;
    for (int i = 0; i < axis; ++i) pre *= dims[i];
    for (std::size_t i = static_cast<std::size_t>(axis) + 1; i < dims.size(); ++i) post *= dims[i];
    const std::size_t nk = dims[axis];
    std::vector<double> out(pre * npoints * post, 0.0);
    const long outer = static_cast<long>(pre * npoints);
#pragma omp parallel for schedule(static) num_threads(workers) if (workers > 1)
    for (long op = 0; op < outer; ++op) {
        const std::size_t a = static_cast<std::size_t>(op) / npoints;
        const std::size_t p = static_cast<std::size_t>(op) % npoints;
        double* dst = out.data() + (a * npoints + p) * post;
        for (std::size_t k = 0; k < nk; ++k) {
            const double w = table[k * npoints + p];
            if (w == 0.0) continue;
            const double* src = tensor.data() + (a * nk + k) * post;
            for (std::size_t b = 0; b < post; ++b) dst[b] += w * src[b];
        }
    }
    dims[axis] = npoints;
    return out;
}

std::vector<double> eval_grid_impl(const EigenSystem& system, std::span<const double> coeffs,
                                   const std::vector<std::vector<double>>& axis_points, int workers) {
    const int d = system.dim();
    if (static_cast<int>(axis_points.size()) != d) throw DomainError("grid dimension does not match the eigen system");
    if (coeffs.size() > system.size()) throw DomainError("more coefficients than eigen entries");
    const auto ud = static_cast<std::size_t>(d);
    std::vector<int> kmax(d, 1);
    for (std::size_t e = 0; e < coeffs.size(); ++e)
        for (int i = 0; i < d; ++i) kmax[i] = std::max(kmax[i], system.index(e)[i]);

    std::vector<std::size_t> dims(ud);
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) {
        dims[i] = static_cast<std::size_t>(kmax[i]);
        total *= dims[i];
    }
    std::vector<double> tensor(total, 0.0);
    for (std::size_t e = 0; e < coeffs.size(); ++e) {
        std::size_t flat = 0;
        const auto k = system.index(e);
        for (int i = 0; i < d; ++i) flat = flat * dims[i] + static_cast<std::size_t>(k[i] - 1);
        tensor[flat] = coeffs[e];
    }
    for (int i = 0; i < d; ++i) {
        const auto& pts = axis_points[i];
        for (double x : pts) {
            if (!(x >= system.box().lower(i) && x <= system.box().upper(i))) throw DomainError("grid point lies outside the box");
        }
        std::vector<double> table(static_cast<std::size_t>(kmax[i]) * pts.size());
        std::vector<double> column(static_cast<std::size_t>(kmax[i]));
        for (std::size_t p = 0; p < pts.size(); ++p) {
            fill_sine_table(system.box(), i, pts[p], 1, kmax[i], SineTable::direct, column);
            for (int k = 0; k < kmax[i]; ++k) table[static_cast<std::size_t>(k) * pts.size() + p] = column[k];
        }
        tensor = contract_axis(tensor, dims, i, table, pts.size(), workers);
    }
    return tensor;
}

}  // namespace

void fill_sine_table(const HyperBox& box, int axis, double x, int k_lo, int k_hi, SineTable mode, std::span<double> table) {
    const std::size_t n = static_cast<std::size_t>(std::max(0, k_hi - k_lo + 1));
    if (x == box.lower(axis) || x == box.upper(axis)) {
        std::fill_n(table.begin(), n, 0.0);
        return;
    }
    if (mode == SineTable::direct) {
        for (int k = k_lo; k <= k_hi; ++k) table[static_cast<std::size_t>(k - k_lo)] = axis_sine(box, axis, k, x);
        return;
    }
    const double len = box.length(axis);
    const double theta = std::numbers::pi * ((x - box.lower(axis)) / len);
    const double norm = std::sqrt(2.0 / len);
    const double c1 = std::cos(theta);
    const double s1 = std::sin(theta);
    // Each value is rotated from the direct value at the previous multiple of
    // the resync stride, independent of k_lo.
    int k = k_lo;
    while (k <= k_hi) {
        const int anchor = (k / kResyncStride) * kResyncStride;
        double s = std::sin(anchor * theta);
        double c = std::cos(anchor * theta);
        for (int m = anchor; m < k; ++m) {
            const double s_next = s * c1 + c * s1;
            c = c * c1 - s * s1;
            s = s_next;
        }
        const int stop = std::min(k_hi, anchor + kResyncStride - 1);
        for (; k <= stop; ++k) {
            table[static_cast<std::size_t>(k - k_lo)] = norm * s;
            const double s_next = s * c1 + c * s1;
            c = c * c1 - s * s1;
            s = s_next;
        }
    }
}

void accumulate_atoms_serial(const EigenSystem& system, std::span<const double> locations, std::span<const double> sizes,
                             std::span<double> out, SineTable mode) {
    check_atoms(system, locations, sizes, out);
    accumulate_chunk(system, locations, sizes, out, 0, out.size(), mode);
}

void accumulate_atoms_parallel(const EigenSystem& system, std::span<const double> locations, std::span<const double> sizes,
                               std::span<double> out, int workers, SineTable mode) {
    check_atoms(system, locations, sizes, out);
    const auto bounds = split(out.size(), workers);
    const long parts = static_cast<long>(bounds.size()) - 1;
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (long p = 0; p < parts; ++p) {
        accumulate_chunk(system, locations, sizes, out, bounds[p], bounds[p + 1], mode);
    }
}

std::vector<double> eval_points_serial(const EigenSystem& system, std::span<const double> coeffs, std::span<const double> points) {
    const auto ud = static_cast<std::size_t>(system.dim());
    if (points.size() % ud != 0) throw DomainError("point buffer is not a multiple of the dimension");
    if (coeffs.size() > system.size()) throw DomainError("more coefficients than eigen entries");
    std::vector<double> out(points.size() / ud);
    eval_points_range(system, coeffs, points, out, 0, out.size());
    return out;
}

std::vector<double> eval_points_parallel(const EigenSystem& system, std::span<const double> coeffs, std::span<const double> points,
                                         int workers) {
    const auto ud = static_cast<std::size_t>(system.dim());
    if (points.size() % ud != 0) throw DomainError("point buffer is not a multiple of the dimension");
    if (coeffs.size() > system.size()) throw DomainError("more coefficients than eigen entries");
    std::vector<double> out(points.size() / ud);
    const auto bounds = split(out.size(), workers);
    const long parts = static_cast<long>(bounds.size()) - 1;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(parts));
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (long p = 0; p < parts; ++p) {
        try {
            eval_points_range(system, coeffs, points, out, bounds[p], bounds[p + 1]);
        } catch (...) {
            errors[static_cast<std::size_t>(p)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::vector<double> eval_grid_serial(const EigenSystem& system, std::span<const double> coeffs,
                                     const std::vector<std::vector<double>>& axis_points) {
    return eval_grid_impl(system, coeffs, axis_points, 1);
}

std::vector<double> eval_grid_parallel(const EigenSystem& system, std::span<const double> coeffs,
                                       const std::vector<std::vector<double>>& axis_points, int workers) {
    return eval_grid_impl(system, coeffs, axis_points, std::max(1, workers));
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LEVY_ELLIPTIC_WORKERS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
        }
    }
    return 1;
}

}  // namespace levy_elliptic::kernels
