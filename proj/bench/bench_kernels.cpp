#include <benchmark/benchmark.h>

#include <vector>

#include "levy_elliptic/kernels.hpp"
#include "levy_elliptic/rng.hpp"

using namespace levy_elliptic;

namespace {

struct Fixture {
    EigenSystem system;
    std::vector<double> loc, z, coeffs;
    std::vector<std::vector<double>> axes;

    Fixture(int d, std::size_t K, std::size_t atoms)
        : system(HyperBox::unit(d), EigenCutoff::by_count(K)), coeffs(K) {
        CounterRng rng(1);
        for (std::size_t j = 0; j < atoms; ++j) {
            for (int i = 0; i < d; ++i) loc.push_back(rng.uniform());
            z.push_back(rng.normal());
        }
        for (std::size_t k = 0; k < K; ++k) coeffs[k] = rng.normal() / system.lambda(k);
        for (int i = 0; i < d; ++i) {
            std::vector<double> a;
            for (int j = 0; j <= 128; ++j) a.push_back(j / 128.0);
            axes.push_back(a);
        }
    }
};

void BM_accumulate(benchmark::State& state) {
    static Fixture f(2, 20000, 200);
    const int workers = static_cast<int>(state.range(0));
    std::vector<double> out(f.system.size());
    for (auto _ : state) {
        std::fill(out.begin(), out.end(), 0.0);
        if (workers == 0) kernels::accumulate_atoms_serial(f.system, f.loc, f.z, out, kernels::SineTable::recurrence);
        else kernels::accumulate_atoms_parallel(f.system, f.loc, f.z, out, workers, kernels::SineTable::recurrence);
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_eval_grid(benchmark::State& state) {
    static Fixture f(2, 5000, 1);
    const int workers = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto v = workers == 0 ? kernels::eval_grid_serial(f.system, f.coeffs, f.axes)
                              : kernels::eval_grid_parallel(f.system, f.coeffs, f.axes, workers);
        benchmark::DoNotOptimize(v.data());
    }
}

void BM_eval_points(benchmark::State& state) {
    static Fixture f(2, 5000, 500);
    const int workers = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto v = workers == 0 ? kernels::eval_points_serial(f.system, f.coeffs, f.loc)
                              : kernels::eval_points_parallel(f.system, f.coeffs, f.loc, workers);
        benchmark::DoNotOptimize(v.data());
    }
}

}  // namespace

// Argument 0 is the serial reference, otherwise the worker count.
BENCHMARK(BM_accumulate)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_eval_grid)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_eval_points)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
