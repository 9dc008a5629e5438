// OpenMP kernels against their serial references.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qbat/kernel.hpp"
#include "qbat/kernels.hpp"
#include "qbat/scenarios.hpp"

using namespace qbat;

namespace {

struct Terms {
    std::vector<std::vector<Complex>> data;
    std::vector<const Complex*> ptrs;
    std::vector<double> weights;
    std::vector<Complex> out;

    Terms(std::size_t count, std::size_t len) : data(count, std::vector<Complex>(len)), weights(count), out(len) {
        std::mt19937_64 rng(1);
        std::normal_distribution<double> n;
        for (auto& v : data)
            for (auto& x : v) x = Complex(n(rng), n(rng));
        for (auto& v : data) ptrs.push_back(v.data());
        const auto w = lag_weights(KernelSpec::gaussian(1.8, 1.8), 0.01, count);
        std::copy(w.begin() + 1, w.end(), weights.begin());
    }
};

// args: snapshot count (memory window), entries per snapshot
void BM_WeightedSumOpenMP(benchmark::State& st) {
    Terms t(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(1)));
    for (auto _ : st) {
        kernels::weighted_sum(t.ptrs, t.weights, t.out);
        benchmark::DoNotOptimize(t.out.data());
    }
    st.SetBytesProcessed(st.iterations() * st.range(0) * st.range(1) * static_cast<long>(sizeof(Complex)));
}

void BM_WeightedSumSerial(benchmark::State& st) {
    Terms t(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(1)));
    for (auto _ : st) {
        kernels::reference::weighted_sum(t.ptrs, t.weights, t.out);
        benchmark::DoNotOptimize(t.out.data());
    }
    st.SetBytesProcessed(st.iterations() * st.range(0) * st.range(1) * static_cast<long>(sizeof(Complex)));
}

// 392 snapshots; 372 entries is the supported block count of the Fock(3)
// start on the 96-dimensional layout, 9216 is the full dense matrix.
BENCHMARK(BM_WeightedSumOpenMP)->Args({392, 372})->Args({392, 9216})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_WeightedSumSerial)->Args({392, 372})->Args({392, 9216})->Unit(benchmark::kMicrosecond);

Scenario short_sweep() {
    Scenario s = preset("fig2b");
    s.grid.t_max = 2.0;
    return s;
}

void BM_SweepOpenMP(benchmark::State& st) {
    const Scenario s = short_sweep();
    for (auto _ : st) benchmark::DoNotOptimize(run_scenario(s));
}

void BM_SweepSerial(benchmark::State& st) {
    const Scenario s = short_sweep();
    for (auto _ : st) benchmark::DoNotOptimize(reference::run_scenario(s));
}

BENCHMARK(BM_SweepOpenMP)->Unit(benchmark::kMillisecond)->Iterations(3);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
