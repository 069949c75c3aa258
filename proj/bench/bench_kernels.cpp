#include <benchmark/benchmark.h>

#include <vector>

#include "geodesic/quad_forms.hpp"
#include "geodesic/spectrum.hpp"

using namespace geodesic;

namespace {

const std::vector<std::uint64_t>& batch() {
    static const std::vector<std::uint64_t> ds = [] {
        std::vector<std::uint64_t> out;
        for (std::uint64_t n = 20000; out.size() < 256; ++n) out.push_back(n * n - 4);
        return out;
    }();
    return ds;
}

void class_numbers(benchmark::State& state, spectrum::Execution execution) {
    for (auto _ : state) benchmark::DoNotOptimize(spectrum::class_numbers(batch(), execution));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch().size()));
}

void sieve(benchmark::State& state, spectrum::Execution execution) {
    spectrum::SieveOptions options;
    options.execution = execution;
    const auto max_n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(spectrum::spectrum_sieve(max_n, options));
}

}  // namespace

BENCHMARK_CAPTURE(class_numbers, serial, spectrum::Execution::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(class_numbers, parallel, spectrum::Execution::parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sieve, serial, spectrum::Execution::serial)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sieve, parallel, spectrum::Execution::parallel)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
