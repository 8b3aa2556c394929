// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License.  You
// may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

// One full training step: record the penalized-energy estimate, sweep,
// extract the parameter gradient. This is the loop that dominates every
// solve, so its throughput is the number that matters.

#include "ritz/autodiff.hpp"
#include "ritz/energy.hpp"
#include "ritz/net.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_EnergyGradientStep(benchmark::State& state)
{
    const int width = static_cast<int>(state.range(0));
    const int dim = static_cast<int>(state.range(1));
    const std::size_t n = static_cast<std::size_t>(state.range(2));

    std::vector<int> arch{dim};
    for (int l = 0; l < ritz::default_depth(dim) - 1; ++l) {
        arch.push_back(width);
    }
    arch.push_back(1);
    const ritz::NetworkParams net = ritz::init(arch, 1);
    const ritz::EnergySpec spec(dim == 1 ? ritz::Domain::interval(0, 1)
                                         : ritz::Domain::hypercube(0, 1, dim),
                                2.0, 100.0, [](std::span<const double>) { return 1.0; });

    ritz::Tape tape(dim);
    std::uint64_t step = 0;
    for (auto _ : state) {
        tape.clear();
        const ritz::ParamBinding binding = ritz::bind_params(tape, net);
        ritz::EnergyRefs refs;
        ritz::record_total(tape, binding, spec, n, 64, ++step, &refs);
        benchmark::DoNotOptimize(ritz::grad_params(tape, refs.total, binding));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * n);
}

} // namespace

BENCHMARK(BM_EnergyGradientStep)
    ->Args({16, 1, 1024})
    ->Args({32, 1, 1024})
    ->Args({32, 2, 1024})
    ->Args({64, 2, 1024})
    ->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
