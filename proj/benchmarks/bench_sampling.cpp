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

#include "ritz/geometry.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_SampleInterior(benchmark::State& state)
{
    const ritz::Domain domain = state.range(0) == 0 ? ritz::Domain::hypercube(0, 1, 2)
                                                    : ritz::Domain::ball({0, 0}, 1.0);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ritz::sample_interior(domain, 4096, ++seed));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 4096);
}

void BM_SampleBoundary(benchmark::State& state)
{
    const ritz::Domain domain = state.range(0) == 0 ? ritz::Domain::hypercube(0, 1, 2)
                                                    : ritz::Domain::ball({0, 0}, 1.0);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ritz::sample_boundary(domain, 1024, ++seed));
    }
}

} // namespace

BENCHMARK(BM_SampleInterior)->Arg(0)->Arg(1);
BENCHMARK(BM_SampleBoundary)->Arg(0)->Arg(1);
BENCHMARK_MAIN();
