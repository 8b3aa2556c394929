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

#include "ritz/kuhn.hpp"
#include "ritz/rng.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_InterpolantValue(benchmark::State& state)
{
    const int dim = static_cast<int>(state.range(0));
    const ritz::CpwlInterpolant interp = ritz::kuhn_interpolant(
        [](std::span<const double> x) { return ritz::standard_bump(x); },
        ritz::unit_ball_box(dim), 0.05);
    ritz::Rng rng(1);
    std::vector<double> x(dim);
    for (auto _ : state) {
        for (double& v : x) {
            v = rng.uniform(-1.2, 1.2);
        }
        benchmark::DoNotOptimize(interp.value(x));
    }
}

void BM_InterpolantBuild(benchmark::State& state)
{
    const int dim = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ritz::kuhn_interpolant(
            [](std::span<const double> x) { return ritz::standard_bump(x); },
            ritz::unit_ball_box(dim), 0.05));
    }
}

} // namespace

BENCHMARK(BM_InterpolantValue)->Arg(1)->Arg(2)->Arg(3);
BENCHMARK(BM_InterpolantBuild)->Arg(1)->Arg(2);
BENCHMARK_MAIN();
