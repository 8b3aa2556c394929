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

#include "ritz/net.hpp"
#include "ritz/rng.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

void BM_Forward(benchmark::State& state)
{
    const int width = static_cast<int>(state.range(0));
    const int dim = static_cast<int>(state.range(1));
    std::vector<int> arch{dim};
    for (int l = 0; l < 2; ++l) {
        arch.push_back(width);
    }
    arch.push_back(1);
    const ritz::NetworkParams net = ritz::init(arch, 1);
    ritz::Rng rng(2);
    std::vector<double> x(dim);
    for (auto _ : state) {
        for (double& v : x) {
            v = rng.uniform(-1, 1);
        }
        benchmark::DoNotOptimize(ritz::forward(net, x));
    }
}

void BM_InputGradient(benchmark::State& state)
{
    const int width = static_cast<int>(state.range(0));
    const int dim = static_cast<int>(state.range(1));
    std::vector<int> arch{dim, width, width, 1};
    const ritz::NetworkParams net = ritz::init(arch, 1);
    ritz::Rng rng(2);
    std::vector<double> x(dim);
    for (auto _ : state) {
        for (double& v : x) {
            v = rng.uniform(-1, 1);
        }
        benchmark::DoNotOptimize(ritz::input_gradient(net, x));
    }
}

} // namespace

BENCHMARK(BM_Forward)->Args({16, 1})->Args({64, 2})->Args({64, 3});
BENCHMARK(BM_InputGradient)->Args({16, 1})->Args({64, 2})->Args({64, 3});
BENCHMARK_MAIN();
