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

#ifndef RITZ_GRADCHECK_HPP
#define RITZ_GRADCHECK_HPP

#include "ritz/energy.hpp"
#include "ritz/net.hpp"

#include <cstdint>
#include <vector>

namespace ritz {

/// Central finite differences of the full Monte-Carlo energy with frozen
/// batches (the same seed on both sides of every perturbation). This is the
/// independent oracle for the reverse-mode gradients; it never touches the
/// tape.
std::vector<double> finite_difference_gradient(const NetworkParams& params, const EnergySpec& spec,
                                               std::size_t n_interior, std::size_t m_boundary,
                                               std::uint64_t seed, double h_scale = 1e-6);

/// Comparison of one network's reverse-mode and finite-difference gradients.
/// Parameters whose perturbation flips an activation mask are excluded from
/// the comparison (the loss is only piecewise smooth there) and counted.
struct GradCheckResult {
    std::uint64_t net_seed = 0;
    int input_dim = 0;
    int depth = 0;
    int width = 0;
    double max_rel_error = 0.0;
    std::size_t worst_param = 0;
    std::size_t excluded = 0;
};

GradCheckResult check_gradients(const NetworkParams& params, const EnergySpec& spec,
                                std::size_t n_interior, std::size_t m_boundary,
                                std::uint64_t batch_seed, double h_scale = 1e-6,
                                bool inject_sign_bug = false);

struct GradCheckSuiteConfig {
    int nets = 20;
    std::vector<int> dims = {1, 2, 3};
    std::vector<int> depths = {2, 3};
    int max_width = 32;
    std::size_t n_interior = 8;
    std::size_t m_boundary = 4;
    std::uint64_t seed = 0;
    double tolerance = 1e-5;
    bool inject_sign_bug = false;
};

/// Deterministic sweep over random architectures; one result per net.
std::vector<GradCheckResult> run_gradcheck_suite(const GradCheckSuiteConfig& config);

} // namespace ritz

#endif // RITZ_GRADCHECK_HPP
