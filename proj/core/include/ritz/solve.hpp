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

#ifndef RITZ_SOLVE_HPP
#define RITZ_SOLVE_HPP

#include "ritz/energy.hpp"
#include "ritz/manufactured.hpp"
#include "ritz/net.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace ritz {

struct OptimizerConfig {
    enum class Algo { Adam, Sgd };
    enum class Decay { None, Cosine };
    Algo algo = Algo::Adam;
    double step_size = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    /// Cosine step-size decay over the step budget (to 1% of the base step).
    /// Fresh batches every step leave a stochastic floor proportional to the
    /// step size; the decay is what lets a run settle onto the minimizer.
    Decay decay = Decay::Cosine;
    /// Step-size multiplier for the first (feature) layer. At the full step
    /// size the kink positions drift faster than the convex output-weight
    /// fit can track, and runs converge to a spurious coarse attractor; a
    /// slow feature layer keeps the anchored kink dictionary intact while
    /// every parameter still trains.
    double feature_step_scale = 0.01;
};

struct TrainResult {
    NetworkParams params;          // best parameters seen (by plateau window mean)
    std::vector<double> loss_trace; // per-step MC loss
    int steps = 0;
    bool plateau_stopped = false;
};

/// Stochastic minimization of the penalized energy with fresh sample batches
/// every step. Stops when the 200-step moving average of the loss improves
/// by less than `delta` from one window to the next, or at max_steps.
/// Returns the parameters of the best window seen; per-step losses are too
/// noisy for a pointwise minimum to mean anything.
TrainResult train(const NetworkParams& initial, const EnergySpec& spec,
                  const OptimizerConfig& optimizer, double delta, int max_steps,
                  std::size_t n_interior, std::size_t m_boundary, std::uint64_t seed);

/// One growth step: width_n, penalty weight, stopping threshold, budget.
struct Rung {
    int width = 8;
    double lambda = 10.0;
    double delta = 1e-2;
    int max_steps = 5000;
    std::size_t n_interior = 1024;
    std::size_t m_boundary = 256;
};

/// Coupled growth schedule: widths nondecreasing, penalties strictly
/// increasing, stopping thresholds strictly decreasing.  Defaults follow
/// width 2^(n+2), lambda 10^n, delta 10^(-n-1).
struct LadderConfig {
    std::vector<Rung> rungs;
    OptimizerConfig optimizer;
    std::uint64_t seed = 0;
    int depth_override = 0;     // 0: default_depth(d)
    int eval_resolution = 0;    // 0: per-dimension default
    bool record_timings = false;

    static LadderConfig defaults(int n_rungs);
    void validate() const;
};

struct RungReport {
    int rung = 0;
    int width = 0;
    double lambda = 0.0;
    double delta = 0.0;
    int steps = 0;
    double final_loss = 0.0; // deterministic quadrature at the returned parameters
    double l2_rel = 0.0;
    double h1_rel = 0.0;
    std::optional<double> gap; // final_loss - known minimal energy
    double boundary_mean_square = 0.0;
    double seconds = 0.0; // 0 unless timings were requested
    std::vector<std::pair<int, double>> loss_trace; // subsampled (step, loss)
};

struct LadderResult {
    std::vector<RungReport> reports;
    NetworkParams final_params;
};

/// Runs the growth schedule against a benchmark case: each rung widens the
/// previous parameters (function-preserving), trains at its penalty weight,
/// and measures errors against the exact solution. `on_rung`, when set, is
/// called after each rung (streamed output).
LadderResult run_ladder(const ManufacturedCase& c, const LadderConfig& config,
                        const std::function<void(const RungReport&)>& on_rung = {});

/// Relative L² / H¹-seminorm errors against the case's exact solution by
/// midpoint quadrature (>= 64 nodes per axis); absolute when the reference
/// norm vanishes.
double l2_error(const NetworkParams& params, const ManufacturedCase& c, int resolution);
double h1_seminorm_error(const NetworkParams& params, const ManufacturedCase& c, int resolution);

/// Mean-square boundary trace of the realisation.
double boundary_mean_square(const NetworkParams& params, const Domain& domain, int resolution);

/// final_loss - minimal energy, when the case knows its minimal energy; the
/// true per-rung infimum is unknowable, so this is a limit proxy.
std::optional<double> energy_gap(double final_loss, const ManufacturedCase& c);

/// Default metric resolution per dimension (4096 / 256 / 96).
int default_eval_resolution(int dim);

} // namespace ritz

#endif // RITZ_SOLVE_HPP
