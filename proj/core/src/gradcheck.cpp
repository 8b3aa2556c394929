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

#include "ritz/gradcheck.hpp"

#include "ritz/autodiff.hpp"
#include "ritz/rng.hpp"

#include <algorithm>
#include <cmath>

namespace ritz {

namespace {

    /// Signs of all hidden pre-activations over both frozen batches; the
    /// comparison must exclude parameters whose perturbation changes any of
    /// them, since the energy is only piecewise smooth across those flips.
    std::uint64_t activation_signature(const NetworkParams& params, const SampleBatch& interior,
                                       const SampleBatch& boundary)
    {
        std::uint64_t hash = 1469598103934665603ULL; // FNV offset
        const auto absorb = [&hash](bool bit) {
            hash ^= bit ? 0x9eULL : 0x31ULL;
            hash *= 1099511628211ULL;
        };
        const auto walk = [&](std::span<const double> x) {
            std::vector<double> h(x.begin(), x.end());
            std::vector<double> z;
            const auto& layers = params.layers();
            for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
                const Layer& layer = layers[l];
                z.assign(layer.rows(), 0.0);
                for (int r = 0; r < layer.rows(); ++r) {
                    double acc = layer.bias[r];
                    for (int c = 0; c < layer.in; ++c) {
                        acc += layer.w(r, c) * h[c];
                    }
                    absorb(acc > 0.0);
                    z[r] = relu(acc);
                }
                h.swap(z);
            }
        };
        for (std::size_t i = 0; i < interior.count; ++i) {
            walk(interior.point(i));
        }
        for (std::size_t j = 0; j < boundary.count; ++j) {
            walk(boundary.point(j));
        }
        return hash;
    }

    double total_energy(const NetworkParams& params, const EnergySpec& spec,
                        const SampleBatch& interior, const SampleBatch& boundary)
    {
        return estimate_interior(params, spec, interior)
               + estimate_penalty(params, spec, boundary);
    }

} // namespace

std::vector<double> finite_difference_gradient(const NetworkParams& params, const EnergySpec& spec,
                                               std::size_t n_interior, std::size_t m_boundary,
                                               std::uint64_t seed, double h_scale)
{
    const SampleBatch interior = sample_interior(spec.domain(), n_interior, derive_seed(seed, 1));
    const SampleBatch boundary = sample_boundary(spec.domain(), m_boundary, derive_seed(seed, 2));

    NetworkParams probe = params;
    std::vector<double> theta = params.to_flat();
    std::vector<double> grad(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double h = h_scale * std::max(1.0, std::abs(theta[i]));
        const double saved = theta[i];
        theta[i] = saved + h;
        probe.set_flat(theta);
        const double plus = total_energy(probe, spec, interior, boundary);
        theta[i] = saved - h;
        probe.set_flat(theta);
        const double minus = total_energy(probe, spec, interior, boundary);
        theta[i] = saved;
        grad[i] = (plus - minus) / (2.0 * h);
    }
    probe.set_flat(theta);
    return grad;
}

GradCheckResult check_gradients(const NetworkParams& params, const EnergySpec& spec,
                                std::size_t n_interior, std::size_t m_boundary,
                                std::uint64_t batch_seed, double h_scale, bool inject_sign_bug)
{
    const SampleBatch interior = sample_interior(spec.domain(), n_interior,
                                                 derive_seed(batch_seed, 1));
    const SampleBatch boundary = sample_boundary(spec.domain(), m_boundary,
                                                 derive_seed(batch_seed, 2));

    // reverse-mode gradient of the identical frozen-batch loss
    Tape tape(spec.domain().dim());
    const ParamBinding binding = bind_params(tape, params);
    const Ref interior_ref = record_interior(tape, binding, spec, interior);
    const Ref penalty_ref = record_penalty(tape, binding, spec, boundary);
    const Ref loss = tape.add(interior_ref, penalty_ref);
    std::vector<double> reverse = grad_params(tape, loss, binding);

    const std::vector<double> fd = finite_difference_gradient(params, spec, n_interior, m_boundary,
                                                              batch_seed, h_scale);

    double scale = 0.0;
    for (double g : reverse) {
        scale = std::max(scale, std::abs(g));
    }
    if (inject_sign_bug) {
        // negative control hook: flip the sign of the largest entry
        std::size_t worst = 0;
        for (std::size_t i = 0; i < reverse.size(); ++i) {
            if (std::abs(reverse[i]) > std::abs(reverse[worst])) {
                worst = i;
            }
        }
        reverse[worst] = -reverse[worst];
    }

    // near-zero entries are compared against a floor tied to the gradient
    // scale: below it, central differences carry more roundoff than signal
    const double floor = 1e-2 * (1.0 + scale);

    GradCheckResult result;
    result.input_dim = params.input_dim();
    result.depth = params.depth();
    result.width = params.width();

    NetworkParams probe = params;
    std::vector<double> theta = params.to_flat();
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double h = h_scale * std::max(1.0, std::abs(theta[i]));
        const double saved = theta[i];
        theta[i] = saved + h;
        probe.set_flat(theta);
        const std::uint64_t sig_plus = activation_signature(probe, interior, boundary);
        theta[i] = saved - h;
        probe.set_flat(theta);
        const std::uint64_t sig_minus = activation_signature(probe, interior, boundary);
        theta[i] = saved;
        if (sig_plus != sig_minus) {
            ++result.excluded;
            continue;
        }
        const double rel = std::abs(reverse[i] - fd[i])
                           / std::max({std::abs(reverse[i]), std::abs(fd[i]), floor});
        if (rel > result.max_rel_error) {
            result.max_rel_error = rel;
            result.worst_param = i;
        }
    }
    return result;
}

std::vector<GradCheckResult> run_gradcheck_suite(const GradCheckSuiteConfig& config)
{
    std::vector<GradCheckResult> results;
    results.reserve(config.nets);
    for (int i = 0; i < config.nets; ++i) {
        const int d = config.dims[i % config.dims.size()];
        const int depth = config.depths[(i / config.dims.size()) % config.depths.size()];
        const std::uint64_t net_seed = derive_seed(config.seed, 0x6c0 + i);
        const int width = 4 + static_cast<int>(derive_seed(net_seed, 7)
                                               % static_cast<std::uint64_t>(config.max_width - 3));

        std::vector<int> arch;
        arch.push_back(d);
        for (int l = 0; l < depth - 1; ++l) {
            arch.push_back(width);
        }
        arch.push_back(1);
        const NetworkParams params = init(arch, net_seed);

        // bounded polynomial load keeps the loss scale tame across dims
        const ScalarField source = [](std::span<const double> x) { return 1.0 + 0.5 * x[0]; };
        const double lambda = (i % 4 == 3) ? 10.0 : 1.0;
        const EnergySpec spec(Domain::hypercube(0.0, 1.0, d), 2.0, lambda, source);

        GradCheckResult r = check_gradients(params, spec, config.n_interior, config.m_boundary,
                                            derive_seed(config.seed, 0xba7c + i), 1e-6,
                                            config.inject_sign_bug);
        r.net_seed = net_seed;
        results.push_back(r);
    }
    return results;
}

} // namespace ritz
