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

#include "ritz/energy.hpp"

#include "ritz/errors.hpp"
#include "ritz/quadrature.hpp"
#include "ritz/rng.hpp"

#include <cmath>
#include <utility>

namespace ritz {

EnergySpec::EnergySpec(Domain domain, double exponent, double penalty_weight, ScalarField source)
    : domain_(std::move(domain)), exponent_(exponent), penalty_weight_(penalty_weight),
      source_(std::move(source))
{
    if (!(exponent_ > 1.0)) {
        throw std::invalid_argument("energy exponent must satisfy p > 1");
    }
    if (penalty_weight_ < 0.0) {
        throw std::invalid_argument("penalty weight must be nonnegative");
    }
    if (!source_) {
        source_ = [](std::span<const double>) { return 0.0; };
    }
}

EnergySpec EnergySpec::with_penalty(double penalty_weight) const
{
    return EnergySpec(domain_, exponent_, penalty_weight, source_);
}

Ref record_interior(Tape& tape, const ParamBinding& binding, const EnergySpec& spec,
                    const SampleBatch& batch)
{
    const double p = spec.exponent();
    const double inv_p = 1.0 / p;
    Ref acc = tape.leaf(0.0);
    for (std::size_t i = 0; i < batch.count; ++i) {
        const auto x = batch.point(i);
        const DualValue u = forward_with_input_tangents(tape, binding, x);
        const Ref grad_pow = tape.tangent_norm_pow(u.node, p);
        const Ref density = tape.mul_imm(grad_pow, inv_p);
        const Ref load = tape.mul_imm(u.node, spec.source()(x));
        acc = tape.add(acc, tape.sub(density, load));
    }
    return tape.mul_imm(acc, batch.weight);
}

Ref record_penalty(Tape& tape, const ParamBinding& binding, const EnergySpec& spec,
                   const SampleBatch& batch)
{
    const double p = spec.exponent();
    Ref acc = tape.leaf(0.0);
    for (std::size_t j = 0; j < batch.count; ++j) {
        const Ref u = record_forward(tape, binding, batch.point(j));
        const Ref term = (p == 2.0) ? tape.mul(u, u) : tape.pow_abs(u, p);
        acc = tape.add(acc, term);
    }
    Ref norm_pow = tape.mul_imm(acc, batch.weight);
    if (p != 2.0) {
        norm_pow = tape.pow_abs(norm_pow, 2.0 / p);
    }
    // λ applied exactly once: the estimate is exactly linear in it
    return tape.mul_imm(norm_pow, spec.penalty_weight());
}

EnergyEstimate record_total(Tape& tape, const ParamBinding& binding, const EnergySpec& spec,
                            std::size_t n_interior, std::size_t m_boundary, std::uint64_t seed,
                            EnergyRefs* refs)
{
    const SampleBatch interior = sample_interior(spec.domain(), n_interior, derive_seed(seed, 1));
    const SampleBatch boundary = sample_boundary(spec.domain(), m_boundary, derive_seed(seed, 2));

    EnergyRefs r;
    r.interior = record_interior(tape, binding, spec, interior);
    r.penalty = record_penalty(tape, binding, spec, boundary);
    r.total = tape.add(r.interior, r.penalty);
    if (refs != nullptr) {
        *refs = r;
    }

    EnergyEstimate estimate;
    estimate.interior = tape.value(r.interior);
    estimate.penalty = tape.value(r.penalty);
    estimate.total = tape.value(r.total);
    estimate.n_interior = interior.count;
    estimate.m_boundary = boundary.count;
    estimate.seed = seed;
    return estimate;
}

double estimate_interior(const NetworkParams& params, const EnergySpec& spec,
                         const SampleBatch& batch)
{
    Tape tape(spec.domain().dim());
    const ParamBinding binding = bind_params(tape, params);
    return tape.value(record_interior(tape, binding, spec, batch));
}

double estimate_penalty(const NetworkParams& params, const EnergySpec& spec,
                        const SampleBatch& batch)
{
    Tape tape(spec.domain().dim());
    const ParamBinding binding = bind_params(tape, params);
    return tape.value(record_penalty(tape, binding, spec, batch));
}

EnergyEstimate estimate_total(const NetworkParams& params, const EnergySpec& spec,
                              std::size_t n_interior, std::size_t m_boundary, std::uint64_t seed)
{
    Tape tape(spec.domain().dim());
    const ParamBinding binding = bind_params(tape, params);
    return record_total(tape, binding, spec, n_interior, m_boundary, seed);
}

double quadrature_energy(const ScalarField& u, const VectorField& grad_u, const EnergySpec& spec,
                         int resolution)
{
    if (resolution < 64) {
        throw std::invalid_argument("quadrature resolution below 64 nodes per axis refused");
    }
    const int dim = spec.domain().dim();
    const double p = spec.exponent();
    const double inv_p = 1.0 / p;

    double interior = 0.0;
    std::vector<double> grad(dim);
    for_each_interior_node(spec.domain(), resolution, [&](std::span<const double> x, double w) {
        grad_u(x, grad);
        double norm2 = 0.0;
        for (double g : grad) {
            norm2 += g * g;
        }
        const double grad_pow = (p == 2.0) ? norm2 : std::pow(norm2, 0.5 * p);
        interior += w * (inv_p * grad_pow - spec.source()(x) * u(x));
    });

    double boundary_pow = 0.0;
    for_each_boundary_node(spec.domain(), resolution, [&](std::span<const double> x, double w) {
        const double v = u(x);
        boundary_pow += w * ((p == 2.0) ? v * v : std::pow(std::abs(v), p));
    });
    const double penalty = spec.penalty_weight()
                           * ((p == 2.0) ? boundary_pow : std::pow(boundary_pow, 2.0 / p));
    return interior + penalty;
}

ScalarField network_field(const NetworkParams& params)
{
    return [params](std::span<const double> x) { return forward(params, x); };
}

VectorField network_gradient_field(const NetworkParams& params)
{
    return [params](std::span<const double> x, std::span<double> out) {
        const std::vector<double> g = input_gradient(params, x);
        std::copy(g.begin(), g.end(), out.begin());
    };
}

} // namespace ritz
