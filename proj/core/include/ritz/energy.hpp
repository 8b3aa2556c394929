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

#ifndef RITZ_ENERGY_HPP
#define RITZ_ENERGY_HPP

#include "ritz/autodiff.hpp"
#include "ritz/geometry.hpp"
#include "ritz/net.hpp"

#include <cstdint>
#include <functional>
#include <span>

namespace ritz {

using ScalarField = std::function<double(std::span<const double>)>;
using VectorField = std::function<void(std::span<const double>, std::span<double>)>;

/// The penalized variational energy being estimated:
///
///   (1/p) ∫_Ω |∇u|^p dx − ∫_Ω f·u dx + λ·‖u‖²_{L^p(∂Ω)}
///
/// with the boundary term realized as the squared L^p(∂Ω) norm, which for
/// p = 2 is exactly λ·∫_∂Ω u² ds. λ plays the role of the growing penalty
/// index; p = 2 is the Poisson case.
class EnergySpec {
public:
    EnergySpec(Domain domain, double exponent, double penalty_weight, ScalarField source);

    const Domain& domain() const { return domain_; }
    double exponent() const { return exponent_; }
    double penalty_weight() const { return penalty_weight_; }
    const ScalarField& source() const { return source_; }

    /// Same functional with a different penalty weight (ladder rungs).
    EnergySpec with_penalty(double penalty_weight) const;

private:
    Domain domain_;
    double exponent_;
    double penalty_weight_;
    ScalarField source_;
};

struct EnergyEstimate {
    double interior = 0.0;
    double penalty = 0.0;
    double total = 0.0; // interior + penalty, in that order
    std::size_t n_interior = 0;
    std::size_t m_boundary = 0;
    std::uint64_t seed = 0;
};

struct EnergyRefs {
    Ref interior;
    Ref penalty;
    Ref total;
};

/// Monte-Carlo estimate of the interior term over the given batch, recorded
/// on the tape: weight · Σ_i [ (1/p)|∇u(x_i)|^p − f(x_i)·u(x_i) ].
Ref record_interior(Tape& tape, const ParamBinding& binding, const EnergySpec& spec,
                    const SampleBatch& batch);

/// Boundary penalty over the given batch, recorded on the tape:
/// λ · (weight · Σ_j |u(s_j)|^p)^(2/p); the p = 2 case reduces to
/// λ · weight · Σ_j u(s_j)² with λ applied as the single final factor, so the
/// estimate is exactly linear in λ.
Ref record_penalty(Tape& tape, const ParamBinding& binding, const EnergySpec& spec,
                   const SampleBatch& batch);

/// Fresh sub-seeded batches + both terms; refs optionally returned for
/// gradient extraction.
EnergyEstimate record_total(Tape& tape, const ParamBinding& binding, const EnergySpec& spec,
                            std::size_t n_interior, std::size_t m_boundary, std::uint64_t seed,
                            EnergyRefs* refs = nullptr);

// Tape-free conveniences with the same semantics.
double estimate_interior(const NetworkParams& params, const EnergySpec& spec,
                         const SampleBatch& batch);
double estimate_penalty(const NetworkParams& params, const EnergySpec& spec,
                        const SampleBatch& batch);
EnergyEstimate estimate_total(const NetworkParams& params, const EnergySpec& spec,
                              std::size_t n_interior, std::size_t m_boundary, std::uint64_t seed);

/// Deterministic midpoint-rule evaluation of the same functional for an
/// arbitrary (u, ∇u) pair; validation/metrics only, never used in training.
/// Requires dim <= 3 and resolution >= 64 nodes per axis.
double quadrature_energy(const ScalarField& u, const VectorField& grad_u, const EnergySpec& spec,
                         int resolution);

/// Adapters exposing a network as plain fields.
ScalarField network_field(const NetworkParams& params);
VectorField network_gradient_field(const NetworkParams& params);

} // namespace ritz

#endif // RITZ_ENERGY_HPP
