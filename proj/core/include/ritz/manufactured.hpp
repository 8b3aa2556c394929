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

#ifndef RITZ_MANUFACTURED_HPP
#define RITZ_MANUFACTURED_HPP

#include "ritz/energy.hpp"
#include "ritz/geometry.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ritz {

/// Benchmark problem with a known exact solution. `source` defines the
/// energy's load term; `energy_min` is the analytic minimal energy where
/// known. The representability fixture has no PDE behind it (has_pde =
/// false): it exists for exact-representation and metric tests only.
struct ManufacturedCase {
    std::string name;
    std::string description;
    Domain domain = Domain::interval(0.0, 1.0);
    double p = 2.0;
    ScalarField source;
    ScalarField solution;
    VectorField solution_grad;
    std::optional<double> energy_min;
    bool has_pde = true;
};

/// All built-in cases:
///   poisson_1d_sine   -u'' = pi^2 sin(pi x) on (0,1)
///   poisson_1d_pwl    CPWL interpolant of sin(pi x) on 17 uniform knots
///   poisson_cube_d    product sine on the unit square
///   poisson_ball      f = 1 on the unit disk
///   plaplace_1d       p = 4, f = 1 on (-1,1)
const std::vector<ManufacturedCase>& manufactured_registry();

/// Lookup by name; the error message lists the registry.
const ManufacturedCase& find_case(std::string_view name);

/// Energy functional of a case at a given penalty weight.
EnergySpec case_spec(const ManufacturedCase& c, double penalty_weight);

/// Max strong-form residual |-div(|grad u*|^{p-2} grad u*) - f| over random
/// interior points, with the divergence taken by central differences of the
/// analytic flux.
double max_pde_residual(const ManufacturedCase& c, std::size_t n_points, std::uint64_t seed,
                        double h = 1e-4);

/// Max |u*| over random boundary points.
double max_boundary_value(const ManufacturedCase& c, std::size_t m_points, std::uint64_t seed);

} // namespace ritz

#endif // RITZ_MANUFACTURED_HPP
