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

#ifndef RITZ_QUADRATURE_HPP
#define RITZ_QUADRATURE_HPP

#include "ritz/geometry.hpp"

#include <functional>
#include <span>

namespace ritz {

using QuadratureFn = std::function<void(std::span<const double> x, double weight)>;

/// Composite midpoint rule over the domain interior, `resolution` nodes per
/// axis. Balls use polar/spherical product grids so the weights integrate
/// the exact measure. Supports dim <= 3.
void for_each_interior_node(const Domain& domain, int resolution, const QuadratureFn& fn);

/// Midpoint rule over the boundary (face grids for cubes, angular grids for
/// balls, the two endpoints for an interval).
void for_each_boundary_node(const Domain& domain, int resolution, const QuadratureFn& fn);

/// Tensor midpoint rule over an axis-aligned box given by (lo, hi) per axis.
void for_each_box_node(std::span<const double> lo, std::span<const double> hi,
                       std::span<const int> resolution, const QuadratureFn& fn);

} // namespace ritz

#endif // RITZ_QUADRATURE_HPP
