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

#ifndef RITZ_PWL_HPP
#define RITZ_PWL_HPP

#include "ritz/net.hpp"

#include <span>
#include <vector>

namespace ritz {

/// Continuous piecewise-linear function on the real line: the unique CPWL
/// interpolant of (knots, values) with the given extrapolation slopes.
struct Breakpoints1D {
    std::vector<double> knots;  // strictly increasing
    std::vector<double> values; // same length
    double left_slope = 0.0;
    double right_slope = 0.0;
};

void validate(const Breakpoints1D& bp);
double pwl_value(const Breakpoints1D& bp, double x);
/// Slope of the piece containing x (right-continuous choice at knots).
double pwl_slope(const Breakpoints1D& bp, double x);

/// Exact depth-2 network for a 1-D CPWL function: an affine carrier through
/// the first knot plus one ReLU unit per slope jump. Depth 2 attains the
/// representation bound for d = 1.
NetworkParams pwl_to_network_1d(const Breakpoints1D& bp);

/// Depth-1 network computing the affine map slope·x + intercept; the raw
/// material for max/min trees.
NetworkParams affine_network(std::span<const double> slope, double intercept);

/// Network computing the exact pointwise maximum of the realisations, built
/// from a balanced binary tree of the gadget
///   max(a,b) = (a+b)/2 + (ρ(a−b) + ρ(b−a))/2.
/// Inputs are first aligned to the common depth D = max_i depth(net_i) with
/// identity layers, so the resulting depth is exactly D + ⌈log₂ k⌉.
NetworkParams relu_max(std::span<const NetworkParams> nets);
NetworkParams relu_min(std::span<const NetworkParams> nets);

/// Hat function fixture: peak `peak` at the middle knot, support [lo, hi].
Breakpoints1D hat_breakpoints(double lo, double mid, double hi, double peak);

} // namespace ritz

#endif // RITZ_PWL_HPP
