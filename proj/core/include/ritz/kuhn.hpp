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

#ifndef RITZ_KUHN_HPP
#define RITZ_KUHN_HPP

#include "ritz/energy.hpp" // ScalarField / VectorField
#include "ritz/pwl.hpp"

#include <span>
#include <utility>
#include <vector>

namespace ritz {

/// Axis-aligned box.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
    int dim() const { return static_cast<int>(lo.size()); }
};

/// CPWL interpolant on the Kuhn triangulation of a uniform grid of spacing
/// delta. The grid covers the sampled function's support box inflated by one
/// cell per side; each cell splits into d! simplices indexed by the
/// descending order of the local coordinates, so point location is a
/// coordinate sort. The interpolant is zero outside the grid and agrees with
/// the sampled function at every vertex exactly.
class CpwlInterpolant {
public:
    int dim() const { return static_cast<int>(origin_.size()); }
    double delta() const { return delta_; }

    /// Grid bounding box (the inflated support box).
    Box grid_box() const;

    double value(std::span<const double> x) const;

    /// Piecewise-constant gradient of the simplex containing x (a.e.).
    void gradient(std::span<const double> x, std::span<double> out) const;

    std::size_t vertex_count() const { return values_.size(); }
    std::vector<double> vertex_position(std::span<const std::size_t> index) const;
    double vertex_value(std::span<const std::size_t> index) const;
    const std::vector<std::size_t>& points_per_axis() const { return npts_; }

    /// d = 1 interpolants convert losslessly to breakpoint form (and from
    /// there to an exact depth-2 network).
    Breakpoints1D to_breakpoints() const;

    friend CpwlInterpolant kuhn_interpolant(const ScalarField& f, const Box& support, double delta);

private:
    std::vector<double> origin_;
    double delta_ = 0.0;
    std::vector<std::size_t> npts_; // vertices per axis
    std::vector<double> values_;    // fortran-order flat vertex values

    std::size_t flat_index(std::span<const std::size_t> index) const;
};

/// Samples f on the inflated grid and returns its Kuhn interpolant.
CpwlInterpolant kuhn_interpolant(const ScalarField& f, const Box& support, double delta);

/// Midpoint-quadrature W^{1,p} distance between the interpolant and (f, ∇f)
/// over the grid box: returns (‖s−f‖_{L^p}, ‖s−f‖_{W^{1,p}}), both as p-th
/// roots; p = infinity is handled as the max over quadrature nodes. The grid
/// must resolve the triangulation: refuses spacing coarser than delta/4.
std::pair<double, double> sobolev_error(const ScalarField& f, const VectorField& grad_f,
                                        const CpwlInterpolant& interp, double p,
                                        int resolution_per_axis);

/// Smooth compactly supported bump, normalized to 1 at the origin:
/// exp(1 − 1/(1−|x|²)) on |x| < 1, zero outside.
double standard_bump(std::span<const double> x);
void standard_bump_gradient(std::span<const double> x, std::span<double> out);
Box unit_ball_box(int dim);

} // namespace ritz

#endif // RITZ_KUHN_HPP
