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

#include "ritz/kuhn.hpp"

#include "ritz/errors.hpp"
#include "ritz/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace ritz {

Box CpwlInterpolant::grid_box() const
{
    Box box;
    const int d = dim();
    box.lo = origin_;
    box.hi.resize(d);
    for (int k = 0; k < d; ++k) {
        box.hi[k] = origin_[k] + delta_ * static_cast<double>(npts_[k] - 1);
    }
    return box;
}

std::size_t CpwlInterpolant::flat_index(std::span<const std::size_t> index) const
{
    std::size_t flat = 0;
    std::size_t stride = 1;
    for (std::size_t k = 0; k < index.size(); ++k) {
        flat += index[k] * stride;
        stride *= npts_[k];
    }
    return flat;
}

std::vector<double> CpwlInterpolant::vertex_position(std::span<const std::size_t> index) const
{
    std::vector<double> x(dim());
    for (int k = 0; k < dim(); ++k) {
        x[k] = origin_[k] + delta_ * static_cast<double>(index[k]);
    }
    return x;
}

double CpwlInterpolant::vertex_value(std::span<const std::size_t> index) const
{
    return values_[flat_index(index)];
}

namespace {

    constexpr int kMaxDim = 8;

    struct CellLocation {
        std::array<std::size_t, kMaxDim> cell;
        std::array<double, kMaxDim> local; // in [0,1] per axis
        bool outside = false;
    };

    CellLocation locate(std::span<const double> origin, double delta,
                        std::span<const std::size_t> npts, std::span<const double> x)
    {
        CellLocation loc;
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double t = (x[k] - origin[k]) / delta;
            const double cells = static_cast<double>(npts[k] - 1);
            if (t < 0.0 || t > cells) {
                loc.outside = true;
                return loc;
            }
            double c = std::floor(t);
            if (c >= cells) {
                c = cells - 1.0; // top face belongs to the last cell
            }
            loc.cell[k] = static_cast<std::size_t>(c);
            loc.local[k] = t - c;
        }
        return loc;
    }

} // namespace

double CpwlInterpolant::value(std::span<const double> x) const
{
    const int d = dim();
    if (static_cast<int>(x.size()) != d) {
        throw ShapeError("interpolant input has the wrong dimension");
    }
    const CellLocation loc = locate(origin_, delta_, npts_, x);
    if (loc.outside) {
        return 0.0;
    }

    // simplex by descending local coordinate; ties broken by axis for
    // determinism (any tie order gives the same value by continuity)
    std::array<int, kMaxDim> order;
    for (int k = 0; k < d; ++k) {
        order[k] = k;
    }
    std::sort(order.begin(), order.begin() + d,
              [&](int a, int b) { return loc.local[a] != loc.local[b] ? loc.local[a] > loc.local[b]
                                                                      : a < b; });

    // barycentric walk: v_0 = cell corner, v_{j+1} = v_j + e_{order[j]}
    std::array<std::size_t, kMaxDim> vertex;
    for (int k = 0; k < d; ++k) {
        vertex[k] = loc.cell[k];
    }
    double t_prev = 1.0;
    double result = 0.0;
    for (int j = 0; j <= d; ++j) {
        const double t_here = (j < d) ? loc.local[order[j]] : 0.0;
        const double bary = t_prev - t_here;
        result += bary * values_[flat_index({vertex.data(), static_cast<std::size_t>(d)})];
        if (j < d) {
            vertex[order[j]] += 1;
            t_prev = t_here;
        }
    }
    return result;
}

void CpwlInterpolant::gradient(std::span<const double> x, std::span<double> out) const
{
    const int d = dim();
    if (static_cast<int>(x.size()) != d || static_cast<int>(out.size()) != d) {
        throw ShapeError("interpolant gradient has the wrong dimension");
    }
    const CellLocation loc = locate(origin_, delta_, npts_, x);
    if (loc.outside) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    std::array<int, kMaxDim> order;
    for (int k = 0; k < d; ++k) {
        order[k] = k;
    }
    std::sort(order.begin(), order.begin() + d,
              [&](int a, int b) { return loc.local[a] != loc.local[b] ? loc.local[a] > loc.local[b]
                                                                      : a < b; });

    std::array<std::size_t, kMaxDim> vertex;
    for (int k = 0; k < d; ++k) {
        vertex[k] = loc.cell[k];
    }
    double prev = values_[flat_index({vertex.data(), static_cast<std::size_t>(d)})];
    for (int j = 0; j < d; ++j) {
        vertex[order[j]] += 1;
        const double next = values_[flat_index({vertex.data(), static_cast<std::size_t>(d)})];
        out[order[j]] = (next - prev) / delta_;
        prev = next;
    }
}

Breakpoints1D CpwlInterpolant::to_breakpoints() const
{
    if (dim() != 1) {
        throw ShapeError("breakpoint conversion requires a 1-D interpolant");
    }
    Breakpoints1D bp;
    bp.knots.resize(npts_[0]);
    for (std::size_t i = 0; i < npts_[0]; ++i) {
        bp.knots[i] = origin_[0] + delta_ * static_cast<double>(i);
    }
    bp.values = values_;
    bp.left_slope = 0.0;
    bp.right_slope = 0.0;
    return bp;
}

CpwlInterpolant kuhn_interpolant(const ScalarField& f, const Box& support, double delta)
{
    if (!(delta > 0.0)) {
        throw ShapeError("mesh width must be positive");
    }
    const int d = support.dim();
    if (d < 1 || d > kMaxDim || support.hi.size() != support.lo.size()) {
        throw ShapeError("support box is malformed");
    }
    for (int k = 0; k < d; ++k) {
        if (!(support.lo[k] < support.hi[k]) || !std::isfinite(support.lo[k])
            || !std::isfinite(support.hi[k])) {
            throw ShapeError("support box must be finite with lo < hi");
        }
    }

    CpwlInterpolant interp;
    interp.delta_ = delta;
    interp.origin_.resize(d);
    interp.npts_.resize(d);
    std::size_t total = 1;
    for (int k = 0; k < d; ++k) {
        // inflate by one cell so the outermost vertices sit outside the
        // support and carry exact zeros
        interp.origin_[k] = support.lo[k] - delta;
        const double extent = support.hi[k] - support.lo[k] + 2.0 * delta;
        const std::size_t cells = static_cast<std::size_t>(std::ceil(extent / delta - 1e-12));
        interp.npts_[k] = cells + 1;
        total *= interp.npts_[k];
    }

    interp.values_.resize(total);
    std::vector<std::size_t> index(d, 0);
    std::vector<double> x(d);
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (int k = 0; k < d; ++k) {
            x[k] = interp.origin_[k] + delta * static_cast<double>(index[k]);
        }
        interp.values_[flat] = f(x);
        for (int k = 0; k < d; ++k) {
            if (++index[k] < interp.npts_[k]) {
                break;
            }
            index[k] = 0;
        }
    }
    return interp;
}

std::pair<double, double> sobolev_error(const ScalarField& f, const VectorField& grad_f,
                                        const CpwlInterpolant& interp, double p,
                                        int resolution_per_axis)
{
    if (!(p >= 1.0)) {
        throw std::invalid_argument("Sobolev exponent must satisfy p >= 1");
    }
    const int d = interp.dim();
    if (d > 3) {
        throw ShapeError("Sobolev error supports dim <= 3");
    }
    const Box box = interp.grid_box();
    double max_extent = 0.0;
    for (int k = 0; k < d; ++k) {
        max_extent = std::max(max_extent, box.hi[k] - box.lo[k]);
    }
    if (resolution_per_axis < 1
        || max_extent / resolution_per_axis > 0.25 * interp.delta() * (1.0 + 1e-12)) {
        throw std::invalid_argument("quadrature grid coarser than delta/4 refused");
    }

    std::vector<int> res(d, resolution_per_axis);
    std::vector<double> gs(d);
    std::vector<double> gf(d);
    const bool sup_norm = std::isinf(p);

    double value_acc = 0.0;
    double grad_acc = 0.0;
    for_each_box_node(box.lo, box.hi, res, [&](std::span<const double> x, double w) {
        const double dv = std::abs(interp.value(x) - f(x));
        interp.gradient(x, gs);
        grad_f(x, gf);
        double dg2 = 0.0;
        for (int k = 0; k < d; ++k) {
            const double dk = gs[k] - gf[k];
            dg2 += dk * dk;
        }
        const double dg = std::sqrt(dg2);
        if (sup_norm) {
            value_acc = std::max(value_acc, dv);
            grad_acc = std::max(grad_acc, dg);
        } else {
            value_acc += w * std::pow(dv, p);
            grad_acc += w * std::pow(dg, p);
        }
    });

    if (sup_norm) {
        return {value_acc, std::max(value_acc, grad_acc)};
    }
    return {std::pow(value_acc, 1.0 / p), std::pow(value_acc + grad_acc, 1.0 / p)};
}

double standard_bump(std::span<const double> x)
{
    double r2 = 0.0;
    for (double v : x) {
        r2 += v * v;
    }
    if (r2 >= 1.0) {
        return 0.0;
    }
    return std::exp(1.0 - 1.0 / (1.0 - r2));
}

void standard_bump_gradient(std::span<const double> x, std::span<double> out)
{
    double r2 = 0.0;
    for (double v : x) {
        r2 += v * v;
    }
    if (r2 >= 1.0) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    const double denom = 1.0 - r2;
    const double value = std::exp(1.0 - 1.0 / denom);
    const double factor = -2.0 * value / (denom * denom);
    for (std::size_t k = 0; k < x.size(); ++k) {
        out[k] = factor * x[k];
    }
}

Box unit_ball_box(int dim)
{
    Box box;
    box.lo.assign(dim, -1.0);
    box.hi.assign(dim, 1.0);
    return box;
}

} // namespace ritz
