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

#include "ritz/pwl.hpp"

#include "ritz/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ritz {

void validate(const Breakpoints1D& bp)
{
    if (bp.knots.empty()) {
        throw ShapeError("breakpoints need at least one knot");
    }
    if (bp.knots.size() != bp.values.size()) {
        throw ShapeError("knots and values differ in length");
    }
    for (std::size_t i = 1; i < bp.knots.size(); ++i) {
        if (!(bp.knots[i - 1] < bp.knots[i])) {
            throw ShapeError("knots must be strictly increasing (duplicate or unsorted knot)");
        }
    }
}

double pwl_value(const Breakpoints1D& bp, double x)
{
    validate(bp);
    const auto& k = bp.knots;
    const auto& v = bp.values;
    if (x <= k.front()) {
        return v.front() + bp.left_slope * (x - k.front());
    }
    if (x >= k.back()) {
        return v.back() + bp.right_slope * (x - k.back());
    }
    const auto it = std::upper_bound(k.begin(), k.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - k.begin());
    const double t = (x - k[i - 1]) / (k[i] - k[i - 1]);
    return v[i - 1] + t * (v[i] - v[i - 1]);
}

double pwl_slope(const Breakpoints1D& bp, double x)
{
    validate(bp);
    const auto& k = bp.knots;
    const auto& v = bp.values;
    if (x < k.front()) {
        return bp.left_slope;
    }
    if (x >= k.back()) {
        return bp.right_slope;
    }
    const auto it = std::upper_bound(k.begin(), k.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - k.begin());
    return (v[i] - v[i - 1]) / (k[i] - k[i - 1]);
}

NetworkParams pwl_to_network_1d(const Breakpoints1D& bp)
{
    validate(bp);
    const std::size_t k = bp.knots.size();

    // piece slopes: m[0] = left of first knot, m[i] = on [knot_{i-1}, knot_i],
    // m[k] = right of last knot
    std::vector<double> slopes(k + 1);
    slopes[0] = bp.left_slope;
    for (std::size_t i = 1; i < k; ++i) {
        slopes[i] = (bp.values[i] - bp.values[i - 1]) / (bp.knots[i] - bp.knots[i - 1]);
    }
    slopes[k] = bp.right_slope;

    // units: ρ(knot_0 − x) carries the left extrapolation, ρ(x − knot_i) carry
    // the slope jumps; the unit at knot_0 also absorbs the left slope so the
    // affine carrier is just the bias value[0]
    Layer hidden;
    hidden.in = 1;
    Layer out;
    out.in = static_cast<int>(k + 1);
    out.bias = {bp.values.front()};

    hidden.weight.push_back(-1.0);
    hidden.bias.push_back(bp.knots.front());
    out.weight.push_back(-bp.left_slope);
    for (std::size_t i = 0; i < k; ++i) {
        hidden.weight.push_back(1.0);
        hidden.bias.push_back(-bp.knots[i]);
        const double jump = slopes[i + 1] - slopes[i];
        out.weight.push_back(i == 0 ? bp.left_slope + jump : jump);
    }

    return NetworkParams({std::move(hidden), std::move(out)});
}

NetworkParams affine_network(std::span<const double> slope, double intercept)
{
    if (slope.empty()) {
        throw ShapeError("affine network needs at least one input");
    }
    Layer layer;
    layer.in = static_cast<int>(slope.size());
    layer.weight.assign(slope.begin(), slope.end());
    layer.bias = {intercept};
    return NetworkParams({std::move(layer)});
}

namespace {

    // Raw layer-list helpers; intermediate stacks may have several outputs,
    // which NetworkParams deliberately rejects, so composition happens on
    // std::vector<Layer> and only the final scalar net is validated.

    int out_dim(const std::vector<Layer>& layers) { return layers.back().rows(); }

    /// Appends an identity layer (y ↦ ρ(y) − ρ(−y) per output), raising the
    /// depth by one without changing the function.
    std::vector<Layer> raise_depth(std::vector<Layer> layers)
    {
        const int m = out_dim(layers);
        Layer& last = layers.back();

        Layer expand;
        expand.in = last.in;
        expand.weight.resize(static_cast<std::size_t>(2 * m) * last.in);
        expand.bias.resize(2 * m);
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < last.in; ++c) {
                expand.w(r, c) = last.w(r, c);
                expand.w(m + r, c) = -last.w(r, c);
            }
            expand.bias[r] = last.bias[r];
            expand.bias[m + r] = -last.bias[r];
        }

        Layer collapse;
        collapse.in = 2 * m;
        collapse.weight.assign(static_cast<std::size_t>(m) * 2 * m, 0.0);
        collapse.bias.assign(m, 0.0);
        for (int r = 0; r < m; ++r) {
            collapse.w(r, r) = 1.0;
            collapse.w(r, m + r) = -1.0;
        }

        layers.back() = std::move(expand);
        layers.push_back(std::move(collapse));
        return layers;
    }

    /// Block-diagonal stack of two equal-depth networks over a shared input.
    std::vector<Layer> stack_parallel(const std::vector<Layer>& a, const std::vector<Layer>& b)
    {
        std::vector<Layer> stacked;
        stacked.reserve(a.size());
        for (std::size_t l = 0; l < a.size(); ++l) {
            const Layer& la = a[l];
            const Layer& lb = b[l];
            Layer s;
            if (l == 0) {
                s.in = la.in;
                s.weight.assign(static_cast<std::size_t>(la.rows() + lb.rows()) * s.in, 0.0);
                for (int r = 0; r < la.rows(); ++r) {
                    for (int c = 0; c < s.in; ++c) {
                        s.w(r, c) = la.w(r, c);
                    }
                }
                for (int r = 0; r < lb.rows(); ++r) {
                    for (int c = 0; c < s.in; ++c) {
                        s.w(la.rows() + r, c) = lb.w(r, c);
                    }
                }
            } else {
                s.in = la.in + lb.in;
                s.weight.assign(static_cast<std::size_t>(la.rows() + lb.rows()) * s.in, 0.0);
                for (int r = 0; r < la.rows(); ++r) {
                    for (int c = 0; c < la.in; ++c) {
                        s.w(r, c) = la.w(r, c);
                    }
                }
                for (int r = 0; r < lb.rows(); ++r) {
                    for (int c = 0; c < lb.in; ++c) {
                        s.w(la.rows() + r, la.in + c) = lb.w(r, c);
                    }
                }
            }
            s.bias = la.bias;
            s.bias.insert(s.bias.end(), lb.bias.begin(), lb.bias.end());
            stacked.push_back(std::move(s));
        }
        return stacked;
    }

    /// max(a, b) of two equal-depth scalar networks; depth grows by exactly 1.
    std::vector<Layer> max_pair(const std::vector<Layer>& a, const std::vector<Layer>& b)
    {
        std::vector<Layer> stacked = stack_parallel(a, b);
        const Layer& last = stacked.back(); // 2 outputs: y_a, y_b

        // hidden units: ρ(±(y_a−y_b)) give the |y_a−y_b| part, ρ(±(y_a+y_b))
        // pass the sum through
        Layer gadget;
        gadget.in = last.in;
        gadget.weight.assign(static_cast<std::size_t>(4) * last.in, 0.0);
        gadget.bias.assign(4, 0.0);
        for (int c = 0; c < last.in; ++c) {
            const double wa = last.w(0, c);
            const double wb = last.w(1, c);
            gadget.w(0, c) = wa - wb;
            gadget.w(1, c) = wb - wa;
            gadget.w(2, c) = wa + wb;
            gadget.w(3, c) = -(wa + wb);
        }
        const double ba = last.bias[0];
        const double bb = last.bias[1];
        gadget.bias[0] = ba - bb;
        gadget.bias[1] = bb - ba;
        gadget.bias[2] = ba + bb;
        gadget.bias[3] = -(ba + bb);

        Layer combine;
        combine.in = 4;
        combine.weight = {0.5, 0.5, 0.5, -0.5};
        combine.bias = {0.0};

        stacked.back() = std::move(gadget);
        stacked.push_back(std::move(combine));
        return stacked;
    }

    NetworkParams max_or_min(std::span<const NetworkParams> nets, double sign)
    {
        if (nets.empty()) {
            throw ShapeError("max/min needs at least one network");
        }
        const int input_dim = nets.front().input_dim();
        int target_depth = 0;
        for (const NetworkParams& net : nets) {
            if (net.input_dim() != input_dim) {
                throw ShapeError("max/min inputs have mixed input dimensions");
            }
            target_depth = std::max(target_depth, net.depth());
        }
        if (nets.size() == 1) {
            return nets.front();
        }

        // align all operands to the common depth, then reduce by a balanced
        // tree; every level adds exactly one layer
        std::vector<std::vector<Layer>> level;
        level.reserve(nets.size());
        for (const NetworkParams& net : nets) {
            std::vector<Layer> layers = net.layers();
            if (sign < 0.0) {
                for (double& w : layers.back().weight) {
                    w = -w;
                }
                layers.back().bias[0] = -layers.back().bias[0];
            }
            while (static_cast<int>(layers.size()) < target_depth) {
                layers = raise_depth(std::move(layers));
            }
            level.push_back(std::move(layers));
        }

        while (level.size() > 1) {
            std::vector<std::vector<Layer>> next;
            next.reserve((level.size() + 1) / 2);
            for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
                next.push_back(max_pair(level[i], level[i + 1]));
            }
            if (level.size() % 2 == 1) {
                // keep the straggler at the level's depth
                next.push_back(raise_depth(std::move(level.back())));
            }
            level.swap(next);
        }

        std::vector<Layer> result = std::move(level.front());
        if (sign < 0.0) {
            for (double& w : result.back().weight) {
                w = -w;
            }
            result.back().bias[0] = -result.back().bias[0];
        }
        return NetworkParams(std::move(result));
    }

} // namespace

NetworkParams relu_max(std::span<const NetworkParams> nets)
{
    return max_or_min(nets, 1.0);
}

NetworkParams relu_min(std::span<const NetworkParams> nets)
{
    // min(f_i) = −max(−f_i)
    return max_or_min(nets, -1.0);
}

Breakpoints1D hat_breakpoints(double lo, double mid, double hi, double peak)
{
    Breakpoints1D bp;
    bp.knots = {lo, mid, hi};
    bp.values = {0.0, peak, 0.0};
    return bp;
}

} // namespace ritz
