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

#ifndef RITZ_AUTODIFF_HPP
#define RITZ_AUTODIFF_HPP

#include "ritz/errors.hpp"
#include "ritz/net.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace ritz {

/// Index of a record on the tape.
struct Ref {
    std::uint32_t id = 0;
};

/// Scalar value paired with its directional derivatives with respect to the
/// network input; the pair lives on the tape so parameter gradients can flow
/// through both slots.
struct DualValue {
    double primal = 0.0;
    std::vector<double> tangent;
    Ref node;
};

/// Reverse-mode tape over scalars that each carry a forward-mode tangent
/// vector of fixed dimension (the network input dimension). Recording a loss
/// through these primitives and sweeping once backwards yields exact
/// parameter gradients of expressions that contain the input gradient of the
/// network; activation masks are treated as locally constant, which is exact
/// almost everywhere for piecewise-linear realisations.
///
/// Adjoints are duals as well: each record owns a primal adjoint and one
/// adjoint per tangent slot. Unary f contributes
///   a_bar     += z_bar * f'(a) + sum_k ztan_bar_k * f''(a) * atan_k
///   atan_bar_k += ztan_bar_k * f'(a)
/// and the binary rules below follow the same pattern.
class Tape {
public:
    explicit Tape(int tangent_dim = 0) : dim_(tangent_dim) {}

    int tangent_dim() const { return dim_; }
    std::size_t size() const { return nodes_.size(); }

    /// Drops all records but keeps capacity (one tape is reused across
    /// training steps).
    void clear()
    {
        nodes_.clear();
        tan_.clear();
    }

    // ----- recording -------------------------------------------------------

    Ref leaf(double value) { return push(Op::Leaf, 0, 0, 0, 0.0, value); }

    /// Leaf representing the input coordinate `axis`: tangent = e_axis.
    Ref input(double value, int axis)
    {
        if (axis < 0 || axis >= dim_) {
            throw ShapeError("input axis outside the tape's tangent dimension");
        }
        Ref r = push(Op::Leaf, 0, 0, 0, 0.0, value);
        tan_[static_cast<std::size_t>(r.id) * dim_ + axis] = 1.0;
        return r;
    }

    Ref add(Ref a, Ref b)
    {
        Ref r = push(Op::Add, a.id, b.id, 0, 0.0, val(a) + val(b));
        double* t = tan(r);
        const double* ta = tan(a);
        const double* tb = tan(b);
        for (int k = 0; k < dim_; ++k) {
            t[k] = ta[k] + tb[k];
        }
        return r;
    }

    Ref sub(Ref a, Ref b)
    {
        Ref r = push(Op::Sub, a.id, b.id, 0, 0.0, val(a) - val(b));
        double* t = tan(r);
        const double* ta = tan(a);
        const double* tb = tan(b);
        for (int k = 0; k < dim_; ++k) {
            t[k] = ta[k] - tb[k];
        }
        return r;
    }

    Ref mul(Ref a, Ref b)
    {
        const double va = val(a);
        const double vb = val(b);
        Ref r = push(Op::Mul, a.id, b.id, 0, 0.0, va * vb);
        double* t = tan(r);
        const double* ta = tan(a);
        const double* tb = tan(b);
        for (int k = 0; k < dim_; ++k) {
            t[k] = ta[k] * vb + va * tb[k];
        }
        return r;
    }

    Ref div(Ref a, Ref b)
    {
        const double va = val(a);
        const double inv = 1.0 / val(b);
        Ref r = push(Op::Div, a.id, b.id, 0, 0.0, va * inv);
        double* t = tan(r);
        const double* ta = tan(a);
        const double* tb = tan(b);
        const double v = nodes_[r.id].val;
        for (int k = 0; k < dim_; ++k) {
            t[k] = (ta[k] - v * tb[k]) * inv;
        }
        return r;
    }

    Ref neg(Ref a)
    {
        Ref r = push(Op::Neg, a.id, 0, 0, 0.0, -val(a));
        double* t = tan(r);
        const double* ta = tan(a);
        for (int k = 0; k < dim_; ++k) {
            t[k] = -ta[k];
        }
        return r;
    }

    Ref add_imm(Ref a, double c)
    {
        Ref r = push(Op::AddImm, a.id, 0, 0, c, val(a) + c);
        double* t = tan(r);
        const double* ta = tan(a);
        for (int k = 0; k < dim_; ++k) {
            t[k] = ta[k];
        }
        return r;
    }

    Ref mul_imm(Ref a, double c)
    {
        Ref r = push(Op::MulImm, a.id, 0, 0, c, c * val(a));
        double* t = tan(r);
        const double* ta = tan(a);
        for (int k = 0; k < dim_; ++k) {
            t[k] = c * ta[k];
        }
        return r;
    }

    Ref relu(Ref a)
    {
        const double va = val(a);
        const double m = va > 0.0 ? 1.0 : 0.0;
        Ref r = push(Op::Relu, a.id, 0, 0, 0.0, m * va);
        double* t = tan(r);
        const double* ta = tan(a);
        for (int k = 0; k < dim_; ++k) {
            t[k] = m * ta[k];
        }
        return r;
    }

    /// |a|^exponent with the sign-aware derivative; derivative at 0 is 0.
    Ref pow_abs(Ref a, double exponent)
    {
        const double va = val(a);
        const double mag = std::abs(va);
        const double v = (exponent == 1.0) ? mag : std::pow(mag, exponent);
        Ref r = push(Op::PowAbs, a.id, 0, 0, exponent, v);
        const double g = pow_abs_d1(va, exponent);
        double* t = tan(r);
        const double* ta = tan(a);
        for (int k = 0; k < dim_; ++k) {
            t[k] = g * ta[k];
        }
        return r;
    }

    /// sum_{i<n} value(w0+i) * value(x0+i) for two contiguous node ranges.
    /// The w-range must carry zero tangents (parameter leaves); this is the
    /// fused affine-layer primitive and the reason the tape stays fast.
    Ref dot_param(Ref w0, Ref x0, std::uint32_t n)
    {
        double acc = 0.0;
        const TapeNode* wn = nodes_.data() + w0.id;
        const TapeNode* xn = nodes_.data() + x0.id;
        for (std::uint32_t i = 0; i < n; ++i) {
            acc += wn[i].val * xn[i].val;
        }
        Ref r = push(Op::DotParam, w0.id, x0.id, n, 0.0, acc);
        if (dim_ > 0) {
            double* t = tan(r);
            const double* tx = tan_.data() + static_cast<std::size_t>(x0.id) * dim_;
            wn = nodes_.data() + w0.id; // push may have reallocated
            for (std::uint32_t i = 0; i < n; ++i) {
                const double w = wn[i].val;
                const double* txi = tx + static_cast<std::size_t>(i) * dim_;
                for (int k = 0; k < dim_; ++k) {
                    t[k] += w * txi[k];
                }
            }
        }
        return r;
    }

    /// (sum_k tangent(a)_k^2)^(p/2), the |grad u|^p integrand kernel. The
    /// result's own tangent slots are zero: nothing downstream may consume
    /// input tangents of this record.
    Ref tangent_norm_pow(Ref a, double p)
    {
        const double* ta = tan(a);
        double s = 0.0;
        for (int k = 0; k < dim_; ++k) {
            s += ta[k] * ta[k];
        }
        const double v = (p == 2.0) ? s : std::pow(s, 0.5 * p);
        return push(Op::TangentNormPow, a.id, 0, 0, p, v);
    }

    // ----- inspection ------------------------------------------------------

    double value(Ref r) const { return nodes_[r.id].val; }

    double tangent(Ref r, int k) const { return tan_[static_cast<std::size_t>(r.id) * dim_ + k]; }

    // ----- reverse sweep ---------------------------------------------------

    /// One reverse pass seeding d(root)/d(root) = 1. Adjoints of earlier
    /// sweeps are discarded.
    void backward(Ref root);

    double adjoint(Ref r) const { return adj_[r.id]; }
    double tangent_adjoint(Ref r, int k) const
    {
        return tadj_[static_cast<std::size_t>(r.id) * dim_ + k];
    }

private:
    enum class Op : std::uint8_t {
        Leaf,
        Add,
        Sub,
        Mul,
        Div,
        Neg,
        AddImm,
        MulImm,
        Relu,
        PowAbs,
        DotParam,
        TangentNormPow,
    };

    struct TapeNode {
        Op op;
        std::uint32_t a;
        std::uint32_t b;
        std::uint32_t n;
        double aux;
        double val;
    };

    static double pow_abs_d1(double x, double c)
    {
        if (x == 0.0) {
            return 0.0;
        }
        const double s = x > 0.0 ? 1.0 : -1.0;
        if (c == 1.0) {
            return s;
        }
        return c * std::pow(std::abs(x), c - 1.0) * s;
    }

    static double pow_abs_d2(double x, double c)
    {
        if (x == 0.0 || c == 1.0) {
            return 0.0;
        }
        return c * (c - 1.0) * std::pow(std::abs(x), c - 2.0);
    }

    Ref push(Op op, std::uint32_t a, std::uint32_t b, std::uint32_t n, double aux, double v)
    {
        if (!std::isfinite(v)) {
            throw NumericError("non-finite value at tape record " + std::to_string(nodes_.size()),
                               nodes_.size());
        }
        const std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back(TapeNode{op, a, b, n, aux, v});
        if (dim_ > 0) {
            tan_.resize(tan_.size() + dim_, 0.0);
        }
        return Ref{id};
    }

    double val(Ref r) const { return nodes_[r.id].val; }
    double* tan(Ref r) { return tan_.data() + static_cast<std::size_t>(r.id) * dim_; }
    const double* tan(Ref r) const { return tan_.data() + static_cast<std::size_t>(r.id) * dim_; }

    std::vector<TapeNode> nodes_;
    std::vector<double> tan_;
    std::vector<double> adj_;
    std::vector<double> tadj_;
    int dim_;
};

/// Maps a parameter tuple onto a contiguous range of tape leaves, in the
/// canonical flat order (per layer: weights row-major, then bias).
struct ParamBinding {
    std::uint32_t first = 0;
    std::size_t count = 0;
    const NetworkParams* params = nullptr;
};

ParamBinding bind_params(Tape& tape, const NetworkParams& params);

/// Records the network forward pass; input leaves carry unit tangents, so
/// the returned record's tangent slots hold the exact input gradient.
DualValue forward_with_input_tangents(Tape& tape, const ParamBinding& binding,
                                      std::span<const double> x);

/// Same forward recording with zero input tangents (boundary terms need only
/// the value).
Ref record_forward(Tape& tape, const ParamBinding& binding, std::span<const double> x);

/// Reverse sweep from `loss` and extraction of d loss / d theta in the flat
/// parameter order. Throws NumericError when a gradient entry is not finite.
std::vector<double> grad_params(Tape& tape, Ref loss, const ParamBinding& binding);

} // namespace ritz

#endif // RITZ_AUTODIFF_HPP
