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

#include "ritz/autodiff.hpp"

#include <string>

namespace ritz {

void Tape::backward(Ref root)
{
    const std::size_t n = nodes_.size();
    adj_.assign(n, 0.0);
    tadj_.assign(n * static_cast<std::size_t>(dim_), 0.0);
    adj_[root.id] = 1.0;

    const int d = dim_;
    for (std::uint32_t i = root.id + 1; i-- > 0;) {
        const TapeNode& node = nodes_[i];
        const double zbar = adj_[i];
        const double* ztbar = tadj_.data() + static_cast<std::size_t>(i) * d;
        if (node.op == Op::Leaf) {
            continue;
        }
        // skip silent records: nothing flowed into this node
        bool live = zbar != 0.0;
        for (int k = 0; !live && k < d; ++k) {
            live = ztbar[k] != 0.0;
        }
        if (!live) {
            continue;
        }

        switch (node.op) {
        case Op::Add: {
            adj_[node.a] += zbar;
            adj_[node.b] += zbar;
            double* ta = tadj_.data() + static_cast<std::size_t>(node.a) * d;
            double* tb = tadj_.data() + static_cast<std::size_t>(node.b) * d;
            for (int k = 0; k < d; ++k) {
                ta[k] += ztbar[k];
                tb[k] += ztbar[k];
            }
            break;
        }
        case Op::Sub: {
            adj_[node.a] += zbar;
            adj_[node.b] -= zbar;
            double* ta = tadj_.data() + static_cast<std::size_t>(node.a) * d;
            double* tb = tadj_.data() + static_cast<std::size_t>(node.b) * d;
            for (int k = 0; k < d; ++k) {
                ta[k] += ztbar[k];
                tb[k] -= ztbar[k];
            }
            break;
        }
        case Op::Mul: {
            const double va = nodes_[node.a].val;
            const double vb = nodes_[node.b].val;
            const double* ta_in = tan_.data() + static_cast<std::size_t>(node.a) * d;
            const double* tb_in = tan_.data() + static_cast<std::size_t>(node.b) * d;
            double abar = zbar * vb;
            double bbar = zbar * va;
            double* ta = tadj_.data() + static_cast<std::size_t>(node.a) * d;
            double* tb = tadj_.data() + static_cast<std::size_t>(node.b) * d;
            for (int k = 0; k < d; ++k) {
                abar += ztbar[k] * tb_in[k];
                bbar += ztbar[k] * ta_in[k];
                ta[k] += ztbar[k] * vb;
                tb[k] += ztbar[k] * va;
            }
            adj_[node.a] += abar;
            adj_[node.b] += bbar;
            break;
        }
        case Op::Div: {
            const double va = nodes_[node.a].val;
            const double inv = 1.0 / nodes_[node.b].val;
            const double inv2 = inv * inv;
            const double* ta_in = tan_.data() + static_cast<std::size_t>(node.a) * d;
            const double* tb_in = tan_.data() + static_cast<std::size_t>(node.b) * d;
            double abar = zbar * inv;
            double bbar = -zbar * va * inv2;
            double* ta = tadj_.data() + static_cast<std::size_t>(node.a) * d;
            double* tb = tadj_.data() + static_cast<std::size_t>(node.b) * d;
            for (int k = 0; k < d; ++k) {
                abar += ztbar[k] * (-tb_in[k] * inv2);
                bbar += ztbar[k] * (-ta_in[k] * inv2 + 2.0 * va * tb_in[k] * inv2 * inv);
                ta[k] += ztbar[k] * inv;
                tb[k] += ztbar[k] * (-va * inv2);
            }
            adj_[node.a] += abar;
            adj_[node.b] += bbar;
            break;
        }
        case Op::Neg: {
            adj_[node.a] -= zbar;
            double* ta = tadj_.data() + static_cast<std::size_t>(node.a) * d;
            for (int k = 0; k < d; ++k) {
                ta[k] -= ztbar[k];
            }
            break;
        }
        case Op::AddImm: {
            adj_[node.a] += zbar;
            double* ta = tadj_.data() + static_cast<std::size_t>(node.a) * d;
            for (int k = 0; k < d; ++k) {
                ta[k] += ztbar[k];
            }
            break;
        }
        case Op::MulImm: {
            const double c = node.aux;
            adj_[node.a] += c * zbar;
            double* ta = tadj_.data() + static_cast<std::size_t>(node.a) * d;
            for (int k = 0; k < d; ++k) {
                ta[k] += c * ztbar[k];
            }
            break;
        }
        case Op::Relu: {
            const double m = nodes_[node.a].val > 0.0 ? 1.0 : 0.0;
            if (m != 0.0) {
                adj_[node.a] += zbar;
                double* ta = tadj_.data() + static_cast<std::size_t>(node.a) * d;
                for (int k = 0; k < d; ++k) {
                    ta[k] += ztbar[k];
                }
            }
            break;
        }
        case Op::PowAbs: {
            const double va = nodes_[node.a].val;
            const double g = pow_abs_d1(va, node.aux);
            const double gg = pow_abs_d2(va, node.aux);
            const double* ta_in = tan_.data() + static_cast<std::size_t>(node.a) * d;
            double abar = zbar * g;
            double* ta = tadj_.data() + static_cast<std::size_t>(node.a) * d;
            for (int k = 0; k < d; ++k) {
                abar += ztbar[k] * gg * ta_in[k];
                ta[k] += ztbar[k] * g;
            }
            adj_[node.a] += abar;
            break;
        }
        case Op::DotParam: {
            const std::uint32_t count = node.n;
            const TapeNode* wn = nodes_.data() + node.a;
            const TapeNode* xn = nodes_.data() + node.b;
            double* wbar = adj_.data() + node.a;
            double* xbar = adj_.data() + node.b;
            const double* tx_in = tan_.data() + static_cast<std::size_t>(node.b) * d;
            double* txbar = tadj_.data() + static_cast<std::size_t>(node.b) * d;
            for (std::uint32_t j = 0; j < count; ++j) {
                const double w = wn[j].val;
                const double x = xn[j].val;
                double wb = zbar * x;
                const double* txj = tx_in + static_cast<std::size_t>(j) * d;
                double* txbj = txbar + static_cast<std::size_t>(j) * d;
                for (int k = 0; k < d; ++k) {
                    wb += ztbar[k] * txj[k];
                    txbj[k] += ztbar[k] * w;
                }
                wbar[j] += wb;
                xbar[j] += zbar * w;
            }
            break;
        }
        case Op::TangentNormPow: {
            const double p = node.aux;
            const double* ta_in = tan_.data() + static_cast<std::size_t>(node.a) * d;
            double coef;
            if (p == 2.0) {
                coef = 2.0;
            } else {
                double s = 0.0;
                for (int k = 0; k < d; ++k) {
                    s += ta_in[k] * ta_in[k];
                }
                coef = s > 0.0 ? p * std::pow(s, 0.5 * p - 1.0) : 0.0;
            }
            double* ta = tadj_.data() + static_cast<std::size_t>(node.a) * d;
            for (int k = 0; k < d; ++k) {
                ta[k] += zbar * coef * ta_in[k];
            }
            break;
        }
        case Op::Leaf:
            break;
        }
    }
}

ParamBinding bind_params(Tape& tape, const NetworkParams& params)
{
    ParamBinding binding;
    binding.params = &params;
    binding.count = params.parameter_count();
    bool first_set = false;
    for (const Layer& layer : params.layers()) {
        for (double w : layer.weight) {
            Ref r = tape.leaf(w);
            if (!first_set) {
                binding.first = r.id;
                first_set = true;
            }
        }
        for (double b : layer.bias) {
            tape.leaf(b);
        }
    }
    return binding;
}

namespace {

    /// Shared forward recorder. Relies on the binding's canonical layout and
    /// on the fact that consecutively pushed records have consecutive ids, so
    /// the per-layer dot/add/relu blocks can be addressed arithmetically
    /// without scratch storage.
    Ref record_realisation(Tape& tape, const ParamBinding& binding, std::span<const double> x,
                           bool with_tangents)
    {
        const NetworkParams& params = *binding.params;
        if (static_cast<int>(x.size()) != params.input_dim()) {
            throw ShapeError("input has length " + std::to_string(x.size()) + ", expected "
                             + std::to_string(params.input_dim()));
        }

        std::uint32_t prev = 0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            Ref r = with_tangents ? tape.input(x[k], static_cast<int>(k)) : tape.leaf(x[k]);
            if (k == 0) {
                prev = r.id;
            }
        }

        std::uint32_t offset = binding.first;
        const auto& layers = params.layers();
        for (std::size_t l = 0; l < layers.size(); ++l) {
            const Layer& layer = layers[l];
            const std::uint32_t in = static_cast<std::uint32_t>(layer.in);
            const std::uint32_t out = static_cast<std::uint32_t>(layer.rows());
            const std::uint32_t w_off = offset;
            const std::uint32_t b_off = offset + in * out;
            offset = b_off + out;

            std::uint32_t dot0 = 0;
            for (std::uint32_t r = 0; r < out; ++r) {
                Ref dref = tape.dot_param(Ref{w_off + r * in}, Ref{prev}, in);
                if (r == 0) {
                    dot0 = dref.id;
                }
            }
            std::uint32_t add0 = 0;
            for (std::uint32_t r = 0; r < out; ++r) {
                Ref aref = tape.add(Ref{dot0 + r}, Ref{b_off + r});
                if (r == 0) {
                    add0 = aref.id;
                }
            }
            if (l + 1 < layers.size()) {
                std::uint32_t relu0 = 0;
                for (std::uint32_t r = 0; r < out; ++r) {
                    Ref rref = tape.relu(Ref{add0 + r});
                    if (r == 0) {
                        relu0 = rref.id;
                    }
                }
                prev = relu0;
            } else {
                prev = add0;
            }
        }
        return Ref{prev};
    }

} // namespace

DualValue forward_with_input_tangents(Tape& tape, const ParamBinding& binding,
                                      std::span<const double> x)
{
    Ref node = record_realisation(tape, binding, x, true);
    DualValue dual;
    dual.node = node;
    dual.primal = tape.value(node);
    dual.tangent.resize(tape.tangent_dim());
    for (int k = 0; k < tape.tangent_dim(); ++k) {
        dual.tangent[k] = tape.tangent(node, k);
    }
    return dual;
}

Ref record_forward(Tape& tape, const ParamBinding& binding, std::span<const double> x)
{
    return record_realisation(tape, binding, x, false);
}

std::vector<double> grad_params(Tape& tape, Ref loss, const ParamBinding& binding)
{
    tape.backward(loss);
    std::vector<double> grad(binding.count);
    for (std::size_t i = 0; i < binding.count; ++i) {
        const double g = tape.adjoint(Ref{binding.first + static_cast<std::uint32_t>(i)});
        if (!std::isfinite(g)) {
            throw NumericError("non-finite gradient for parameter " + std::to_string(i),
                               binding.first + i);
        }
        grad[i] = g;
    }
    return grad;
}

} // namespace ritz
