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

#include "ritz/net.hpp"

#include "ritz/errors.hpp"
#include "ritz/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace ritz {

NetworkParams::NetworkParams(std::vector<Layer> layers) : layers_(std::move(layers))
{
    if (layers_.empty()) {
        throw ShapeError("network needs at least one layer");
    }
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const Layer& layer = layers_[l];
        if (layer.in <= 0 || layer.rows() <= 0) {
            throw ShapeError("layer " + std::to_string(l) + " has a zero dimension");
        }
        if (layer.weight.size() != static_cast<std::size_t>(layer.in) * layer.rows()) {
            throw ShapeError("layer " + std::to_string(l) + " weight storage does not match its shape");
        }
        if (l > 0 && layers_[l - 1].rows() != layer.in) {
            throw ShapeError("layers " + std::to_string(l - 1) + " and " + std::to_string(l)
                             + " do not compose");
        }
    }
    if (layers_.back().rows() != 1) {
        throw ShapeError("output dimension must be 1");
    }
}

NetworkParams NetworkParams::zeros(const std::vector<int>& architecture)
{
    if (architecture.size() < 2) {
        throw ShapeError("architecture needs at least input and output widths");
    }
    std::vector<Layer> layers;
    layers.reserve(architecture.size() - 1);
    for (std::size_t l = 1; l < architecture.size(); ++l) {
        const int in = architecture[l - 1];
        const int out = architecture[l];
        if (in <= 0 || out <= 0) {
            throw ShapeError("architecture contains a zero-size layer");
        }
        Layer layer;
        layer.in = in;
        layer.weight.assign(static_cast<std::size_t>(in) * out, 0.0);
        layer.bias.assign(out, 0.0);
        layers.push_back(std::move(layer));
    }
    return NetworkParams(std::move(layers));
}

int NetworkParams::width() const
{
    int w = layers_.front().in;
    for (const Layer& layer : layers_) {
        w = std::max(w, layer.rows());
    }
    return w;
}

std::vector<int> NetworkParams::dims() const
{
    std::vector<int> d;
    d.reserve(layers_.size() + 1);
    d.push_back(layers_.front().in);
    for (const Layer& layer : layers_) {
        d.push_back(layer.rows());
    }
    return d;
}

std::size_t NetworkParams::parameter_count() const
{
    std::size_t n = 0;
    for (const Layer& layer : layers_) {
        n += layer.weight.size() + layer.bias.size();
    }
    return n;
}

std::vector<double> NetworkParams::to_flat() const
{
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for (const Layer& layer : layers_) {
        flat.insert(flat.end(), layer.weight.begin(), layer.weight.end());
        flat.insert(flat.end(), layer.bias.begin(), layer.bias.end());
    }
    return flat;
}

void NetworkParams::set_flat(std::span<const double> flat)
{
    if (flat.size() != parameter_count()) {
        throw ShapeError("flat parameter vector has the wrong length");
    }
    std::size_t offset = 0;
    for (Layer& layer : layers_) {
        std::copy_n(flat.begin() + offset, layer.weight.size(), layer.weight.begin());
        offset += layer.weight.size();
        std::copy_n(flat.begin() + offset, layer.bias.size(), layer.bias.begin());
        offset += layer.bias.size();
    }
}

int default_depth(int input_dim)
{
    if (input_dim < 1) {
        throw ShapeError("input dimension must be positive");
    }
    int ceil_log2 = 0;
    while ((1 << ceil_log2) < input_dim + 1) {
        ++ceil_log2;
    }
    return ceil_log2 + 1;
}

namespace {

    void anchor_first_layer_unit(Layer& layer, int row, Rng& rng, std::span<const double> lo,
                                 std::span<const double> hi)
    {
        // bias such that the unit's kink hyperplane passes through a uniform
        // point of the anchor box
        double b = 0.0;
        for (int c = 0; c < layer.in; ++c) {
            const double anchor = lo.empty() ? rng.uniform(-1.0, 1.0)
                                             : rng.uniform(lo[c], hi[c]);
            b -= layer.w(row, c) * anchor;
        }
        layer.bias[row] = b;
    }

} // namespace

NetworkParams init(const std::vector<int>& architecture, std::uint64_t seed,
                   std::span<const double> kink_lo, std::span<const double> kink_hi)
{
    if (architecture.size() < 2) {
        throw ShapeError("architecture needs at least input and output widths");
    }
    if (architecture.back() != 1) {
        throw ShapeError("architecture must end with output width 1");
    }
    if (kink_lo.size() != kink_hi.size()
        || (!kink_lo.empty() && kink_lo.size() != static_cast<std::size_t>(architecture.front()))) {
        throw ShapeError("kink anchor box does not match the input dimension");
    }
    NetworkParams params = NetworkParams::zeros(architecture);
    std::vector<Layer> layers = params.layers();
    Rng rng(derive_seed(seed, 0x1217));
    for (std::size_t l = 0; l < layers.size(); ++l) {
        Layer& layer = layers[l];
        const double scale = std::sqrt(2.0 / layer.in);
        for (double& w : layer.weight) {
            w = scale * rng.normal();
        }
        if (l == 0 && layers.size() > 1) {
            for (int r = 0; r < layer.rows(); ++r) {
                anchor_first_layer_unit(layer, r, rng, kink_lo, kink_hi);
            }
        } else if (l + 1 < layers.size()) {
            const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
            for (double& b : layer.bias) {
                b = rng.uniform(-bound, bound);
            }
        }
    }
    return NetworkParams(std::move(layers));
}

double forward(const NetworkParams& params, std::span<const double> x)
{
    if (static_cast<int>(x.size()) != params.input_dim()) {
        throw ShapeError("input has length " + std::to_string(x.size()) + ", expected "
                         + std::to_string(params.input_dim()));
    }
    std::vector<double> h(x.begin(), x.end());
    std::vector<double> z;
    const auto& layers = params.layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const Layer& layer = layers[l];
        z.assign(layer.rows(), 0.0);
        for (int r = 0; r < layer.rows(); ++r) {
            double acc = layer.bias[r];
            const double* row = layer.weight.data() + static_cast<std::size_t>(r) * layer.in;
            for (int c = 0; c < layer.in; ++c) {
                acc += row[c] * h[c];
            }
            z[r] = acc;
        }
        if (l + 1 < layers.size()) {
            for (double& v : z) {
                v = relu(v);
            }
        }
        h.swap(z);
    }
    return h[0];
}

std::vector<double> input_gradient(const NetworkParams& params, std::span<const double> x)
{
    const int d = params.input_dim();
    if (static_cast<int>(x.size()) != d) {
        throw ShapeError("input has length " + std::to_string(x.size()) + ", expected "
                         + std::to_string(d));
    }
    // Forward accumulation of the Jacobian rows: J starts as the identity and
    // is pushed through A_l and the activation masks.
    std::vector<double> h(x.begin(), x.end());
    std::vector<double> jac(static_cast<std::size_t>(d) * d, 0.0);
    for (int k = 0; k < d; ++k) {
        jac[static_cast<std::size_t>(k) * d + k] = 1.0;
    }
    std::vector<double> z;
    std::vector<double> jz;
    const auto& layers = params.layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const Layer& layer = layers[l];
        const int rows = layer.rows();
        z.assign(rows, 0.0);
        jz.assign(static_cast<std::size_t>(rows) * d, 0.0);
        for (int r = 0; r < rows; ++r) {
            double acc = layer.bias[r];
            const double* row = layer.weight.data() + static_cast<std::size_t>(r) * layer.in;
            double* jrow = jz.data() + static_cast<std::size_t>(r) * d;
            for (int c = 0; c < layer.in; ++c) {
                const double w = row[c];
                acc += w * h[c];
                const double* jh = jac.data() + static_cast<std::size_t>(c) * d;
                for (int k = 0; k < d; ++k) {
                    jrow[k] += w * jh[k];
                }
            }
            z[r] = acc;
        }
        if (l + 1 < layers.size()) {
            for (int r = 0; r < rows; ++r) {
                const double mask = relu_mask(z[r]);
                z[r] = relu(z[r]);
                double* jrow = jz.data() + static_cast<std::size_t>(r) * d;
                for (int k = 0; k < d; ++k) {
                    jrow[k] *= mask;
                }
            }
        }
        h.swap(z);
        jac.swap(jz);
    }
    return std::vector<double>(jac.begin(), jac.begin() + d);
}

NetworkParams widen(const NetworkParams& params, int hidden_width, std::uint64_t seed,
                    std::span<const double> kink_lo, std::span<const double> kink_hi)
{
    const auto& old_layers = params.layers();
    const int depth = params.depth();
    if (depth < 2) {
        throw ShapeError("widen needs at least one hidden layer");
    }
    for (int l = 0; l + 1 < depth; ++l) {
        if (old_layers[l].rows() > hidden_width) {
            throw ShapeError("widen cannot shrink a hidden layer");
        }
    }
    Rng rng(derive_seed(seed, 0x91de));
    std::vector<Layer> layers;
    layers.reserve(depth);
    for (int l = 0; l < depth; ++l) {
        const Layer& old_layer = old_layers[l];
        const int in = (l == 0) ? old_layer.in : hidden_width;
        const int out = (l == depth - 1) ? 1 : hidden_width;
        const int old_in = old_layer.in;
        const int old_out = old_layer.rows();

        Layer layer;
        layer.in = in;
        layer.weight.assign(static_cast<std::size_t>(in) * out, 0.0);
        layer.bias.assign(out, 0.0);

        const double scale = std::sqrt(2.0 / in);
        const double bias_bound = 1.0 / std::sqrt(static_cast<double>(in));
        for (int r = 0; r < out; ++r) {
            const bool new_unit = r >= old_out;
            for (int c = 0; c < in; ++c) {
                if (!new_unit && c < old_in) {
                    layer.w(r, c) = old_layer.w(r, c);
                } else if (new_unit) {
                    // fresh input weights keep the grown unit trainable;
                    // its output weights in the next layer are zero, so the
                    // realized function is unchanged
                    layer.w(r, c) = scale * rng.normal();
                }
                // old unit, new input column: stays zero
            }
            if (new_unit) {
                if (l == 0) {
                    anchor_first_layer_unit(layer, r, rng, kink_lo, kink_hi);
                } else {
                    layer.bias[r] = (l + 1 < depth) ? rng.uniform(-bias_bound, bias_bound) : 0.0;
                }
            } else {
                layer.bias[r] = old_layer.bias[r];
            }
        }
        layers.push_back(std::move(layer));
    }
    return NetworkParams(std::move(layers));
}

std::string to_json_string(const NetworkParams& params)
{
    nlohmann::json doc;
    doc["depth"] = params.depth();
    doc["dims"] = params.dims();
    nlohmann::json weights = nlohmann::json::array();
    nlohmann::json biases = nlohmann::json::array();
    for (const Layer& layer : params.layers()) {
        weights.push_back(layer.weight);
        biases.push_back(layer.bias);
    }
    doc["weights"] = std::move(weights);
    doc["biases"] = std::move(biases);
    return doc.dump();
}

NetworkParams network_from_json_string(std::string_view text)
{
    nlohmann::json doc = nlohmann::json::parse(text);
    const auto dims = doc.at("dims").get<std::vector<int>>();
    const int depth = doc.at("depth").get<int>();
    if (static_cast<int>(dims.size()) != depth + 1) {
        throw ShapeError("network document: dims does not match depth");
    }
    const auto& weights = doc.at("weights");
    const auto& biases = doc.at("biases");
    if (static_cast<int>(weights.size()) != depth || static_cast<int>(biases.size()) != depth) {
        throw ShapeError("network document: layer count mismatch");
    }
    std::vector<Layer> layers;
    layers.reserve(depth);
    for (int l = 0; l < depth; ++l) {
        Layer layer;
        layer.in = dims[l];
        layer.weight = weights[l].get<std::vector<double>>();
        layer.bias = biases[l].get<std::vector<double>>();
        if (layer.bias.size() != static_cast<std::size_t>(dims[l + 1])) {
            throw ShapeError("network document: bias length mismatch at layer " + std::to_string(l));
        }
        layers.push_back(std::move(layer));
    }
    return NetworkParams(std::move(layers));
}

} // namespace ritz
