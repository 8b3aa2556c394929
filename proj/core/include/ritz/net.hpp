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

#ifndef RITZ_NET_HPP
#define RITZ_NET_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ritz {

/// ReLU activation and its almost-everywhere derivative. The subgradient at
/// zero is fixed to 0.
inline double relu(double x) { return x > 0.0 ? x : 0.0; }
inline double relu_mask(double x) { return x > 0.0 ? 1.0 : 0.0; }

/// One affine layer: y = A x + b with A stored row-major (rows() x in).
struct Layer {
    std::vector<double> weight;
    std::vector<double> bias;
    int in = 0;

    int rows() const { return static_cast<int>(bias.size()); }
    double w(int row, int col) const { return weight[static_cast<std::size_t>(row) * in + col]; }
    double& w(int row, int col) { return weight[static_cast<std::size_t>(row) * in + col]; }
};

/// The parameter tuple of a scalar-output feedforward network. Immutable in
/// spirit: construction validates the shape invariants (N_0 = input_dim,
/// N_L = 1, adjacent layers compose); mutation goes through set_flat() which
/// cannot change shapes.
class NetworkParams {
public:
    explicit NetworkParams(std::vector<Layer> layers);

    static NetworkParams zeros(const std::vector<int>& architecture);

    int input_dim() const { return layers_.front().in; }
    int depth() const { return static_cast<int>(layers_.size()); }

    /// max_l N_l including input and output widths.
    int width() const;

    /// [N_0, ..., N_L]
    std::vector<int> dims() const;

    const std::vector<Layer>& layers() const { return layers_; }

    std::size_t parameter_count() const;

    /// Canonical flat layout: per layer, weights row-major then bias.
    std::vector<double> to_flat() const;
    void set_flat(std::span<const double> flat);

private:
    std::vector<Layer> layers_;
};

/// ceil(log2(d+1)) + 1, the default depth for input dimension d.
int default_depth(int input_dim);

/// Seeded He-style initialization: weights ~ N(0, 2/fan_in). First-layer
/// biases anchor each unit's kink hyperplane at a uniform point of
/// [kink_lo, kink_hi]^d (default [-1,1]^d): with zero biases every kink
/// passes through the origin and the realisation is affine over any domain
/// away from it; deeper biases are uniform in ±1/sqrt(fan_in). The
/// architecture lists all layer widths, starting with the input dimension
/// and ending with 1.
NetworkParams init(const std::vector<int>& architecture, std::uint64_t seed,
                   std::span<const double> kink_lo = {}, std::span<const double> kink_hi = {});

/// Evaluate the realisation u_theta(x).
double forward(const NetworkParams& params, std::span<const double> x);

/// Exact input gradient of the realisation at x (valid a.e.; activation
/// masks use the subgradient-0 convention at kinks).
std::vector<double> input_gradient(const NetworkParams& params, std::span<const double> x);

/// Grow all hidden layers to `hidden_width`, preserving the realized
/// function exactly: surviving weights are copied, new units get seeded
/// random input weights (first-layer kinks anchored like init) and
/// exactly-zero output weights.
NetworkParams widen(const NetworkParams& params, int hidden_width, std::uint64_t seed,
                    std::span<const double> kink_lo = {}, std::span<const double> kink_hi = {});

/// JSON document {depth, dims, weights (row-major), biases}; the round-trip
/// is bit-exact.
std::string to_json_string(const NetworkParams& params);
NetworkParams network_from_json_string(std::string_view text);

} // namespace ritz

#endif // RITZ_NET_HPP
