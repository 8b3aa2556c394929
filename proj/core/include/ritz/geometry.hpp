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

#ifndef RITZ_GEOMETRY_HPP
#define RITZ_GEOMETRY_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ritz {

enum class DomainKind { Interval, Hypercube, Ball };

/// Bounded region with exact volume and boundary measure. Only shapes whose
/// measures and samplers are exact are offered, so quadrature error is
/// attributable to Monte-Carlo variance alone. For an interval the boundary
/// measure is the counting measure of the two endpoints (value 2).
class Domain {
public:
    static Domain interval(double a, double b);
    static Domain hypercube(double a, double b, int dim);
    static Domain ball(std::vector<double> center, double radius);

    DomainKind kind() const { return kind_; }
    int dim() const { return dim_; }
    double volume() const { return volume_; }
    double boundary_measure() const { return boundary_measure_; }

    // shape accessors (valid per kind)
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::vector<double>& center() const { return center_; }
    double radius() const { return radius_; }

    /// Axis-aligned bounding box (lo, hi per axis).
    std::pair<std::vector<double>, std::vector<double>> bounding_box() const;

    std::string describe() const;

private:
    Domain() = default;
    DomainKind kind_ = DomainKind::Interval;
    int dim_ = 1;
    double volume_ = 0.0;
    double boundary_measure_ = 0.0;
    double lo_ = 0.0;
    double hi_ = 0.0;
    std::vector<double> center_;
    double radius_ = 0.0;
};

/// Flat row-major batch of points with the measure/N weight that converts a
/// sample sum into an unbiased integral estimate.
struct SampleBatch {
    std::vector<double> points; // count * dim, row-major
    std::size_t count = 0;
    int dim = 0;
    double weight = 0.0;
    std::uint64_t seed = 0;

    std::span<const double> point(std::size_t i) const
    {
        return {points.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
};

/// N i.i.d. uniform points in the interior; weight = |Omega|/N.
SampleBatch sample_interior(const Domain& domain, std::size_t n, std::uint64_t seed);

/// M uniform points on the boundary; weight = |dOmega|/M. For an interval
/// the batch is always the two endpoints with weight 1 each.
SampleBatch sample_boundary(const Domain& domain, std::size_t m, std::uint64_t seed);

} // namespace ritz

#endif // RITZ_GEOMETRY_HPP
