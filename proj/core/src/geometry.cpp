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

#include "ritz/geometry.hpp"

#include "ritz/errors.hpp"
#include "ritz/io.hpp"
#include "ritz/rng.hpp"

#include <cmath>
#include <numbers>

namespace ritz {

Domain Domain::interval(double a, double b)
{
    if (!(a < b)) {
        throw ShapeError("interval needs a < b");
    }
    Domain d;
    d.kind_ = DomainKind::Interval;
    d.dim_ = 1;
    d.lo_ = a;
    d.hi_ = b;
    d.volume_ = b - a;
    d.boundary_measure_ = 2.0; // counting measure of the endpoints
    return d;
}

Domain Domain::hypercube(double a, double b, int dim)
{
    if (!(a < b)) {
        throw ShapeError("hypercube needs a < b");
    }
    if (dim < 1) {
        throw ShapeError("hypercube dimension must be positive");
    }
    if (dim == 1) {
        return interval(a, b);
    }
    Domain d;
    d.kind_ = DomainKind::Hypercube;
    d.dim_ = dim;
    d.lo_ = a;
    d.hi_ = b;
    d.volume_ = std::pow(b - a, dim);
    d.boundary_measure_ = 2.0 * dim * std::pow(b - a, dim - 1);
    return d;
}

Domain Domain::ball(std::vector<double> center, double radius)
{
    if (center.empty()) {
        throw ShapeError("ball center must have at least one coordinate");
    }
    if (!(radius > 0.0)) {
        throw ShapeError("ball radius must be positive");
    }
    Domain d;
    d.kind_ = DomainKind::Ball;
    d.dim_ = static_cast<int>(center.size());
    d.center_ = std::move(center);
    d.radius_ = radius;
    const double n = d.dim_;
    d.volume_ = std::pow(std::numbers::pi, 0.5 * n) * std::pow(radius, n)
                / std::tgamma(0.5 * n + 1.0);
    d.boundary_measure_ = n * d.volume_ / radius;
    return d;
}

std::pair<std::vector<double>, std::vector<double>> Domain::bounding_box() const
{
    std::vector<double> lo(dim_);
    std::vector<double> hi(dim_);
    for (int k = 0; k < dim_; ++k) {
        if (kind_ == DomainKind::Ball) {
            lo[k] = center_[k] - radius_;
            hi[k] = center_[k] + radius_;
        } else {
            lo[k] = lo_;
            hi[k] = hi_;
        }
    }
    return {std::move(lo), std::move(hi)};
}

std::string Domain::describe() const
{
    switch (kind_) {
    case DomainKind::Interval:
        return "interval(" + format_double(lo_) + "," + format_double(hi_) + ")";
    case DomainKind::Hypercube:
        return "hypercube(" + format_double(lo_) + "," + format_double(hi_) + ")^"
               + std::to_string(dim_);
    case DomainKind::Ball:
        return "ball(r=" + format_double(radius_) + ",d=" + std::to_string(dim_) + ")";
    }
    return "?";
}

namespace {

    void unit_direction(Rng& rng, std::span<double> out)
    {
        while (true) {
            double norm2 = 0.0;
            for (double& v : out) {
                v = rng.normal();
                norm2 += v * v;
            }
            if (norm2 > 1e-300) {
                const double inv = 1.0 / std::sqrt(norm2);
                for (double& v : out) {
                    v *= inv;
                }
                return;
            }
        }
    }

} // namespace

SampleBatch sample_interior(const Domain& domain, std::size_t n, std::uint64_t seed)
{
    if (n < 1) {
        throw ShapeError("sample count must be at least 1");
    }
    const int dim = domain.dim();
    SampleBatch batch;
    batch.count = n;
    batch.dim = dim;
    batch.seed = seed;
    batch.weight = domain.volume() / static_cast<double>(n);
    batch.points.resize(n * static_cast<std::size_t>(dim));

    Rng rng(derive_seed(seed, 0x17e1));
    switch (domain.kind()) {
    case DomainKind::Interval:
    case DomainKind::Hypercube:
        for (double& v : batch.points) {
            v = rng.uniform(domain.lo(), domain.hi());
        }
        break;
    case DomainKind::Ball: {
        const auto& center = domain.center();
        for (std::size_t i = 0; i < n; ++i) {
            std::span<double> x{batch.points.data() + i * dim, static_cast<std::size_t>(dim)};
            unit_direction(rng, x);
            // radius by inversion of the volume CDF
            const double r = domain.radius() * std::pow(rng.uniform(), 1.0 / dim);
            for (int k = 0; k < dim; ++k) {
                x[k] = center[k] + r * x[k];
            }
        }
        break;
    }
    }
    return batch;
}

SampleBatch sample_boundary(const Domain& domain, std::size_t m, std::uint64_t seed)
{
    if (m < 1) {
        throw ShapeError("sample count must be at least 1");
    }
    const int dim = domain.dim();
    SampleBatch batch;
    batch.dim = dim;
    batch.seed = seed;

    Rng rng(derive_seed(seed, 0xb0d));
    switch (domain.kind()) {
    case DomainKind::Interval:
        // both endpoints, each carrying counting weight 1
        batch.count = 2;
        batch.weight = 1.0;
        batch.points = {domain.lo(), domain.hi()};
        break;
    case DomainKind::Hypercube: {
        batch.count = m;
        batch.weight = domain.boundary_measure() / static_cast<double>(m);
        batch.points.resize(m * static_cast<std::size_t>(dim));
        for (std::size_t i = 0; i < m; ++i) {
            double* x = batch.points.data() + i * dim;
            // all faces have equal area
            const int face = std::min<int>(2 * dim - 1, static_cast<int>(rng.uniform() * 2 * dim));
            const int axis = face / 2;
            const bool high = (face % 2) == 1;
            for (int k = 0; k < dim; ++k) {
                x[k] = rng.uniform(domain.lo(), domain.hi());
            }
            x[axis] = high ? domain.hi() : domain.lo();
        }
        break;
    }
    case DomainKind::Ball: {
        batch.count = m;
        batch.weight = domain.boundary_measure() / static_cast<double>(m);
        batch.points.resize(m * static_cast<std::size_t>(dim));
        const auto& center = domain.center();
        for (std::size_t i = 0; i < m; ++i) {
            std::span<double> x{batch.points.data() + i * dim, static_cast<std::size_t>(dim)};
            unit_direction(rng, x);
            for (int k = 0; k < dim; ++k) {
                x[k] = center[k] + domain.radius() * x[k];
            }
        }
        break;
    }
    }
    return batch;
}

} // namespace ritz
