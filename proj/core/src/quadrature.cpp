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

#include "ritz/quadrature.hpp"

#include "ritz/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace ritz {

void for_each_box_node(std::span<const double> lo, std::span<const double> hi,
                       std::span<const int> resolution, const QuadratureFn& fn)
{
    const int dim = static_cast<int>(lo.size());
    if (hi.size() != lo.size() || resolution.size() != lo.size()) {
        throw ShapeError("box quadrature: lo/hi/resolution lengths differ");
    }
    std::array<double, 8> x{};
    std::array<double, 8> h{};
    if (dim > 8) {
        throw ShapeError("box quadrature supports up to 8 axes");
    }
    double cell = 1.0;
    std::size_t total = 1;
    for (int k = 0; k < dim; ++k) {
        if (resolution[k] < 1) {
            throw ShapeError("box quadrature: resolution must be positive");
        }
        h[k] = (hi[k] - lo[k]) / resolution[k];
        cell *= h[k];
        total *= static_cast<std::size_t>(resolution[k]);
    }
    std::array<int, 8> idx{};
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (int k = 0; k < dim; ++k) {
            x[k] = lo[k] + (idx[k] + 0.5) * h[k];
        }
        fn(std::span<const double>(x.data(), dim), cell);
        for (int k = dim - 1; k >= 0; --k) {
            if (++idx[k] < resolution[k]) {
                break;
            }
            idx[k] = 0;
        }
    }
}

void for_each_interior_node(const Domain& domain, int resolution, const QuadratureFn& fn)
{
    const int dim = domain.dim();
    if (dim > 3) {
        throw ShapeError("interior quadrature supports dim <= 3");
    }
    if (resolution < 1) {
        throw ShapeError("quadrature resolution must be positive");
    }
    switch (domain.kind()) {
    case DomainKind::Interval:
    case DomainKind::Hypercube: {
        std::vector<double> lo(dim, domain.lo());
        std::vector<double> hi(dim, domain.hi());
        std::vector<int> res(dim, resolution);
        for_each_box_node(lo, hi, res, fn);
        break;
    }
    case DomainKind::Ball: {
        const double R = domain.radius();
        const auto& c = domain.center();
        const double two_pi = 2.0 * std::numbers::pi;
        if (dim == 1) {
            for_each_interior_node(Domain::interval(c[0] - R, c[0] + R), resolution, fn);
        } else if (dim == 2) {
            // polar midpoints carry the exact Jacobian r
            const double dr = R / resolution;
            const double dphi = two_pi / resolution;
            std::array<double, 2> x{};
            for (int i = 0; i < resolution; ++i) {
                const double r = (i + 0.5) * dr;
                const double w = r * dr * dphi;
                for (int j = 0; j < resolution; ++j) {
                    const double phi = (j + 0.5) * dphi;
                    x[0] = c[0] + r * std::cos(phi);
                    x[1] = c[1] + r * std::sin(phi);
                    fn(std::span<const double>(x.data(), 2), w);
                }
            }
        } else {
            const double dr = R / resolution;
            const double dtheta = std::numbers::pi / resolution;
            const double dphi = two_pi / resolution;
            std::array<double, 3> x{};
            for (int i = 0; i < resolution; ++i) {
                const double r = (i + 0.5) * dr;
                for (int j = 0; j < resolution; ++j) {
                    const double theta = (j + 0.5) * dtheta;
                    const double w = r * r * std::sin(theta) * dr * dtheta * dphi;
                    for (int k = 0; k < resolution; ++k) {
                        const double phi = (k + 0.5) * dphi;
                        x[0] = c[0] + r * std::sin(theta) * std::cos(phi);
                        x[1] = c[1] + r * std::sin(theta) * std::sin(phi);
                        x[2] = c[2] + r * std::cos(theta);
                        fn(std::span<const double>(x.data(), 3), w);
                    }
                }
            }
        }
        break;
    }
    }
}

void for_each_boundary_node(const Domain& domain, int resolution, const QuadratureFn& fn)
{
    const int dim = domain.dim();
    if (dim > 3) {
        throw ShapeError("boundary quadrature supports dim <= 3");
    }
    if (resolution < 1) {
        throw ShapeError("quadrature resolution must be positive");
    }
    const double two_pi = 2.0 * std::numbers::pi;
    switch (domain.kind()) {
    case DomainKind::Interval: {
        const std::array<double, 1> a{domain.lo()};
        const std::array<double, 1> b{domain.hi()};
        fn(std::span<const double>(a.data(), 1), 1.0);
        fn(std::span<const double>(b.data(), 1), 1.0);
        break;
    }
    case DomainKind::Hypercube: {
        std::vector<double> x(dim, 0.0);
        const double h = (domain.hi() - domain.lo()) / resolution;
        for (int axis = 0; axis < dim; ++axis) {
            for (int side = 0; side < 2; ++side) {
                const double fixed = side == 0 ? domain.lo() : domain.hi();
                // mid-point grid over the remaining axes
                const int free = dim - 1;
                std::vector<int> idx(free, 0);
                const std::size_t total = static_cast<std::size_t>(std::pow(resolution, free));
                double w = 1.0;
                for (int k = 0; k < free; ++k) {
                    w *= h;
                }
                for (std::size_t flat = 0; flat < total; ++flat) {
                    int fk = 0;
                    for (int k = 0; k < dim; ++k) {
                        if (k == axis) {
                            x[k] = fixed;
                        } else {
                            x[k] = domain.lo() + (idx[fk] + 0.5) * h;
                            ++fk;
                        }
                    }
                    fn(std::span<const double>(x.data(), dim), w);
                    for (int k = free - 1; k >= 0; --k) {
                        if (++idx[k] < resolution) {
                            break;
                        }
                        idx[k] = 0;
                    }
                    if (free == 0) {
                        break;
                    }
                }
            }
        }
        break;
    }
    case DomainKind::Ball: {
        const double R = domain.radius();
        const auto& c = domain.center();
        if (dim == 1) {
            const std::array<double, 1> a{c[0] - R};
            const std::array<double, 1> b{c[0] + R};
            fn(std::span<const double>(a.data(), 1), 1.0);
            fn(std::span<const double>(b.data(), 1), 1.0);
        } else if (dim == 2) {
            const double dphi = two_pi / resolution;
            std::array<double, 2> x{};
            for (int j = 0; j < resolution; ++j) {
                const double phi = (j + 0.5) * dphi;
                x[0] = c[0] + R * std::cos(phi);
                x[1] = c[1] + R * std::sin(phi);
                fn(std::span<const double>(x.data(), 2), R * dphi);
            }
        } else {
            const double dtheta = std::numbers::pi / resolution;
            const double dphi = two_pi / resolution;
            std::array<double, 3> x{};
            for (int j = 0; j < resolution; ++j) {
                const double theta = (j + 0.5) * dtheta;
                const double w = R * R * std::sin(theta) * dtheta * dphi;
                for (int k = 0; k < resolution; ++k) {
                    const double phi = (k + 0.5) * dphi;
                    x[0] = c[0] + R * std::sin(theta) * std::cos(phi);
                    x[1] = c[1] + R * std::sin(theta) * std::sin(phi);
                    x[2] = c[2] + R * std::cos(theta);
                    fn(std::span<const double>(x.data(), 3), w);
                }
            }
        }
        break;
    }
    }
}

} // namespace ritz
