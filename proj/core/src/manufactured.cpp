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

#include "ritz/manufactured.hpp"

#include "ritz/errors.hpp"
#include "ritz/pwl.hpp"

#include <cmath>
#include <numbers>

namespace ritz {

namespace {

    constexpr double kPi = std::numbers::pi;

    Breakpoints1D sine_interpolant_17()
    {
        Breakpoints1D bp;
        const int knots = 17;
        for (int i = 0; i < knots; ++i) {
            const double x = static_cast<double>(i) / (knots - 1);
            bp.knots.push_back(x);
            bp.values.push_back(std::sin(kPi * x));
        }
        return bp;
    }

    std::vector<ManufacturedCase> build_registry()
    {
        std::vector<ManufacturedCase> cases;

        {
            ManufacturedCase c;
            c.name = "poisson_1d_sine";
            c.description = "-u'' = pi^2 sin(pi x) on (0,1), u* = sin(pi x)";
            c.domain = Domain::interval(0.0, 1.0);
            c.p = 2.0;
            c.source = [](std::span<const double> x) { return kPi * kPi * std::sin(kPi * x[0]); };
            c.solution = [](std::span<const double> x) { return std::sin(kPi * x[0]); };
            c.solution_grad = [](std::span<const double> x, std::span<double> g) {
                g[0] = kPi * std::cos(kPi * x[0]);
            };
            // -(1/2) * integral of f u* = -(1/2) * pi^2/2
            c.energy_min = -kPi * kPi / 4.0;
            cases.push_back(std::move(c));
        }

        {
            ManufacturedCase c;
            c.name = "poisson_1d_pwl";
            c.description = "representability fixture: CPWL interpolant of sin(pi x), 17 knots";
            c.domain = Domain::interval(0.0, 1.0);
            c.p = 2.0;
            c.source = [](std::span<const double>) { return 0.0; };
            const Breakpoints1D bp = sine_interpolant_17();
            c.solution = [bp](std::span<const double> x) { return pwl_value(bp, x[0]); };
            c.solution_grad = [bp](std::span<const double> x, std::span<double> g) {
                g[0] = pwl_slope(bp, x[0]);
            };
            c.has_pde = false;
            cases.push_back(std::move(c));
        }

        {
            ManufacturedCase c;
            c.name = "poisson_cube_d";
            c.description = "-Δu = 2 pi^2 sin(pi x1) sin(pi x2) on (0,1)^2";
            c.domain = Domain::hypercube(0.0, 1.0, 2);
            c.p = 2.0;
            c.source = [](std::span<const double> x) {
                return 2.0 * kPi * kPi * std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
            };
            c.solution = [](std::span<const double> x) {
                return std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
            };
            c.solution_grad = [](std::span<const double> x, std::span<double> g) {
                g[0] = kPi * std::cos(kPi * x[0]) * std::sin(kPi * x[1]);
                g[1] = kPi * std::sin(kPi * x[0]) * std::cos(kPi * x[1]);
            };
            // -(1/2) * 2 pi^2 * integral of (sin sin)^2 = -(pi^2) * 1/4
            c.energy_min = -kPi * kPi / 4.0;
            cases.push_back(std::move(c));
        }

        {
            ManufacturedCase c;
            c.name = "poisson_ball";
            c.description = "-Δu = 1 on the unit disk, u* = (1-|x|^2)/4";
            c.domain = Domain::ball({0.0, 0.0}, 1.0);
            c.p = 2.0;
            c.source = [](std::span<const double>) { return 1.0; };
            c.solution = [](std::span<const double> x) {
                return (1.0 - x[0] * x[0] - x[1] * x[1]) / 4.0;
            };
            c.solution_grad = [](std::span<const double> x, std::span<double> g) {
                g[0] = -x[0] / 2.0;
                g[1] = -x[1] / 2.0;
            };
            // -(1/2) * integral of u* over the disk = -(1/2) * pi/8
            c.energy_min = -kPi / 16.0;
            cases.push_back(std::move(c));
        }

        {
            ManufacturedCase c;
            const double p = 4.0;
            c.name = "plaplace_1d";
            c.description = "p-Laplace, p = 4, f = 1 on (-1,1)";
            c.domain = Domain::interval(-1.0, 1.0);
            c.p = p;
            c.source = [](std::span<const double>) { return 1.0; };
            const double q = p / (p - 1.0); // conjugate-exponent power 4/3
            c.solution = [q, p](std::span<const double> x) {
                return (p - 1.0) / p * (1.0 - std::pow(std::abs(x[0]), q));
            };
            c.solution_grad = [q](std::span<const double> x, std::span<double> g) {
                const double sign = x[0] > 0.0 ? 1.0 : (x[0] < 0.0 ? -1.0 : 0.0);
                g[0] = -sign * std::pow(std::abs(x[0]), q - 1.0);
            };
            cases.push_back(std::move(c));
        }

        return cases;
    }

} // namespace

const std::vector<ManufacturedCase>& manufactured_registry()
{
    static const std::vector<ManufacturedCase> registry = build_registry();
    return registry;
}

const ManufacturedCase& find_case(std::string_view name)
{
    for (const ManufacturedCase& c : manufactured_registry()) {
        if (c.name == name) {
            return c;
        }
    }
    std::string known;
    for (const ManufacturedCase& c : manufactured_registry()) {
        known += known.empty() ? c.name : ", " + c.name;
    }
    throw ConfigError("unknown case '" + std::string(name) + "'; available: " + known);
}

EnergySpec case_spec(const ManufacturedCase& c, double penalty_weight)
{
    return EnergySpec(c.domain, c.p, penalty_weight, c.source);
}

double max_pde_residual(const ManufacturedCase& c, std::size_t n_points, std::uint64_t seed,
                        double h)
{
    if (!c.has_pde) {
        throw ConfigError("case '" + c.name + "' carries no PDE");
    }
    const int d = c.domain.dim();
    const double pm2 = c.p - 2.0;

    // flux G(x) = |grad u*|^{p-2} grad u*, evaluated from the analytic gradient
    std::vector<double> g(d);
    const auto flux = [&](std::span<const double> x, int component) {
        c.solution_grad(x, g);
        double norm2 = 0.0;
        for (double v : g) {
            norm2 += v * v;
        }
        const double scale = (pm2 == 0.0) ? 1.0 : std::pow(norm2, 0.5 * pm2);
        return scale * g[component];
    };

    const SampleBatch pts = sample_interior(c.domain, n_points, seed);
    std::vector<double> shifted(d);
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.count; ++i) {
        const auto x = pts.point(i);
        double divergence = 0.0;
        for (int k = 0; k < d; ++k) {
            std::copy(x.begin(), x.end(), shifted.begin());
            shifted[k] = x[k] + h;
            const double forward_flux = flux(shifted, k);
            shifted[k] = x[k] - h;
            const double backward_flux = flux(shifted, k);
            divergence += (forward_flux - backward_flux) / (2.0 * h);
        }
        worst = std::max(worst, std::abs(-divergence - c.source(x)));
    }
    return worst;
}

double max_boundary_value(const ManufacturedCase& c, std::size_t m_points, std::uint64_t seed)
{
    const SampleBatch pts = sample_boundary(c.domain, m_points, seed);
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.count; ++i) {
        worst = std::max(worst, std::abs(c.solution(pts.point(i))));
    }
    return worst;
}

} // namespace ritz
