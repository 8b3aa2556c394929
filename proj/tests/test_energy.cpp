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

#include "ritz/energy.hpp"
#include "ritz/net.hpp"
#include "ritz/pwl.hpp"
#include "ritz/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ritz;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField one() { return [](std::span<const double>) { return 1.0; }; }

NetworkParams hat_net() { return pwl_to_network_1d(hat_breakpoints(0.0, 0.5, 1.0, 1.0)); }

NetworkParams identity_net()
{
    // u(x) = x on (0,1) via a single always-on unit
    Layer l1;
    l1.in = 1;
    l1.weight = {1.0};
    l1.bias = {0.0};
    Layer l2;
    l2.in = 1;
    l2.weight = {1.0};
    l2.bias = {0.0};
    return NetworkParams({l1, l2});
}

NetworkParams constant_net(int dim, double value)
{
    NetworkParams net = NetworkParams::zeros({dim, 2, 1});
    auto layers = net.layers();
    layers.back().bias[0] = value;
    return NetworkParams(layers);
}

} // namespace

TEST_CASE("energy spec validation")
{
    const Domain unit = Domain::interval(0, 1);
    CHECK_THROWS_AS(EnergySpec(unit, 1.0, 0.0, one()), std::invalid_argument);
    CHECK_THROWS_AS(EnergySpec(unit, 0.5, 0.0, one()), std::invalid_argument);
    CHECK_THROWS_AS(EnergySpec(unit, 2.0, -1.0, one()), std::invalid_argument);
}

TEST_CASE("interior estimator: zero network yields exactly zero")
{
    const EnergySpec spec(Domain::interval(0, 1), 2.0, 3.0, one());
    const NetworkParams zero = NetworkParams::zeros({1, 4, 1});
    const SampleBatch batch = sample_interior(spec.domain(), 256, 3);
    CHECK(estimate_interior(zero, spec, batch) == 0.0);
    CHECK(estimate_penalty(zero, spec, sample_boundary(spec.domain(), 8, 3)) == 0.0);
    CHECK(estimate_total(zero, spec, 128, 8, 5).total == 0.0);
}

TEST_CASE("interior estimator: hat function with f = 0 has zero variance")
{
    // |u'| = 2 a.e. -> integrand is exactly 2 at every sample
    const EnergySpec spec(Domain::interval(0, 1), 2.0, 0.0, ScalarField{});
    const NetworkParams hat = hat_net();
    for (std::uint64_t seed : {1ULL, 7ULL, 99ULL}) {
        const SampleBatch batch = sample_interior(spec.domain(), 256, seed);
        CHECK(estimate_interior(hat, spec, batch) == 2.0);
    }
}

TEST_CASE("interior estimator: hat function with f = 1 is unbiased around 1.5")
{
    const EnergySpec spec(Domain::interval(0, 1), 2.0, 0.0, one());
    const NetworkParams hat = hat_net();
    const int seeds = 20;
    const std::size_t n = 1024;
    double mean = 0.0;
    for (int s = 0; s < seeds; ++s) {
        mean += estimate_interior(hat, spec, sample_interior(spec.domain(), n, 100 + s));
    }
    mean /= seeds;
    const double se = (0.2887 / std::sqrt(static_cast<double>(n)))
                      / std::sqrt(static_cast<double>(seeds));
    CHECK(std::abs(mean - 1.5) <= 3.0 * se);
}

TEST_CASE("penalty estimator fixtures")
{
    // lambda = 0
    {
        const EnergySpec spec(Domain::interval(0, 1), 2.0, 0.0, one());
        CHECK(estimate_penalty(init({1, 4, 1}, 3), spec,
                               sample_boundary(spec.domain(), 4, 1))
              == 0.0);
    }
    // u(x) = x on (0,1), lambda = 1: penalty is exactly 0^2 + 1^2 = 1
    {
        const EnergySpec spec(Domain::interval(0, 1), 2.0, 1.0, one());
        CHECK(estimate_penalty(identity_net(), spec, sample_boundary(spec.domain(), 2, 1))
              == 1.0);
    }
    // constant c on the unit square, lambda = 5: 5 * perimeter * c^2 for any M
    {
        const EnergySpec spec(Domain::hypercube(0, 1, 2), 2.0, 5.0, one());
        const NetworkParams c03 = constant_net(2, 0.3);
        for (std::size_t m : {7ULL, 64ULL, 333ULL}) {
            const double got = estimate_penalty(c03, spec, sample_boundary(spec.domain(), m, 2));
            CHECK(got == doctest::Approx(5.0 * 4.0 * 0.09).epsilon(1e-14));
        }
    }
}

TEST_CASE("penalty estimator is exactly linear in lambda")
{
    const NetworkParams net = init({2, 6, 1}, 11);
    const Domain square = Domain::hypercube(0, 1, 2);
    const SampleBatch boundary = sample_boundary(square, 64, 17);

    const EnergySpec base(square, 2.0, 1.0, one());
    const double p1 = estimate_penalty(net, base, boundary);
    const double p2 = estimate_penalty(net, base.with_penalty(2.0), boundary);
    const double p3 = estimate_penalty(net, base.with_penalty(3.0), boundary);
    CHECK(p2 == 2.0 * p1);                               // power-of-two scaling is bitwise
    CHECK(p3 == doctest::Approx(3.0 * p1).epsilon(4e-16)); // general scaling to a few ulps
}

TEST_CASE("total estimator fixtures")
{
    // hat with lambda = 10 and f = 1: the trace is exactly zero, the rest is
    // the interior expectation 1.5
    const EnergySpec spec(Domain::interval(0, 1), 2.0, 10.0, one());
    const NetworkParams hat = hat_net();
    double mean = 0.0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        const EnergyEstimate est = estimate_total(hat, spec, 1024, 2, 300 + s);
        CHECK(est.penalty == 0.0);
        CHECK(est.total == est.interior + est.penalty);
        mean += est.total;
    }
    mean /= seeds;
    CHECK(std::abs(mean - 1.5) <= 3.0 * (0.2887 / 32.0) / std::sqrt(20.0));

    // u(x) = x: doubling lambda doubles the penalty exactly
    const NetworkParams id = identity_net();
    const EnergyEstimate e1 = estimate_total(id, spec.with_penalty(1.0), 64, 2, 9);
    const EnergyEstimate e2 = estimate_total(id, spec.with_penalty(2.0), 64, 2, 9);
    CHECK(e2.penalty == 2.0 * e1.penalty);
}

TEST_CASE("p != 2 penalty uses the squared L^p norm")
{
    // u(x) = x on (0,1), p = 4: (|u(0)|^4 + |u(1)|^4)^(1/2) = 1
    const EnergySpec spec(Domain::interval(0, 1), 4.0, 3.0, one());
    const double got = estimate_penalty(identity_net(), spec,
                                        sample_boundary(spec.domain(), 2, 1));
    CHECK(got == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("quadrature energy oracle")
{
    const ScalarField sine = [](std::span<const double> x) { return std::sin(kPi * x[0]); };
    const VectorField dsine = [](std::span<const double> x, std::span<double> g) {
        g[0] = kPi * std::cos(kPi * x[0]);
    };

    const EnergySpec homogeneous(Domain::interval(0, 1), 2.0, 0.0, ScalarField{});
    CHECK(std::abs(quadrature_energy(sine, dsine, homogeneous, 4096) - kPi * kPi / 4.0) <= 1e-6);

    const EnergySpec loaded(Domain::interval(0, 1), 2.0, 0.0,
                            [](std::span<const double> x) {
                                return kPi * kPi * std::sin(kPi * x[0]);
                            });
    CHECK(std::abs(quadrature_energy(sine, dsine, loaded, 4096) + kPi * kPi / 4.0) <= 1e-6);

    const ScalarField zero_field = [](std::span<const double>) { return 0.0; };
    const VectorField zero_grad = [](std::span<const double>, std::span<double> g) { g[0] = 0.0; };
    CHECK(quadrature_energy(zero_field, zero_grad, loaded, 64) == 0.0);

    CHECK_THROWS_AS(quadrature_energy(sine, dsine, loaded, 63), std::invalid_argument);
}

TEST_CASE("MC estimator agrees with quadrature on a CPWL function")
{
    const EnergySpec spec(Domain::interval(0, 1), 2.0, 0.0, one());
    const NetworkParams hat = hat_net();
    const double reference = quadrature_energy(network_field(hat), network_gradient_field(hat),
                                               spec, 4096);
    const int seeds = 30;
    const std::size_t n = 1024;
    double mean = 0.0;
    for (int s = 0; s < seeds; ++s) {
        mean += estimate_interior(hat, spec, sample_interior(spec.domain(), n, 700 + s));
    }
    mean /= seeds;
    const double se = (0.2887 / std::sqrt(static_cast<double>(n))) / std::sqrt(double(seeds));
    CHECK(std::abs(mean - reference) <= 3.0 * se);
}
