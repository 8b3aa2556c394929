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

// Acceptance suite: every release-gating property in one binary, one
// PASS/FAIL line per criterion, nonzero exit on any failure. Budgets are
// part of the criteria and are enforced.
//
//   acceptance            runs everything
//   acceptance 4 6        runs criteria 4 and 6 only

#include "ritz/energy.hpp"
#include "ritz/geometry.hpp"
#include "ritz/gradcheck.hpp"
#include "ritz/io.hpp"
#include "ritz/kuhn.hpp"
#include "ritz/manufactured.hpp"
#include "ritz/net.hpp"
#include "ritz/pwl.hpp"
#include "ritz/rng.hpp"
#include "ritz/solve.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace ritz;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what)
    {
        detail += (detail.empty() ? "" : "; ") + what;
    }
};

std::string fmt(double v, int precision = 3)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

// --------------------------------------------------------------------------
// 1. gradient correctness
// --------------------------------------------------------------------------

Outcome criterion_gradients()
{
    Outcome out;
    GradCheckSuiteConfig config; // 20 nets, d in {1,2,3}, depth in {2,3}, width <= 32
    const auto results = run_gradcheck_suite(config);
    double worst = 0.0;
    std::size_t excluded = 0;
    for (const auto& r : results) {
        worst = std::max(worst, r.max_rel_error);
        excluded += r.excluded;
    }
    out.require(results.size() == 20, "expected 20 nets");
    out.require(worst <= 1e-5, "max rel err " + fmt(worst) + " > 1e-5");
    out.note("max_rel=" + fmt(worst) + " excluded=" + std::to_string(excluded));
    return out;
}

// --------------------------------------------------------------------------
// 2. exact representation
// --------------------------------------------------------------------------

double rep_deviation(const NetworkParams& net,
                     const std::function<double(std::span<const double>)>& oracle, double lo,
                     double hi, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<double> x(net.input_dim());
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        for (double& v : x) {
            v = rng.uniform(lo, hi);
        }
        const double want = oracle(x);
        worst = std::max(worst, std::abs(forward(net, x) - want) / (1.0 + std::abs(want)));
    }
    return worst;
}

Outcome criterion_exact_representation()
{
    Outcome out;
    double worst = 0.0;

    // 1-D compilation fixtures
    {
        const Breakpoints1D hat = hat_breakpoints(0.0, 0.5, 1.0, 1.0);
        const NetworkParams net = pwl_to_network_1d(hat);
        worst = std::max(worst, rep_deviation(
                                    net,
                                    [&](std::span<const double> x) {
                                        return pwl_value(hat, x[0]);
                                    },
                                    -0.5, 1.5, 1));
        out.require(net.depth() == 2, "hat depth != 2");
    }
    {
        Breakpoints1D bp;
        for (int i = 0; i < 17; ++i) {
            bp.knots.push_back(i / 16.0);
            bp.values.push_back(std::sin(kPi * i / 16.0));
        }
        bp.left_slope = 1.0;
        bp.right_slope = -0.5;
        const NetworkParams net = pwl_to_network_1d(bp);
        worst = std::max(worst, rep_deviation(
                                    net,
                                    [&](std::span<const double> x) {
                                        return pwl_value(bp, x[0]);
                                    },
                                    -1.0, 2.0, 2));
        out.require(net.depth() == 2, "interpolant depth != 2 (d=1 bound)");
    }

    // max/min trees over random affine collections
    Rng rng(3);
    for (const int k : {2, 3, 5}) {
        for (const int d : {1, 2}) {
            std::vector<NetworkParams> nets;
            std::vector<std::vector<double>> slopes;
            std::vector<double> intercepts;
            for (int i = 0; i < k; ++i) {
                std::vector<double> slope(d);
                for (double& s : slope) {
                    s = rng.uniform(-2, 2);
                }
                const double b = rng.uniform(-1, 1);
                nets.push_back(affine_network(slope, b));
                slopes.push_back(std::move(slope));
                intercepts.push_back(b);
            }
            const NetworkParams net = relu_max(nets);
            int levels = 0;
            while ((1 << levels) < k) {
                ++levels;
            }
            out.require(net.depth() == 1 + levels,
                        "max depth formula violated at k=" + std::to_string(k));
            worst = std::max(worst, rep_deviation(
                                        net,
                                        [&](std::span<const double> x) {
                                            double best = -1e300;
                                            for (int i = 0; i < k; ++i) {
                                                double v = intercepts[i];
                                                for (int j = 0; j < d; ++j) {
                                                    v += slopes[i][j] * x[j];
                                                }
                                                best = std::max(best, v);
                                            }
                                            return best;
                                        },
                                        -1.0, 1.0, 40 + k));
        }
    }

    out.require(worst <= 1e-12, "max deviation " + fmt(worst) + " > 1e-12");
    out.note("max_dev=" + fmt(worst));
    return out;
}

// --------------------------------------------------------------------------
// 3. Monte-Carlo estimator statistics
// --------------------------------------------------------------------------

Outcome criterion_mc_statistics()
{
    Outcome out;
    const NetworkParams hat = pwl_to_network_1d(hat_breakpoints(0.0, 0.5, 1.0, 1.0));
    const EnergySpec spec(Domain::interval(0, 1), 2.0, 0.0,
                          [](std::span<const double>) { return 1.0; });

    const auto stats = [&](std::size_t n) {
        const int seeds = 50;
        std::vector<double> values(seeds);
        double mean = 0.0;
        for (int s = 0; s < seeds; ++s) {
            values[s] = estimate_interior(
                hat, spec, sample_interior(spec.domain(), n, derive_seed(2025, n * 100 + s)));
            mean += values[s];
        }
        mean /= seeds;
        double var = 0.0;
        for (double v : values) {
            var += (v - mean) * (v - mean);
        }
        const double sd = std::sqrt(var / (seeds - 1));
        return std::pair<double, double>{mean, sd / std::sqrt(double(seeds))};
    };

    const auto [mean_small, se_small] = stats(1024);
    const auto [mean_big, se_big] = stats(4096);
    out.require(std::abs(mean_small - 1.5) <= 3.0 * se_small,
                "mean " + fmt(mean_small, 6) + " outside 3 SE of 1.5");
    const double ratio = se_small / se_big;
    out.require(ratio >= 1.33 && ratio <= 3.0, "SE ratio " + fmt(ratio) + " outside [1.33, 3]");
    out.note("mean=" + fmt(mean_small, 6) + " se=" + fmt(se_small) + " ratio=" + fmt(ratio));
    (void)mean_big;
    return out;
}

// --------------------------------------------------------------------------
// 4. 1-D Poisson ladder
// --------------------------------------------------------------------------

LadderConfig pinned_ladder(std::vector<int> widths, std::vector<double> lambdas,
                           std::vector<double> deltas, std::vector<int> steps,
                           std::uint64_t seed)
{
    LadderConfig config = LadderConfig::defaults(static_cast<int>(widths.size()));
    for (std::size_t i = 0; i < widths.size(); ++i) {
        config.rungs[i].width = widths[i];
        config.rungs[i].lambda = lambdas[i];
        config.rungs[i].delta = deltas[i];
        config.rungs[i].max_steps = steps[i];
    }
    config.seed = seed;
    return config;
}

Outcome criterion_ladder_1d()
{
    Outcome out;
    const auto& c = find_case("poisson_1d_sine");
    const LadderConfig config =
        pinned_ladder({8, 16, 32}, {10, 100, 1000}, {1e-2, 1e-3, 1e-4}, {5000, 5000, 5000}, 7);
    const LadderResult result = run_ladder(c, config);

    for (std::size_t i = 1; i < result.reports.size(); ++i) {
        out.require(result.reports[i].l2_rel <= 1.10 * result.reports[i - 1].l2_rel,
                    "l2 increased at rung " + std::to_string(i));
    }
    const RungReport& last = result.reports.back();
    out.require(last.l2_rel <= 5e-2, "final l2 " + fmt(last.l2_rel) + " > 5e-2");
    const double target = -kPi * kPi / 4.0;
    out.require(std::abs(last.final_loss - target) <= 0.05 * std::abs(target),
                "final loss " + fmt(last.final_loss, 6) + " not within 5% of " + fmt(target, 6));
    std::string seq;
    for (const auto& r : result.reports) {
        seq += (seq.empty() ? "" : ",") + fmt(r.l2_rel);
    }
    out.note("l2=[" + seq + "] loss=" + fmt(last.final_loss, 6));
    return out;
}

// --------------------------------------------------------------------------
// 5. 2-D Poisson ladder
// --------------------------------------------------------------------------

Outcome criterion_ladder_2d()
{
    Outcome out;
    const auto& c = find_case("poisson_cube_d");
    const LadderConfig config = pinned_ladder({16, 32, 64}, {10, 100, 1000},
                                              {1e-2, 1e-3, 1e-4}, {1500, 2500, 4000}, 7);
    const LadderResult result = run_ladder(c, config);

    const RungReport& first = result.reports.front();
    const RungReport& last = result.reports.back();
    out.require(last.width == 64, "final rung width != 64");
    out.require(last.lambda == 1000.0, "final rung lambda != 1000");
    out.require(last.l2_rel <= 1e-1, "final l2 " + fmt(last.l2_rel) + " > 1e-1");
    out.require(last.boundary_mean_square * 2.0 <= first.boundary_mean_square,
                "boundary mean square did not decay 2x");
    out.note("l2=" + fmt(last.l2_rel) + " trace_decay="
             + fmt(first.boundary_mean_square / last.boundary_mean_square));
    return out;
}

// --------------------------------------------------------------------------
// 6. p-Laplace
// --------------------------------------------------------------------------

Outcome criterion_plaplace()
{
    Outcome out;
    const auto& c = find_case("plaplace_1d");
    const double residual = max_pde_residual(c, 1000, 99);
    out.require(residual <= 1e-6, "manufactured residual " + fmt(residual) + " > 1e-6");

    const LadderConfig config =
        pinned_ladder({8, 16, 32}, {10, 100, 1000}, {1e-2, 1e-3, 1e-4}, {5000, 5000, 5000}, 7);
    const LadderResult result = run_ladder(c, config);
    const double l2 = result.reports.back().l2_rel;
    out.require(l2 <= 1e-1, "final l2 " + fmt(l2) + " > 1e-1");
    out.note("residual=" + fmt(residual) + " l2=" + fmt(l2));
    return out;
}

// --------------------------------------------------------------------------
// 7. interpolation sweep
// --------------------------------------------------------------------------

Outcome criterion_interpolation()
{
    Outcome out;
    const ScalarField bump = [](std::span<const double> x) { return standard_bump(x); };
    const VectorField bump_grad = [](std::span<const double> x, std::span<double> g) {
        standard_bump_gradient(x, g);
    };
    const std::vector<double> deltas{0.4, 0.2, 0.1, 0.05};

    for (const int d : {1, 2}) {
        std::vector<CpwlInterpolant> interps;
        for (double delta : deltas) {
            interps.push_back(kuhn_interpolant(bump, unit_ball_box(d), delta));
        }
        // support containment at every sampled exterior point
        Rng rng(5);
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            const double shell = deltas[i] * std::sqrt(double(d));
            std::vector<double> x(d);
            for (int probe = 0; probe < 200; ++probe) {
                double norm = 0.0;
                for (double& v : x) {
                    v = rng.uniform(-1, 1);
                    norm += v * v;
                }
                norm = std::sqrt(norm);
                if (norm == 0.0) {
                    continue;
                }
                const double target = 1.0 + shell + 1e-9 + 0.4 * rng.uniform();
                for (double& v : x) {
                    v *= target / norm;
                }
                if (interps[i].value(x) != 0.0) {
                    out.require(false, "support violated at d=" + std::to_string(d));
                    break;
                }
            }
        }
        for (const double p : {1.0, 2.0, 4.0}) {
            std::vector<double> w1p;
            for (std::size_t i = 0; i < deltas.size(); ++i) {
                const Box box = interps[i].grid_box();
                const int res =
                    static_cast<int>(std::ceil((box.hi[0] - box.lo[0]) / (deltas[i] / 8.0)));
                w1p.push_back(sobolev_error(bump, bump_grad, interps[i], p, res).second);
            }
            for (std::size_t i = 1; i < w1p.size(); ++i) {
                out.require(w1p[i] < w1p[i - 1], "w1p not strictly decreasing at d="
                                                     + std::to_string(d) + " p=" + fmt(p));
            }
            // the list halves delta step by step
            for (std::size_t i = 1; i < w1p.size(); ++i) {
                out.require(w1p[i] <= 0.75 * w1p[i - 1],
                            "w1p(delta/2) > 0.75 w1p(delta) at d=" + std::to_string(d)
                                + " p=" + fmt(p));
            }
            if (d == 2 && p == 2.0) {
                out.note("d2p2 w1p=[" + fmt(w1p[0]) + "," + fmt(w1p[1]) + "," + fmt(w1p[2]) + ","
                         + fmt(w1p[3]) + "]");
            }
        }
    }
    return out;
}

// --------------------------------------------------------------------------
// 8. penalty linearity
// --------------------------------------------------------------------------

Outcome criterion_penalty_linearity()
{
    Outcome out;

    // u(x) = x on (0,1), lambda = 1 -> exactly 1
    Layer l1;
    l1.in = 1;
    l1.weight = {1.0};
    l1.bias = {0.0};
    Layer l2;
    l2.in = 1;
    l2.weight = {1.0};
    l2.bias = {0.0};
    const NetworkParams id({l1, l2});
    const EnergySpec unit(Domain::interval(0, 1), 2.0, 1.0,
                          [](std::span<const double>) { return 0.0; });
    const double p1 = estimate_penalty(id, unit, sample_boundary(unit.domain(), 2, 1));
    out.require(p1 == 1.0, "u=x at lambda=1 gave " + fmt(p1, 17));

    // machine-precision linearity on a random net over the square boundary
    const NetworkParams net = init({2, 8, 1}, 4);
    const Domain square = Domain::hypercube(0, 1, 2);
    const SampleBatch boundary = sample_boundary(square, 128, 9);
    const EnergySpec base(square, 2.0, 1.0, [](std::span<const double>) { return 0.0; });
    const double at1 = estimate_penalty(net, base, boundary);
    const double at2 = estimate_penalty(net, base.with_penalty(2.0), boundary);
    const double at5 = estimate_penalty(net, base.with_penalty(5.0), boundary);
    out.require(at2 == 2.0 * at1, "doubling lambda is not exact");
    out.require(std::abs(at5 - 5.0 * at1) <= 4e-16 * std::abs(at5),
                "5x lambda deviates beyond a few ulps");
    out.note("penalty(1)=" + fmt(at1, 6));
    return out;
}

// --------------------------------------------------------------------------
// 9. byte-identical reruns
// --------------------------------------------------------------------------

Outcome criterion_determinism()
{
    Outcome out;
    const char* bin = std::getenv("RITZKIT_BIN");
    if (bin == nullptr) {
        out.require(false, "RITZKIT_BIN not set");
        return out;
    }
    fs::remove_all("acceptance_tmp");
    fs::create_directories("acceptance_tmp");

    // identical resolved config means the same output directory: snapshot
    // the artifacts, rerun the identical command, compare bytes
    const auto rerun_identical = [&](const std::string& args, const std::string& tag,
                                     const std::vector<std::string>& files) {
        const std::string dir = "acceptance_tmp/" + tag;
        const std::string cmd = std::string(bin) + " " + args + " --out " + dir
                                + " >/dev/null 2>&1";
        out.require(WEXITSTATUS(std::system(cmd.c_str())) == 0, tag + " run A failed");
        std::vector<std::string> snapshot;
        for (const std::string& f : files) {
            snapshot.push_back(read_text_file(dir + "/" + f));
        }
        out.require(WEXITSTATUS(std::system(cmd.c_str())) == 0, tag + " run B failed");
        for (std::size_t i = 0; i < files.size(); ++i) {
            const std::string now = read_text_file(dir + "/" + files[i]);
            out.require(!now.empty() && now == snapshot[i],
                        tag + "/" + files[i] + " differs between reruns");
        }
    };

    rerun_identical(
        "solve --case poisson_1d_sine --widths 8 --lambdas 10 --deltas 0.01 --steps 150 --seed 5",
        "solve", {"summary.csv", "rungs.jsonl", "config.resolved", "final_net.json"});
    rerun_identical("interp --bump --dim 1 --deltas 0.4,0.2 --p 2 --seed 5", "interp",
                    {"interp.csv", "config.resolved"});
    rerun_identical("mc-check --case hat_energy --n 256 --seeds 8 --seed 5", "mc",
                    {"mc_check.csv", "config.resolved"});
    return out;
}

struct Criterion {
    int number;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv)
{
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        only.insert(std::atoi(argv[i]));
    }

    const std::vector<Criterion> criteria{
        {1, "gradient-correctness", 30.0, criterion_gradients},
        {2, "exact-representation", 30.0, criterion_exact_representation},
        {3, "mc-estimator-statistics", 60.0, criterion_mc_statistics},
        {4, "ladder-poisson-1d", 180.0, criterion_ladder_1d},
        {5, "ladder-poisson-2d", 600.0, criterion_ladder_2d},
        {6, "plaplace-1d", 300.0, criterion_plaplace},
        {7, "interpolation-sweep", 120.0, criterion_interpolation},
        {8, "penalty-linearity", 30.0, criterion_penalty_linearity},
        {9, "determinism", 120.0, criterion_determinism},
    };

    int failures = 0;
    int ran = 0;
    for (const Criterion& criterion : criteria) {
        if (!only.empty() && only.count(criterion.number) == 0) {
            continue;
        }
        ++ran;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (elapsed > criterion.budget_seconds) {
            outcome.pass = false;
            outcome.detail += (outcome.detail.empty() ? "" : "; ") + std::string("over budget ")
                              + fmt(criterion.budget_seconds, 3) + "s";
        }
        if (!outcome.pass) {
            ++failures;
        }
        std::printf("criterion %d %-26s %s  (%.1fs%s%s)\n", criterion.number, criterion.name,
                    outcome.pass ? "PASS" : "FAIL", elapsed, outcome.detail.empty() ? "" : "; ",
                    outcome.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("acceptance: %d/%d criteria passed\n", ran - failures, ran);
    return failures;
}
