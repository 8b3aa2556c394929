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

// ritzkit: experiment runner for penalized variational training of ReLU
// networks: growth-schedule solves, gradient checks, Monte-Carlo estimator
// checks, exact piecewise-linear representation checks and interpolation
// sweeps. Structured config in, CSV/JSONL out.
//
// Exit codes: 0 success, 1 usage/config error, 2 numeric failure.

#include "ritz/config.hpp"
#include "ritz/energy.hpp"
#include "ritz/errors.hpp"
#include "ritz/geometry.hpp"
#include "ritz/gradcheck.hpp"
#include "ritz/io.hpp"
#include "ritz/kuhn.hpp"
#include "ritz/manufactured.hpp"
#include "ritz/net.hpp"
#include "ritz/pwl.hpp"
#include "ritz/rng.hpp"
#include "ritz/solve.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace {

using ritz::Config;
using ritz::ConfigValue;

const std::set<std::string> kKnownKeys = {
    "seed", "out", "jobs", "timings",
    // solve
    "solve.case", "solve.rungs", "solve.widths", "solve.lambdas", "solve.deltas", "solve.steps",
    "solve.depth", "solve.n_interior", "solve.m_boundary", "solve.optimizer", "solve.lr",
    "solve.beta1", "solve.beta2", "solve.eps", "solve.eval_resolution", "solve.decay",
    "solve.feature_scale", "solve.source",
    // gradcheck
    "gradcheck.nets", "gradcheck.dims", "gradcheck.depths", "gradcheck.max_width",
    "gradcheck.n_interior", "gradcheck.m_boundary", "gradcheck.tolerance", "gradcheck.inject_bug",
    // mc_check
    "mc_check.case", "mc_check.n", "mc_check.seeds", "mc_check.domain",
    // pwl
    "pwl.fixture", "pwl.breakpoints", "pwl.affines", "pwl.dim",
    // interp
    "interp.dim", "interp.deltas", "interp.p", "interp.resolution_factor",
};

struct CommonOpts {
    std::string config_path;
    std::optional<long long> seed;
    std::string out;
    std::optional<int> jobs;
    bool timings = false;
};

/// flags > config file > RITZKIT_SEED env > defaults
Config resolve_config(const CommonOpts& common, const std::string& section,
                      const std::function<void(Config&)>& apply_flags)
{
    Config cfg;
    if (!common.config_path.empty()) {
        cfg = Config::parse_file(common.config_path);
    }
    if (common.seed.has_value()) {
        cfg.set("seed", ConfigValue(static_cast<double>(*common.seed)));
    } else if (!cfg.has("seed")) {
        if (const char* env = std::getenv("RITZKIT_SEED")) {
            cfg.set("seed", ConfigValue(std::strtod(env, nullptr)));
        }
    }
    if (!common.out.empty()) {
        cfg.set("out", ConfigValue(common.out));
    }
    if (common.jobs.has_value()) {
        cfg.set("jobs", ConfigValue(static_cast<double>(*common.jobs)));
    }
    if (common.timings) {
        cfg.set("timings", ConfigValue(true));
    }
    apply_flags(cfg);

    // resolved defaults for the shared keys
    if (!cfg.has("seed")) {
        cfg.set("seed", ConfigValue(0.0));
    }
    if (!cfg.has("out")) {
        cfg.set("out", ConfigValue("runs/" + section));
    }
    if (!cfg.has("jobs")) {
        cfg.set("jobs", ConfigValue(1.0));
    }
    if (!cfg.has("timings")) {
        cfg.set("timings", ConfigValue(false));
    }
    cfg.require_known_keys(kKnownKeys);
    if (cfg.get_int("jobs", 1) < 1) {
        throw ritz::ConfigError("jobs must be at least 1");
    }
    return cfg;
}

std::filesystem::path prepare_out_dir(const Config& cfg)
{
    const std::filesystem::path dir = cfg.get_string("out", ".");
    std::filesystem::create_directories(dir);
    ritz::write_text_file(dir / "config.resolved", cfg.serialize());
    return dir;
}

std::vector<double> doubles_or(const Config& cfg, const std::string& key,
                               std::vector<double> fallback)
{
    if (!cfg.has(key)) {
        return fallback;
    }
    return cfg.get_doubles(key);
}

std::string fmt(double v) { return ritz::format_double(v); }

/// Source-term selection: "case:<name>" borrows a registry case's load,
/// "poly:c0,c1,..." is a polynomial in x_1.
ritz::ScalarField parse_source(const std::string& text)
{
    if (text.rfind("case:", 0) == 0) {
        return ritz::find_case(text.substr(5)).source;
    }
    if (text.rfind("poly:", 0) == 0) {
        std::vector<double> coeffs;
        std::size_t pos = 5;
        while (pos <= text.size()) {
            std::size_t comma = text.find(',', pos);
            if (comma == std::string::npos) {
                comma = text.size();
            }
            coeffs.push_back(std::strtod(text.substr(pos, comma - pos).c_str(), nullptr));
            pos = comma + 1;
        }
        if (coeffs.empty()) {
            throw ritz::ConfigError("poly: source needs at least one coefficient");
        }
        return [coeffs](std::span<const double> x) {
            double acc = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 0;) {
                acc = acc * x[0] + coeffs[k];
            }
            return acc;
        };
    }
    throw ritz::ConfigError("source must be 'case:<name>' or 'poly:c0,c1,...'");
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

int cmd_solve(const Config& cfg)
{
    ritz::ManufacturedCase c = ritz::find_case(cfg.get_string("solve.case", "poisson_1d_sine"));
    if (cfg.has("solve.source")) {
        // estimator experiments may swap the load term; metrics still compare
        // against the case's exact solution
        c.source = parse_source(cfg.get_string("solve.source", ""));
    }
    const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));

    const int n_rungs = static_cast<int>(cfg.get_int("solve.rungs", 3));
    ritz::LadderConfig ladder = ritz::LadderConfig::defaults(n_rungs);

    const std::vector<double> widths = doubles_or(cfg, "solve.widths", {});
    const std::vector<double> lambdas = doubles_or(cfg, "solve.lambdas", {});
    const std::vector<double> deltas = doubles_or(cfg, "solve.deltas", {});
    const std::size_t listed = std::max({widths.size(), lambdas.size(), deltas.size()});
    if (listed > 0) {
        ladder = ritz::LadderConfig::defaults(static_cast<int>(listed));
        for (std::size_t i = 0; i < listed; ++i) {
            if (i < widths.size()) {
                ladder.rungs[i].width = static_cast<int>(widths[i]);
            }
            if (i < lambdas.size()) {
                ladder.rungs[i].lambda = lambdas[i];
            }
            if (i < deltas.size()) {
                ladder.rungs[i].delta = deltas[i];
            }
        }
    }
    const std::vector<double> steps = doubles_or(cfg, "solve.steps", {5000});
    for (std::size_t i = 0; i < ladder.rungs.size(); ++i) {
        ladder.rungs[i].max_steps = static_cast<int>(steps[std::min(i, steps.size() - 1)]);
        ladder.rungs[i].n_interior =
            static_cast<std::size_t>(cfg.get_int("solve.n_interior", 1024));
        ladder.rungs[i].m_boundary =
            static_cast<std::size_t>(cfg.get_int("solve.m_boundary", 256));
    }
    ladder.seed = seed;
    ladder.depth_override = static_cast<int>(cfg.get_int("solve.depth", 0));
    ladder.eval_resolution = static_cast<int>(cfg.get_int("solve.eval_resolution", 0));
    ladder.record_timings = cfg.get_bool("timings", false);
    const std::string algo = cfg.get_string("solve.optimizer", "adam");
    if (algo == "sgd") {
        ladder.optimizer.algo = ritz::OptimizerConfig::Algo::Sgd;
    } else if (algo != "adam") {
        throw ritz::ConfigError("unknown optimizer '" + algo + "' (adam|sgd)");
    }
    ladder.optimizer.step_size = cfg.get_double("solve.lr", 1e-3);
    ladder.optimizer.beta1 = cfg.get_double("solve.beta1", 0.9);
    ladder.optimizer.beta2 = cfg.get_double("solve.beta2", 0.999);
    ladder.optimizer.eps = cfg.get_double("solve.eps", 1e-8);
    ladder.optimizer.feature_step_scale = cfg.get_double("solve.feature_scale", 0.01);
    const std::string decay = cfg.get_string("solve.decay", "cosine");
    if (decay == "none") {
        ladder.optimizer.decay = ritz::OptimizerConfig::Decay::None;
    } else if (decay != "cosine") {
        throw ritz::ConfigError("unknown decay '" + decay + "' (cosine|none)");
    }
    ladder.validate();

    const std::filesystem::path dir = prepare_out_dir(cfg);
    std::ofstream jsonl(dir / "rungs.jsonl", std::ios::binary | std::ios::trunc);

    ritz::CsvWriter csv({"case", "rung", "width", "lambda", "delta", "steps", "loss", "l2_rel",
                         "h1_rel", "gap", "seconds"});

    const auto emit = [&](const ritz::RungReport& r) {
        nlohmann::json record;
        record["case"] = c.name;
        record["rung"] = r.rung;
        record["width"] = r.width;
        record["lambda"] = r.lambda;
        record["delta"] = r.delta;
        record["steps"] = r.steps;
        record["loss"] = r.final_loss;
        record["l2_rel"] = r.l2_rel;
        record["h1_rel"] = r.h1_rel;
        if (r.gap.has_value()) {
            record["gap"] = *r.gap;
        } else {
            record["gap"] = nullptr;
        }
        record["boundary_mean_square"] = r.boundary_mean_square;
        record["seconds"] = r.seconds;
        nlohmann::json trace = nlohmann::json::array();
        for (const auto& [step, loss] : r.loss_trace) {
            trace.push_back({step, loss});
        }
        record["loss_trace"] = std::move(trace);
        jsonl << record.dump() << "\n";
        jsonl.flush();

        csv.add_row({c.name, std::to_string(r.rung), std::to_string(r.width), fmt(r.lambda),
                     fmt(r.delta), std::to_string(r.steps), fmt(r.final_loss), fmt(r.l2_rel),
                     fmt(r.h1_rel), r.gap.has_value() ? fmt(*r.gap) : std::string(),
                     fmt(r.seconds)});

        std::cout << c.name << " rung " << r.rung << ": width=" << r.width
                  << " lambda=" << fmt(r.lambda) << " steps=" << r.steps
                  << " loss=" << fmt(r.final_loss) << " l2_rel=" << fmt(r.l2_rel) << "\n";
    };

    const ritz::LadderResult result = ritz::run_ladder(c, ladder, emit);
    csv.save(dir / "summary.csv");
    ritz::write_text_file(dir / "final_net.json", ritz::to_json_string(result.final_params));
    std::cout << "wrote " << (dir / "summary.csv").string() << " (" << result.reports.size()
              << " rungs)\n";
    return 0;
}

// ---------------------------------------------------------------------------
// gradcheck
// ---------------------------------------------------------------------------

int cmd_gradcheck(const Config& cfg)
{
    ritz::GradCheckSuiteConfig suite;
    suite.nets = static_cast<int>(cfg.get_int("gradcheck.nets", 20));
    suite.max_width = static_cast<int>(cfg.get_int("gradcheck.max_width", 32));
    suite.n_interior = static_cast<std::size_t>(cfg.get_int("gradcheck.n_interior", 8));
    suite.m_boundary = static_cast<std::size_t>(cfg.get_int("gradcheck.m_boundary", 4));
    suite.tolerance = cfg.get_double("gradcheck.tolerance", 1e-5);
    suite.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    suite.inject_sign_bug = cfg.get_bool("gradcheck.inject_bug", false);
    if (cfg.has("gradcheck.dims")) {
        suite.dims.clear();
        for (double d : cfg.get_doubles("gradcheck.dims")) {
            suite.dims.push_back(static_cast<int>(d));
        }
    }
    if (cfg.has("gradcheck.depths")) {
        suite.depths.clear();
        for (double d : cfg.get_doubles("gradcheck.depths")) {
            suite.depths.push_back(static_cast<int>(d));
        }
    }

    const std::filesystem::path dir = prepare_out_dir(cfg);
    const std::vector<ritz::GradCheckResult> results = ritz::run_gradcheck_suite(suite);

    ritz::CsvWriter csv({"net_seed", "d", "depth", "width", "max_rel_err", "excluded"});
    const ritz::GradCheckResult* worst = nullptr;
    bool all_ok = true;
    for (const auto& r : results) {
        csv.add_row({std::to_string(r.net_seed), std::to_string(r.input_dim),
                     std::to_string(r.depth), std::to_string(r.width), fmt(r.max_rel_error),
                     std::to_string(r.excluded)});
        if (worst == nullptr || r.max_rel_error > worst->max_rel_error) {
            worst = &r;
        }
        all_ok = all_ok && r.max_rel_error <= suite.tolerance;
    }
    csv.save(dir / "gradcheck.csv");
    if (worst != nullptr) {
        std::cout << "worst: net_seed=" << worst->net_seed << " d=" << worst->input_dim
                  << " depth=" << worst->depth << " width=" << worst->width
                  << " max_rel_err=" << fmt(worst->max_rel_error)
                  << " excluded=" << worst->excluded << "\n";
    }
    std::cout << (all_ok ? "gradcheck: all nets within tolerance "
                         : "gradcheck: TOLERANCE EXCEEDED ")
              << fmt(suite.tolerance) << "\n";
    return all_ok ? 0 : 2;
}

// ---------------------------------------------------------------------------
// mc-check
// ---------------------------------------------------------------------------

int cmd_mc_check(const Config& cfg)
{
    const std::string which = cfg.get_string("mc_check.case", "hat_energy");
    const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    const int n_seeds = static_cast<int>(cfg.get_int("mc_check.seeds", 50));
    const int jobs = static_cast<int>(cfg.get_int("jobs", 1));
    std::vector<double> ns = doubles_or(cfg, "mc_check.n", {1024, 4096, 16384});

    ritz::Domain domain = ritz::Domain::hypercube(0.0, 1.0, 2);
    if (cfg.has("mc_check.domain")) {
        domain = ritz::parse_domain(cfg.get("mc_check.domain"));
    }

    // estimator under test + analytic value
    std::function<double(std::size_t, std::uint64_t)> estimate;
    double analytic = 0.0;
    if (which == "hat_energy") {
        const ritz::NetworkParams hat =
            ritz::pwl_to_network_1d(ritz::hat_breakpoints(0.0, 0.5, 1.0, 1.0));
        const ritz::EnergySpec spec(ritz::Domain::interval(0.0, 1.0), 2.0, 0.0,
                                    [](std::span<const double>) { return 1.0; });
        analytic = 1.5;
        estimate = [hat, spec](std::size_t n, std::uint64_t s) {
            return ritz::estimate_interior(hat, spec, ritz::sample_interior(spec.domain(), n, s));
        };
    } else if (which == "x1") {
        analytic = 0.5 * (domain.lo() + domain.hi()) * domain.volume();
        estimate = [domain](std::size_t n, std::uint64_t s) {
            const ritz::SampleBatch batch = ritz::sample_interior(domain, n, s);
            double acc = 0.0;
            for (std::size_t i = 0; i < batch.count; ++i) {
                acc += batch.point(i)[0];
            }
            return batch.weight * acc;
        };
    } else if (which == "const") {
        analytic = domain.volume();
        estimate = [domain](std::size_t n, std::uint64_t s) {
            const ritz::SampleBatch batch = ritz::sample_interior(domain, n, s);
            return batch.weight * static_cast<double>(batch.count);
        };
    } else {
        throw ritz::ConfigError("unknown mc-check case '" + which + "' (hat_energy|x1|const)");
    }

    const std::filesystem::path dir = prepare_out_dir(cfg);
    ritz::CsvWriter csv({"case", "n", "seeds", "mean", "sd", "se", "analytic"});
    for (double nd : ns) {
        const std::size_t n = static_cast<std::size_t>(nd);
        std::vector<double> values(n_seeds, 0.0);
        const auto worker = [&](int begin, int end) {
            for (int s = begin; s < end; ++s) {
                values[s] = estimate(n, ritz::derive_seed(ritz::derive_seed(seed, n), s));
            }
        };
        if (jobs <= 1) {
            worker(0, n_seeds);
        } else {
            std::vector<std::thread> pool;
            const int chunk = (n_seeds + jobs - 1) / jobs;
            for (int j = 0; j < jobs; ++j) {
                const int begin = j * chunk;
                const int end = std::min(n_seeds, begin + chunk);
                if (begin < end) {
                    pool.emplace_back(worker, begin, end);
                }
            }
            for (auto& t : pool) {
                t.join();
            }
        }
        double mean = 0.0;
        for (double v : values) {
            mean += v;
        }
        mean /= n_seeds;
        double var = 0.0;
        for (double v : values) {
            var += (v - mean) * (v - mean);
        }
        var = n_seeds > 1 ? var / (n_seeds - 1) : 0.0;
        const double sd = std::sqrt(var);
        const double se = sd / std::sqrt(static_cast<double>(n_seeds));
        csv.add_row({which, std::to_string(n), std::to_string(n_seeds), fmt(mean), fmt(sd),
                     fmt(se), fmt(analytic)});
        std::cout << which << " n=" << n << " mean=" << fmt(mean) << " sd=" << fmt(sd)
                  << " se=" << fmt(se) << " analytic=" << fmt(analytic) << "\n";
    }
    csv.save(dir / "mc_check.csv");
    return 0;
}

// ---------------------------------------------------------------------------
// pwl
// ---------------------------------------------------------------------------

ritz::Breakpoints1D parse_breakpoints(const std::string& text)
{
    ritz::Breakpoints1D bp;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t colon = text.find(':', pos);
        if (colon == std::string::npos) {
            throw ritz::ConfigError("breakpoints must be 'x:v,x:v,...'");
        }
        std::size_t comma = text.find(',', colon);
        if (comma == std::string::npos) {
            comma = text.size();
        }
        bp.knots.push_back(std::strtod(text.substr(pos, colon - pos).c_str(), nullptr));
        bp.values.push_back(
            std::strtod(text.substr(colon + 1, comma - colon - 1).c_str(), nullptr));
        pos = comma + 1;
    }
    return bp;
}

int cmd_pwl(const Config& cfg)
{
    const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    const std::filesystem::path dir = prepare_out_dir(cfg);
    ritz::CsvWriter csv({"fixture", "points", "max_abs_dev", "depth", "width"});
    constexpr std::size_t kPoints = 10000;

    const auto report = [&](const std::string& fixture, const ritz::NetworkParams& net,
                            const std::function<double(std::span<const double>)>& oracle,
                            double lo, double hi) {
        ritz::Rng rng(ritz::derive_seed(seed, 0x9e7));
        std::vector<double> x(net.input_dim());
        double worst = 0.0;
        for (std::size_t i = 0; i < kPoints; ++i) {
            for (double& v : x) {
                v = rng.uniform(lo, hi);
            }
            const double got = ritz::forward(net, x);
            const double want = oracle(x);
            worst = std::max(worst, std::abs(got - want) / (1.0 + std::abs(want)));
        }
        csv.add_row({fixture, std::to_string(kPoints), fmt(worst), std::to_string(net.depth()),
                     std::to_string(net.width())});
        std::cout << fixture << ": max_abs_dev=" << fmt(worst) << " depth=" << net.depth()
                  << " width=" << net.width() << "\n";
        return worst;
    };

    double worst = 0.0;
    const std::string fixture = cfg.get_string("pwl.fixture", "hat");
    if (cfg.has("pwl.breakpoints")) {
        const ritz::Breakpoints1D bp = parse_breakpoints(cfg.get_string("pwl.breakpoints", ""));
        const ritz::NetworkParams net = ritz::pwl_to_network_1d(bp);
        worst = report(
            "breakpoints", net,
            [&bp](std::span<const double> x) { return ritz::pwl_value(bp, x[0]); },
            bp.knots.front() - 1.0, bp.knots.back() + 1.0);
    } else if (fixture == "hat") {
        const ritz::Breakpoints1D bp = ritz::hat_breakpoints(0.0, 0.5, 1.0, 1.0);
        const ritz::NetworkParams net = ritz::pwl_to_network_1d(bp);
        worst = report(
            "hat", net, [&bp](std::span<const double> x) { return ritz::pwl_value(bp, x[0]); },
            -0.5, 1.5);
    } else if (fixture == "max_affine") {
        const int d = static_cast<int>(cfg.get_int("pwl.dim", 2));
        const int k = static_cast<int>(cfg.get_int("pwl.affines", 3));
        ritz::Rng rng(ritz::derive_seed(seed, 0xaff));
        std::vector<ritz::NetworkParams> nets;
        std::vector<std::vector<double>> slopes;
        std::vector<double> intercepts;
        for (int i = 0; i < k; ++i) {
            std::vector<double> slope(d);
            for (double& s : slope) {
                s = rng.uniform(-2.0, 2.0);
            }
            const double b = rng.uniform(-1.0, 1.0);
            nets.push_back(ritz::affine_network(slope, b));
            slopes.push_back(std::move(slope));
            intercepts.push_back(b);
        }
        const ritz::NetworkParams net = ritz::relu_max(nets);
        worst = report(
            "max_affine", net,
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
            -1.0, 1.0);
    } else {
        throw ritz::ConfigError("unknown pwl fixture '" + fixture
                                + "' (hat|max_affine or --breakpoints)");
    }
    csv.save(dir / "pwl.csv");
    return worst <= 1e-12 ? 0 : 2;
}

// ---------------------------------------------------------------------------
// interp
// ---------------------------------------------------------------------------

int cmd_interp(const Config& cfg)
{
    const int dim = static_cast<int>(cfg.get_int("interp.dim", 1));
    if (dim < 1 || dim > 3) {
        throw ritz::ConfigError("interp.dim must be 1, 2 or 3");
    }
    const std::vector<double> deltas = doubles_or(cfg, "interp.deltas", {0.4, 0.2, 0.1, 0.05});
    const std::vector<double> ps = doubles_or(cfg, "interp.p", {2.0});
    const int factor = static_cast<int>(cfg.get_int("interp.resolution_factor", 8));

    const ritz::ScalarField bump = [](std::span<const double> x) {
        return ritz::standard_bump(x);
    };
    const ritz::VectorField bump_grad = [](std::span<const double> x, std::span<double> g) {
        ritz::standard_bump_gradient(x, g);
    };

    const std::filesystem::path dir = prepare_out_dir(cfg);
    ritz::CsvWriter csv({"dim", "delta", "p", "lp_err", "w1p_err", "support_ok"});
    const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));

    for (double delta : deltas) {
        const ritz::CpwlInterpolant interp =
            ritz::kuhn_interpolant(bump, ritz::unit_ball_box(dim), delta);
        const ritz::Box box = interp.grid_box();
        double extent = 0.0;
        for (int k = 0; k < dim; ++k) {
            extent = std::max(extent, box.hi[k] - box.lo[k]);
        }
        const int resolution = static_cast<int>(std::ceil(extent / (delta / factor)));

        // support containment: everything farther than delta*sqrt(d) from the
        // unit ball must evaluate to exactly zero
        ritz::Rng rng(ritz::derive_seed(seed, 0x5b));
        bool support_ok = true;
        const double shell = delta * std::sqrt(static_cast<double>(dim));
        std::vector<double> x(dim);
        for (int i = 0; i < 200; ++i) {
            double norm = 0.0;
            for (double& v : x) {
                v = rng.uniform(-1.0, 1.0);
                norm += v * v;
            }
            norm = std::sqrt(norm);
            if (norm == 0.0) {
                continue;
            }
            const double target = 1.0 + shell + 1e-9 + 0.3 * rng.uniform();
            for (double& v : x) {
                v *= target / norm;
            }
            if (interp.value(x) != 0.0) {
                support_ok = false;
            }
        }

        for (double p : ps) {
            const auto [lp, w1p] = ritz::sobolev_error(bump, bump_grad, interp, p, resolution);
            csv.add_row({std::to_string(dim), fmt(delta), fmt(p), fmt(lp), fmt(w1p),
                         support_ok ? "1" : "0"});
            std::cout << "d=" << dim << " delta=" << fmt(delta) << " p=" << fmt(p)
                      << " lp=" << fmt(lp) << " w1p=" << fmt(w1p)
                      << " support_ok=" << (support_ok ? "1" : "0") << "\n";
        }
    }
    csv.save(dir / "interp.csv");
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ritzkit: penalized variational training of ReLU networks"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string case_name;
    std::string widths;
    std::string lambdas;
    std::string deltas;
    std::string steps;
    std::optional<int> rungs;
    std::optional<int> depth;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", common.config_path, "config file");
        cmd->add_option("--seed", common.seed, "global seed (RITZKIT_SEED as fallback)");
        cmd->add_option("--out", common.out, "output directory");
        cmd->add_option("--jobs", common.jobs, "worker threads for independent runs");
        cmd->add_flag("--timings", common.timings,
                      "record wall time (breaks rerun byte-identity)");
    };

    CLI::App* solve = app.add_subcommand("solve", "run a growth-schedule solve on a case");
    add_common(solve);
    solve->add_option("--case", case_name, "manufactured case name");
    solve->add_option("--rungs", rungs, "number of rungs (default schedules)");
    solve->add_option("--widths", widths, "comma list of hidden widths");
    solve->add_option("--lambdas", lambdas, "comma list of penalty weights");
    solve->add_option("--deltas", deltas, "comma list of stopping thresholds");
    solve->add_option("--steps", steps, "per-rung step budget (scalar or comma list)");
    solve->add_option("--depth", depth, "network depth override");

    std::optional<int> gc_nets;
    bool gc_inject = false;
    CLI::App* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient suite");
    add_common(gradcheck);
    gradcheck->add_option("--nets", gc_nets, "number of random nets");
    gradcheck->add_flag("--inject-bug", gc_inject, "negative control: flip one gradient sign");

    std::string mc_case;
    std::string mc_n;
    std::optional<int> mc_seeds;
    CLI::App* mc = app.add_subcommand("mc-check", "Monte-Carlo estimator statistics");
    add_common(mc);
    mc->add_option("--case", mc_case, "hat_energy|x1|const");
    mc->add_option("--n", mc_n, "comma list of sample counts");
    mc->add_option("--seeds", mc_seeds, "seed repetitions per count");

    std::string pwl_breakpoints;
    bool pwl_hat = false;
    std::optional<int> pwl_affines;
    std::optional<int> pwl_dim;
    CLI::App* pwl = app.add_subcommand("pwl", "exact CPWL representation checks");
    add_common(pwl);
    pwl->add_flag("--hat", pwl_hat, "hat-function fixture");
    pwl->add_option("--breakpoints", pwl_breakpoints, "x:v,x:v,... fixture");
    pwl->add_option("--max-affines", pwl_affines, "max over k random affine maps");
    pwl->add_option("--dim", pwl_dim, "input dimension for --max-affines");

    std::string interp_deltas;
    std::string interp_p;
    bool interp_bump = false;
    std::optional<int> interp_dim;
    CLI::App* interp = app.add_subcommand("interp", "triangulation interpolant error sweeps");
    add_common(interp);
    interp->add_flag("--bump", interp_bump, "smooth bump fixture (the only fixture)");
    interp->add_option("--dim", interp_dim, "dimension (1-3)");
    interp->add_option("--deltas", interp_deltas, "comma list of mesh widths");
    interp->add_option("--p", interp_p, "comma list of exponents");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    const auto list_to_config = [](Config& cfg, const std::string& key, const std::string& text) {
        if (!text.empty()) {
            ConfigValue::List list;
            std::size_t pos = 0;
            while (pos <= text.size()) {
                std::size_t comma = text.find(',', pos);
                if (comma == std::string::npos) {
                    comma = text.size();
                }
                list.push_back(
                    ConfigValue(std::strtod(text.substr(pos, comma - pos).c_str(), nullptr)));
                pos = comma + 1;
            }
            cfg.set(key, ConfigValue(std::move(list)));
        }
    };

    try {
        if (app.got_subcommand(solve)) {
            const Config cfg = resolve_config(common, "solve", [&](Config& c) {
                if (!case_name.empty()) {
                    c.set("solve.case", ConfigValue(case_name));
                }
                if (rungs.has_value()) {
                    c.set("solve.rungs", ConfigValue(static_cast<double>(*rungs)));
                }
                if (depth.has_value()) {
                    c.set("solve.depth", ConfigValue(static_cast<double>(*depth)));
                }
                list_to_config(c, "solve.widths", widths);
                list_to_config(c, "solve.lambdas", lambdas);
                list_to_config(c, "solve.deltas", deltas);
                list_to_config(c, "solve.steps", steps);
            });
            return cmd_solve(cfg);
        }
        if (app.got_subcommand(gradcheck)) {
            const Config cfg = resolve_config(common, "gradcheck", [&](Config& c) {
                if (gc_nets.has_value()) {
                    c.set("gradcheck.nets", ConfigValue(static_cast<double>(*gc_nets)));
                }
                if (gc_inject) {
                    c.set("gradcheck.inject_bug", ConfigValue(true));
                }
            });
            return cmd_gradcheck(cfg);
        }
        if (app.got_subcommand(mc)) {
            const Config cfg = resolve_config(common, "mc_check", [&](Config& c) {
                if (!mc_case.empty()) {
                    c.set("mc_check.case", ConfigValue(mc_case));
                }
                if (mc_seeds.has_value()) {
                    c.set("mc_check.seeds", ConfigValue(static_cast<double>(*mc_seeds)));
                }
                list_to_config(c, "mc_check.n", mc_n);
            });
            return cmd_mc_check(cfg);
        }
        if (app.got_subcommand(pwl)) {
            const Config cfg = resolve_config(common, "pwl", [&](Config& c) {
                if (pwl_hat) {
                    c.set("pwl.fixture", ConfigValue(std::string("hat")));
                }
                if (!pwl_breakpoints.empty()) {
                    c.set("pwl.breakpoints", ConfigValue(pwl_breakpoints));
                }
                if (pwl_affines.has_value()) {
                    c.set("pwl.fixture", ConfigValue(std::string("max_affine")));
                    c.set("pwl.affines", ConfigValue(static_cast<double>(*pwl_affines)));
                }
                if (pwl_dim.has_value()) {
                    c.set("pwl.dim", ConfigValue(static_cast<double>(*pwl_dim)));
                }
            });
            return cmd_pwl(cfg);
        }
        if (app.got_subcommand(interp)) {
            const Config cfg = resolve_config(common, "interp", [&](Config& c) {
                (void)interp_bump; // the bump is the only fixture
                if (interp_dim.has_value()) {
                    c.set("interp.dim", ConfigValue(static_cast<double>(*interp_dim)));
                }
                list_to_config(c, "interp.deltas", interp_deltas);
                list_to_config(c, "interp.p", interp_p);
            });
            return cmd_interp(cfg);
        }
    } catch (const ritz::TrainAbort& e) {
        std::cerr << "numeric failure: " << e.what() << " (step " << e.step
                  << ", |theta| = " << e.parameter_norm << ")\n";
        return 2;
    } catch (const ritz::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const ritz::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ritz::ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
