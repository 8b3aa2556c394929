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

// End-to-end checks of the ritzkit executable; the binary path arrives via
// the RITZKIT_BIN environment variable set by ctest.

#include "ritz/errors.hpp"
#include "ritz/io.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

namespace {

namespace fs = std::filesystem;

std::string binary()
{
    const char* bin = std::getenv("RITZKIT_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "RITZKIT_BIN must point at the ritzkit executable");
    return bin;
}

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

RunResult run(const std::string& args)
{
    static int counter = 0;
    const fs::path dir = fs::path("cli_tmp");
    fs::create_directories(dir);
    const fs::path out_file = dir / ("stdout." + std::to_string(counter));
    const fs::path err_file = dir / ("stderr." + std::to_string(counter));
    ++counter;
    const std::string cmd = binary() + " " + args + " >" + out_file.string() + " 2>"
                            + err_file.string();
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WEXITSTATUS(status);
    result.out = ritz::read_text_file(out_file);
    result.err = ritz::read_text_file(err_file);
    return result;
}

const std::string kTinySolve =
    "solve --case poisson_1d_sine --widths 8 --lambdas 10 --deltas 0.01 --steps 120 --seed 5";

} // namespace

TEST_CASE("cli: help exits zero, missing subcommand exits one")
{
    CHECK(run("--help").exit_code == 0);
    CHECK(run("").exit_code == 1);
    CHECK(run("frobnicate").exit_code == 1);
}

TEST_CASE("cli: unknown case exits 1 and lists the registry")
{
    const RunResult r = run("solve --case nonexistent --out cli_tmp/unknown");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("poisson_1d_sine") != std::string::npos);
}

TEST_CASE("cli: solve writes the pinned CSV schema and is byte-identical on rerun")
{
    fs::remove_all("cli_tmp/solve_a");
    const RunResult a = run(kTinySolve + " --out cli_tmp/solve_a");
    REQUIRE(a.exit_code == 0);

    const std::string csv = ritz::read_text_file("cli_tmp/solve_a/summary.csv");
    CHECK(csv.rfind("case,rung,width,lambda,delta,steps,loss,l2_rel,h1_rel,gap,seconds\n", 0)
          == 0);
    // one header + one rung
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    // seconds column is the deterministic placeholder by default
    CHECK(csv.substr(csv.size() - 3) == ",0\n");

    // identical command, identical output directory: every artifact must be
    // byte-identical on the rerun
    std::map<std::string, std::string> snapshot;
    for (const char* name : {"summary.csv", "rungs.jsonl", "config.resolved", "final_net.json"}) {
        snapshot[name] = ritz::read_text_file(fs::path("cli_tmp/solve_a") / name);
    }
    const RunResult b = run(kTinySolve + " --out cli_tmp/solve_a");
    REQUIRE(b.exit_code == 0);
    for (const auto& [name, content] : snapshot) {
        CAPTURE(name);
        CHECK(ritz::read_text_file(fs::path("cli_tmp/solve_a") / name) == content);
    }
}

TEST_CASE("cli: a run is reproducible from its config.resolved alone")
{
    fs::remove_all("cli_tmp/solve_c");
    const RunResult c =
        run("solve --config cli_tmp/solve_a/config.resolved --out cli_tmp/solve_c");
    REQUIRE(c.exit_code == 0);
    CHECK(ritz::read_text_file("cli_tmp/solve_a/summary.csv")
          == ritz::read_text_file("cli_tmp/solve_c/summary.csv"));
    CHECK(ritz::read_text_file("cli_tmp/solve_a/rungs.jsonl")
          == ritz::read_text_file("cli_tmp/solve_c/rungs.jsonl"));
}

TEST_CASE("cli: RITZKIT_SEED is the default-seed fallback")
{
    fs::remove_all("cli_tmp/seeded");
    const std::string cmd = "RITZKIT_SEED=99 " + binary()
                            + " solve --case poisson_1d_sine --widths 8 --lambdas 10"
                              " --deltas 0.01 --steps 40 --out cli_tmp/seeded >/dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    const std::string resolved = ritz::read_text_file("cli_tmp/seeded/config.resolved");
    CHECK(resolved.find("seed = 99") != std::string::npos);
}

TEST_CASE("cli: source-term overrides parse by name and as polynomials")
{
    ritz::write_text_file("cli_tmp/src.cfg", "[solve]\nsource = \"poly:1,0,2\"\n");
    const RunResult poly = run(
        "solve --case poisson_1d_sine --widths 8 --lambdas 10 --deltas 0.01 --steps 40"
        " --config cli_tmp/src.cfg --out cli_tmp/src_poly");
    CHECK(poly.exit_code == 0);

    ritz::write_text_file("cli_tmp/src2.cfg", "[solve]\nsource = \"case:poisson_1d_sine\"\n");
    const RunResult named = run(
        "solve --case poisson_1d_pwl --widths 8 --lambdas 10 --deltas 0.01 --steps 40"
        " --config cli_tmp/src2.cfg --out cli_tmp/src_named");
    CHECK(named.exit_code == 0);

    ritz::write_text_file("cli_tmp/src3.cfg", "[solve]\nsource = \"what:now\"\n");
    const RunResult bad = run(
        "solve --case poisson_1d_sine --widths 8 --lambdas 10 --deltas 0.01 --steps 40"
        " --config cli_tmp/src3.cfg --out cli_tmp/src_bad");
    CHECK(bad.exit_code == 1);
}

TEST_CASE("cli: unknown config keys are rejected")
{
    ritz::write_text_file("cli_tmp/bad.cfg", "seed = 1\n[solve]\nmystery = 2\n");
    const RunResult r = run("solve --config cli_tmp/bad.cfg --out cli_tmp/bad_out");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("mystery") != std::string::npos);
}

TEST_CASE("cli: gradcheck passes and the injected bug is caught")
{
    const RunResult ok = run("gradcheck --nets 6 --out cli_tmp/gc");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("worst:") != std::string::npos);
    const std::string csv = ritz::read_text_file("cli_tmp/gc/gradcheck.csv");
    CHECK(csv.rfind("net_seed,d,depth,width,max_rel_err,excluded\n", 0) == 0);

    const RunResult bug = run("gradcheck --nets 6 --inject-bug --out cli_tmp/gc_bug");
    CHECK(bug.exit_code == 2);
}

TEST_CASE("cli: mc-check emits decreasing standard errors")
{
    const RunResult r = run("mc-check --case hat_energy --n 256,1024 --seeds 12 --out cli_tmp/mc");
    REQUIRE(r.exit_code == 0);
    const std::string csv = ritz::read_text_file("cli_tmp/mc/mc_check.csv");
    CHECK(csv.rfind("case,n,seeds,mean,sd,se,analytic\n", 0) == 0);
    // parse the two se values
    std::vector<double> se;
    std::size_t pos = csv.find('\n') + 1;
    while (pos < csv.size()) {
        std::size_t end = csv.find('\n', pos);
        if (end == std::string::npos) {
            break;
        }
        const std::string line = csv.substr(pos, end - pos);
        std::size_t comma = 0;
        int field = 0;
        std::size_t start = 0;
        for (int f = 0; f < 5; ++f) {
            comma = line.find(',', start);
            start = comma + 1;
            ++field;
        }
        se.push_back(std::strtod(line.substr(start).c_str(), nullptr));
        pos = end + 1;
    }
    REQUIRE(se.size() == 2);
    CHECK(se[1] < se[0]);
}

TEST_CASE("cli: pwl fixtures report machine-precision deviations")
{
    const RunResult hat = run("pwl --hat --out cli_tmp/pwl_hat");
    CHECK(hat.exit_code == 0);
    CHECK(hat.out.find("max_abs_dev=") != std::string::npos);

    const RunResult bp = run("pwl --breakpoints 0:0,0.25:1,0.75:-0.5,1:0 --out cli_tmp/pwl_bp");
    CHECK(bp.exit_code == 0);

    const RunResult max = run("pwl --max-affines 4 --dim 2 --out cli_tmp/pwl_max");
    CHECK(max.exit_code == 0);
}

TEST_CASE("cli: interp sweep emits monotone errors and support flags")
{
    const RunResult r =
        run("interp --bump --dim 1 --deltas 0.4,0.2 --p 2 --out cli_tmp/interp");
    REQUIRE(r.exit_code == 0);
    const std::string csv = ritz::read_text_file("cli_tmp/interp/interp.csv");
    CHECK(csv.rfind("dim,delta,p,lp_err,w1p_err,support_ok\n", 0) == 0);
    CHECK(csv.find(",0\n") == std::string::npos); // support_ok everywhere
    const RunResult rerun =
        run("interp --bump --dim 1 --deltas 0.4,0.2 --p 2 --out cli_tmp/interp");
    REQUIRE(rerun.exit_code == 0);
    const bool identical = ritz::read_text_file("cli_tmp/interp/interp.csv") == csv;
    CHECK(identical);
}
