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

#include "ritz/config.hpp"
#include "ritz/errors.hpp"

#include <doctest.h>

using namespace ritz;

TEST_CASE("config: scalars, bare words, comments")
{
    const Config cfg = Config::parse(
        "# a comment\n"
        "seed = 7\n"
        "name = poisson_1d_sine   # trailing comment\n"
        "quoted = \"two words\"\n"
        "flag = true\n"
        "rate = 1e-3\n");
    CHECK(cfg.get_int("seed", 0) == 7);
    CHECK(cfg.get_string("name", "") == "poisson_1d_sine");
    CHECK(cfg.get_string("quoted", "") == "two words");
    CHECK(cfg.get_bool("flag", false));
    CHECK(cfg.get_double("rate", 0) == 1e-3);
}

TEST_CASE("config: lists with and without brackets")
{
    const Config cfg = Config::parse("widths = 8,16,32\nlambdas = [10, 100, 1000]\n");
    CHECK(cfg.get_doubles("widths") == std::vector<double>{8, 16, 32});
    CHECK(cfg.get_doubles("lambdas") == std::vector<double>{10, 100, 1000});
}

TEST_CASE("config: sections and dotted access")
{
    const Config cfg = Config::parse("seed = 1\n[solve]\ncase = poisson_ball\nsteps = 100\n");
    CHECK(cfg.has("solve.case"));
    CHECK(cfg.get_string("solve.case", "") == "poisson_ball");
    CHECK(cfg.get_int("solve.steps", 0) == 100);
    CHECK_FALSE(cfg.has("solve.missing"));
    CHECK_THROWS_AS(cfg.get("gradcheck.nets"), ConfigError);
}

TEST_CASE("config: inline tables and nested lists parse as domains")
{
    const Config cfg = Config::parse(
        "[mc_check]\n"
        "domain = {kind:\"hypercube\", a:0, b:1, dim:2}\n"
        "ball = {kind:\"ball\", dim:2, radius:1, center:[0, 0]}\n"
        "iv = {kind:\"interval\", a:-1, b:1}\n");
    const Domain cube = parse_domain(cfg.get("mc_check.domain"));
    CHECK(cube.kind() == DomainKind::Hypercube);
    CHECK(cube.dim() == 2);
    const Domain ball = parse_domain(cfg.get("mc_check.ball"));
    CHECK(ball.kind() == DomainKind::Ball);
    CHECK(ball.radius() == 1.0);
    const Domain iv = parse_domain(cfg.get("mc_check.iv"));
    CHECK(iv.volume() == 2.0);

    const Config bad = Config::parse("[mc_check]\ndomain = {kind:\"torus\", a:0}\n");
    CHECK_THROWS_AS(parse_domain(bad.get("mc_check.domain")), ConfigError);
}

TEST_CASE("config: unknown keys are rejected")
{
    const Config cfg = Config::parse("seed = 1\n[solve]\ncase = x\ntypo_key = 2\n");
    CHECK_THROWS_AS(cfg.require_known_keys({"seed", "solve.case"}), ConfigError);
    CHECK_NOTHROW(cfg.require_known_keys({"seed", "solve.case", "solve.typo_key"}));
}

TEST_CASE("config: canonical serialization round-trips")
{
    const Config cfg = Config::parse(
        "zeta = 1\nseed = 7\n[solve]\nwidths = 8,16\ncase = poisson_1d_sine\n");
    const std::string once = cfg.serialize();
    const std::string twice = Config::parse(once).serialize();
    CHECK(once == twice);
    // scalars before sections, keys sorted
    CHECK(once.find("seed = 7") < once.find("zeta = 1"));
    CHECK(once.find("zeta = 1") < once.find("[solve]"));
    CHECK(once.find("case =") < once.find("widths ="));
}

TEST_CASE("config: type and syntax errors")
{
    CHECK_THROWS_AS(Config::parse("key 7\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse("key = {a:1\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse("key = \"unterminated\n"), ConfigError);
    const Config cfg = Config::parse("x = 1.5\n");
    CHECK_THROWS_AS(cfg.get("x").as_int(), ConfigError);
    CHECK_THROWS_AS(cfg.get("x").as_string(), ConfigError);
}

TEST_CASE("config: set on dotted keys")
{
    Config cfg;
    cfg.set("seed", ConfigValue(3.0));
    cfg.set("solve.case", ConfigValue(std::string("poisson_ball")));
    cfg.set("solve.steps", ConfigValue(50.0));
    CHECK(cfg.get_int("seed", 0) == 3);
    CHECK(cfg.get_string("solve.case", "") == "poisson_ball");
    cfg.set("solve.case", ConfigValue(std::string("plaplace_1d")));
    CHECK(cfg.get_string("solve.case", "") == "plaplace_1d");
}

TEST_CASE("domain config echo round-trips")
{
    for (const Domain& d :
         {Domain::interval(-1, 1), Domain::hypercube(0, 1, 3), Domain::ball({0.5, -0.5}, 2.0)}) {
        const Domain back = parse_domain(domain_to_config(d));
        CHECK(back.kind() == d.kind());
        CHECK(back.dim() == d.dim());
        CHECK(back.volume() == doctest::Approx(d.volume()).epsilon(1e-15));
    }
}
