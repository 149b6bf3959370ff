// Copyright 2026 The dressim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dressim/cli.hpp"

namespace dressim::cli {
namespace test_cli {

namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

static fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / "dressim_test_cli" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

static std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

static fs::path write(const fs::path& dir, const std::string& text) {
  const auto p = dir / "run.ini";
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

static Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

// Non-comment lines of a CSV.
static std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

TEST_CASE("Unit suffixes convert to SI") {
  const auto c = Config::parse(
      "[system]\nt_c_ghz = 1.5\nomega_r_mhz = 10\nb1_mt = 2\n"
      "[protocol]\nramp_time_ns = 20\nphase_deg = 90\n");
  CHECK(c.number("system.t_c", Unit::Frequency) == 1.5e9);
  CHECK(c.number("system.omega_r", Unit::Frequency) == 1e7);
  CHECK_THAT(c.number("system.b1", Unit::Field), WithinRel(2e-3, 1e-15));
  CHECK_THAT(c.number("protocol.ramp_time", Unit::Time), WithinRel(2e-8, 1e-15));
  CHECK_THAT(c.number("protocol.phase", Unit::Angle),
             WithinRel(1.5707963267948966, 1e-15));
}

TEST_CASE("Missing and conflicting fields name the key") {
  const auto c = Config::parse("[system]\nt_c_ghz = 1\nt_c_mhz = 1000\n");
  CHECK_THROWS_WITH(c.number("system.omega_r", Unit::Frequency),
                    ContainsSubstring("omega_r_mhz"));
  CHECK_THROWS_WITH(c.number("system.t_c", Unit::Frequency),
                    ContainsSubstring("t_c_ghz") && ContainsSubstring("t_c_mhz"));
  CHECK_THROWS_AS(Config::parse("[s]\nx_hz = abc\n").number("s.x", Unit::Frequency),
                  ConfigError);
  CHECK_THROWS_AS(Config::parse("x = 1\n"), ConfigError);
}

TEST_CASE("Overrides replace file values") {
  auto c = Config::parse("[system]\nomega_r_mhz = 10\n");
  c.set("system.omega_r_mhz=20");
  c.set("protocol.seed = 7");
  CHECK(c.number("system.omega_r", Unit::Frequency) == 2e7);
  CHECK(c.count_or("protocol.seed", 1) == 7);
  CHECK_THROWS_AS(c.set("novalue"), ConfigError);
  CHECK_THROWS_AS(c.set("nosection=1"), ConfigError);
}

TEST_CASE("Grids, lists and resolved values") {
  const auto c = Config::parse(
      "[p]\nx_min_us = 1\nx_max_us = 100\nx_points = 3\n"
      "ys_mhz = 1, 2 ,3\nz_min = -1\nz_max = 1\nz_points = 5\nz_spacing = linear\n");
  const auto x = c.grid("p.x", Unit::Time);
  REQUIRE(x.size() == 3);
  CHECK_THAT(x[1], WithinRel(1e-5, 1e-12));
  CHECK_THAT(x[2], WithinRel(1e-4, 1e-15));
  const auto y = c.grid("p.y", Unit::Frequency);
  CHECK(y == std::vector<double>{1e6, 2e6, 3e6});
  const auto z = c.grid("p.z", Unit::None);
  CHECK(z == std::vector<double>{-1, -0.5, 0, 0.5, 1});
  CHECK(c.number_or("p.w", Unit::Frequency, 5.0) == 5.0);
  CHECK(c.resolved().at("p.w_hz") == "5");
  CHECK(c.resolved().at("p.ys_mhz") == "1, 2 ,3");
  CHECK(c.unused().empty());
  const auto bad = Config::parse("[p]\nx_min = -1\nx_max = 1\nx_points = 3\n");
  CHECK_THROWS_AS(bad.grid("p.x", Unit::None), ConfigError);
}

TEST_CASE("Exit codes") {
  const auto dir = scratch("exit");
  CHECK(call({"no-such-command"}).code == 64);
  CHECK(call({}).code == 64);
  CHECK(call({"crossover", "--bogus-flag"}).code == 64);
  CHECK(call({"--help"}).code == 0);

  const auto missing = write(dir, "[system]\nt_c_ghz = 1\nu_ghz = 1000\neps_ghz = 0\n"
                                  "[protocol]\nratios = 0.1\n");
  const auto m = call({"crossover", "--config", missing.string(), "--out",
                       dir.string()});
  CHECK(m.code == 2);
  CHECK_THAT(m.err, ContainsSubstring("omega_r_mhz"));
  CHECK_FALSE(fs::exists(dir / "crossover.csv"));

  CHECK(call({"crossover", "--config", (dir / "absent.ini").string()}).code == 2);

  const auto blocker = dir / "file";
  std::ofstream(blocker) << "x";
  CHECK(call({"decompose-check", "--out", (blocker / "sub").string()}).code ==
        74);
}

TEST_CASE("crossover CSV schema and row count") {
  const auto dir = scratch("crossover");
  const auto ini = write(dir,
                         "[system]\nt_c_ghz = 0.04, 0.4, 4\nu_ghz = 1000\n"
                         "eps_ghz = 0\nomega_r_mhz = 10\n"
                         "[protocol]\nratio_min = 0.1\nratio_max = 10\n"
                         "ratio_points = 4\n");
  const auto r = call({"crossover", "--config", ini.string(), "--out",
                       dir.string()});
  REQUIRE(r.code == 0);
  const auto text = slurp(dir / "crossover.csv");
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.rfind("# dressim ", 0) == 0);
  CHECK_THAT(text, ContainsSubstring("# system.t_c_ghz = 0.04, 0.4, 4"));
  const auto lines = data_lines(text);
  REQUIRE(lines.size() == 1 + 3 * 5);
  CHECK(lines[0] == "t_c_hz,ratio,theta_rad,status");
  CHECK(lines[1] == "40000000,0,0,ok");
  CHECK_FALSE(fs::exists(dir / "crossover.csv.tmp"));
}

TEST_CASE("init-sweep CSV schema") {
  const auto dir = scratch("init");
  const auto ini = write(dir,
                         "[system]\nt_c_ghz = 1\nomega_r_mhz = 10\n"
                         "delta_nu_1_mhz = 0\ndelta_nu_2_mhz = 0\n"
                         "[protocol]\nramp_times_ns = 1, 10\n"
                         "[numerics]\ntolerance = 1e-4\n");
  REQUIRE(call({"init-sweep", "--config", ini.string(), "--out", dir.string()})
              .code == 0);
  const auto lines = data_lines(slurp(dir / "init_sweep.csv"));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "ramp_time_s,p_s02,p_s11,p_t0,p_tplus,p_tminus,status");
  CHECK(lines[1].rfind("1e-09,", 0) == 0);
  CHECK(lines[2].substr(lines[2].size() - 3) == ",ok");
}

TEST_CASE("Identical runs give identical bytes") {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  for (const auto& dir : {a, b}) {
    REQUIRE(call({"sw-validate", "--seed", "99", "--set", "protocol.n_draws=20",
                  "--out", dir.string()})
                .code == 0);
  }
  CHECK(slurp(a / "sw_validate.csv") == slurp(b / "sw_validate.csv"));
  CHECK(slurp(a / "sw_bins.csv") == slurp(b / "sw_bins.csv"));
  CHECK_THAT(slurp(a / "sw_validate.csv"),
             ContainsSubstring("# protocol.seed = 99"));
  const auto lines = data_lines(slurp(a / "sw_validate.csv"));
  CHECK(lines.size() == 21);
}

TEST_CASE("Non-converged numerics exit 3 and keep the rows") {
  const auto dir = scratch("nonconv");
  const auto ini = write(dir,
                         "[system]\nt_c_ghz = 1\nomega_r_mhz = 10\n"
                         "delta_nu_1_mhz = 0\ndelta_nu_2_mhz = 0\n"
                         "[protocol]\nramp_times_ns = 100\n"
                         "[numerics]\ntolerance = 1e-14\nmax_halvings = 1\n");
  CHECK(call({"init-sweep", "--config", ini.string(), "--out", dir.string()})
            .code == 3);
  const auto lines = data_lines(slurp(dir / "init_sweep.csv"));
  REQUIRE(lines.size() == 2);
  CHECK_THAT(lines[1], ContainsSubstring("not_converged"));
}

}  // namespace test_cli
}  // namespace dressim::cli
