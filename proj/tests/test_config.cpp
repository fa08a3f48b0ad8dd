// Copyright 2026 The ac3mpc Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "ac3mpc/config.hpp"

using namespace ac3mpc;

TEST_CASE("defaults validate and round-trip") {
  ExperimentConfig cfg;
  cfg.validate();
  const std::string text = render_config(cfg);
  const ExperimentConfig parsed = parse_config_text(text);
  CHECK(parsed == cfg);
}

TEST_CASE("modified config round-trips") {
  ExperimentConfig cfg;
  cfg.q_v = 0.7;
  cfg.ppo.total_steps = 12345;
  cfg.ppo.checkpoint_steps = {100, 5000};
  cfg.terrains = {"T1", "soft"};
  TerrainParams t;
  t.name = "soft";
  t.traction_eff = 0.5;
  t.c0 = 0.9;
  t.c1 = 0.01;
  t.c2 = 0.002;
  t.sinkage_sat = 0.4;
  cfg.custom_terrains["soft"] = t;
  const ExperimentConfig parsed = parse_config_text(render_config(cfg));
  CHECK(parsed == cfg);
  CHECK(parsed.terrain("soft").c0 == 0.9);
}

TEST_CASE("errors carry file and line") {
  const std::string bad =
      "[experiment]\n"
      "output_dir = runs\n"
      "[ocp]\n"
      "horizon = twenty\n";
  try {
    parse_config_text(bad, "demo.ini");
    CHECK(false);
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("demo.ini:4") != std::string::npos);
    CHECK(msg.find("horizon") != std::string::npos);
  }
}

TEST_CASE("unknown keys and sections are schema errors") {
  CHECK_THROWS_AS(parse_config_text("[ocp]\nhorizn = 20\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[optimizer]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("stray = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[ocp]\nhorizon = 20\nhorizon = 21\n"), ConfigError);
}

TEST_CASE("semantic validation") {
  CHECK_THROWS_AS(parse_config_text("[observation]\nh_a_ac3 = 10\nh_a_ac = 10\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[experiment]\nseeds =\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[ocp]\ncomp_sign = sideways\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[terrain.bog]\ntraction_eff = 1.5\n"), ConfigError);
  // custom terrain referenced before definition parses (sections are unordered)
  const ExperimentConfig ok = parse_config_text(
      "[experiment]\nterrains = bog\n[terrain.bog]\ntraction_eff = 0.4\nc0 = 1.0\nc1 = 0\nc2 = "
      "0\nsinkage_sat = 0.5\n");
  CHECK(ok.terrain("bog").traction_eff == 0.4);
}

TEST_CASE("comp sign maps into the ocp config") {
  ExperimentConfig cfg;
  cfg.comp_sign = "minus";
  CHECK(cfg.ocp_config().comp_sign == CompensationSign::kMinus);
  cfg.comp_sign = "plus";
  CHECK(cfg.ocp_config().comp_sign == CompensationSign::kPlus);
}

TEST_CASE("comments and blank lines are ignored") {
  const ExperimentConfig cfg = parse_config_text(
      "# leading comment\n\n[ocp]\n; alt comment\nq_v = 0.9\n\n[profiles]\nv_cap = 5\n");
  CHECK(cfg.q_v == 0.9);
}
