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
//
// Behavioral checks against the shipped trained checkpoints (the golden-run
// suite). Regenerate the artifacts with tools/make_assets.sh.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "ac3mpc/config.hpp"
#include "ac3mpc/scenarios.hpp"

using namespace ac3mpc;
namespace fs = std::filesystem;

namespace {

const fs::path kAssets = fs::path(AC3MPC_SOURCE_DIR) / "assets" / "checkpoints";

RolloutRecord run_golden(ControllerKind kind, const std::string& terrain, ProfileKind pk,
                         const ExperimentConfig& cfg) {
  const LoopConfig lc = cfg.loop_config(kind);
  GaussianActor actor({observation_length(lc.obs_spec), 64, 64, 1}, cfg.agent_bound(kind));
  Mlp critic({observation_length(lc.obs_spec), 64, 64, 1});
  if (kind != ControllerKind::kMpc) {
    const fs::path ckpt = kAssets / (std::string(controller_name(kind)) + "_s1_final.json");
    REQUIRE(fs::exists(ckpt));
    checkpoint_load(ckpt.string(), actor, critic);
  }
  std::unique_ptr<OcpSolver> solver;
  if (kind == ControllerKind::kAc3Mpc)
    solver = std::make_unique<OcpSolver>(cfg.ocp_config(), ModelKind::kAugmented);
  else if (kind != ControllerKind::kAc)
    solver = std::make_unique<OcpSolver>(cfg.ocp_config(), ModelKind::kBaseline);

  SpeedProfileSpec spec = pk == ProfileKind::kConstant
                              ? cfg.profile_spec(ProfileKind::kConstant, 0)
                              : golden_varying_spec(1, 1, cfg.eval_duration);
  const SpeedProfile profile = SpeedProfile::generate(spec);
  ControlLoop loop(lc, cfg.terrain(terrain), [&profile](double t) { return profile(t); },
                   solver.get(), &actor);
  return loop.run(cfg.eval_duration, ActMode::kDeterministic);
}

}  // namespace

TEST_CASE("shipped AC3MPC checkpoint tracks T1 better than the baseline MPC") {
  ExperimentConfig cfg;
  const RolloutRecord ac3 = run_golden(ControllerKind::kAc3Mpc, "T1", ProfileKind::kConstant, cfg);
  const RolloutRecord mpc = run_golden(ControllerKind::kMpc, "T1", ProfileKind::kConstant, cfg);
  const Metrics m_ac3 = compute_metrics(ac3, cfg.sim.control_dt);
  const Metrics m_mpc = compute_metrics(mpc, cfg.sim.control_dt);
  CHECK(m_ac3.rms_err < m_mpc.rms_err);
}

TEST_CASE("trained compensation stays saturated-safe for a full minute") {
  ExperimentConfig cfg;
  const RolloutRecord rec = run_golden(ControllerKind::kAc3Mpc, "T0", ProfileKind::kConstant, cfg);
  REQUIRE(rec.size() == 1200);
  for (std::size_t i = 0; i < rec.size(); ++i) {
    CHECK(rec.u_applied_a[i] >= -1.0);
    CHECK(rec.u_applied_a[i] <= 1.0);
  }
}

TEST_CASE("compensation concentrates where the MPC runs at its ceiling") {
  ExperimentConfig cfg;
  const RolloutRecord rec = run_golden(ControllerKind::kAc3Mpc, "T1", ProfileKind::kConstant, cfg);
  double on = 0.0, off = 0.0;
  int n_on = 0, n_off = 0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    if (rec.p_c[i] == 1) {
      on += rec.u_rl[i];
      ++n_on;
    } else {
      off += rec.u_rl[i];
      ++n_off;
    }
  }
  REQUIRE(n_on > 0);
  REQUIRE(n_off > 0);
  CHECK(off / n_off > on / n_on);
}

TEST_CASE("shipped checkpoint metadata is consistent") {
  ExperimentConfig cfg;
  const LoopConfig lc = cfg.loop_config(ControllerKind::kAc3Mpc);
  GaussianActor actor({observation_length(lc.obs_spec), 64, 64, 1}, cfg.a_rl_bound);
  Mlp critic({observation_length(lc.obs_spec), 64, 64, 1});
  CheckpointMeta meta;
  checkpoint_load((kAssets / "AC3MPC_s1_final.json").string(), actor, critic, &meta);
  CHECK(meta.variant == "AC3MPC");
  CHECK(meta.step_count > 0);
  CHECK(actor.net().params().allFinite());
}
