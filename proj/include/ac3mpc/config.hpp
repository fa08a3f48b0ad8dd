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

#pragma once

#include <map>
#include <string>
#include <vector>

#include "ac3mpc/control_loop.hpp"
#include "ac3mpc/ppo.hpp"
#include "ac3mpc/scenarios.hpp"

namespace ac3mpc {

/// Whole-experiment configuration, loadable from a sectioned key/value file.
/// Every field has the shipped default; parse(render(c)) == c.
struct ExperimentConfig {
  // [experiment]
  std::string output_dir = "runs";
  std::vector<std::string> terrains = {"T1", "T2", "T3"};
  std::vector<std::string> controllers = {"MPC", "AC", "AC2MPC", "AC3MPC"};
  std::vector<int> seeds = {1, 2, 3};
  double eval_duration = 60.0;
  std::string train_terrain = "T1";
  double train_v0_max = 5.0;  // training episodes start at v0 ~ U[0, train_v0_max]

  // [vehicle]
  VehicleParams vehicle;

  // [sim]
  SimConfig sim;

  // [ocp]
  int horizon = 20;
  double ocp_dt = 0.05;
  double q_phi = 0.1, q_delta = 0.1, q_v = 0.1;
  double r_a = 1.0, r_omega = 1.0;
  double terminal_scale = 2.0;
  double lambda = 0.0;
  double comp_decay_rate = 30.0;
  std::string comp_sign = "plus";
  ActuatorLimits limits;
  double v_min = 0.0, alat_bound = 3.0;
  double a_rl_bound = 0.33;
  double accel_scale = 4.0;
  double slack_weight = 1e3, slack_smoothing = 1e-3;
  int max_iter_cold = 30, max_iter_warm = 1;
  double kkt_tol = 1e-6;

  // [ppo]
  PpoConfig ppo;

  // [reward]
  RewardConfig reward;

  // [observation]
  int h_a_ac = 10, h_a_ac3 = 3, k_pred = 5, k_ref = 5;

  // [profiles]
  double v_cap = 5.0, knot_spacing = 4.0, amp_lo = 0.5, amp_hi = 5.0;

  // [terrain.<name>] custom terrains, same five fields as the presets.
  std::map<std::string, TerrainParams> custom_terrains;

  bool operator==(const ExperimentConfig&) const;

  // Derived views.
  OcpConfig ocp_config() const;
  ObservationSpec observation_spec(AgentVariant variant) const;
  LoopConfig loop_config(ControllerKind kind) const;
  double agent_bound(ControllerKind kind) const;  // +/-1 for AC, a_rl_bound otherwise
  TerrainParams terrain(const std::string& name) const;
  SpeedProfileSpec profile_spec(ProfileKind kind, std::uint64_t seed) const;

  void validate() const;
};

/// Parse a configuration file; unknown sections/keys and malformed values
/// raise ConfigError with "file:line" context.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "<text>");

/// Render the canonical form of a configuration.
std::string render_config(const ExperimentConfig& cfg);

}  // namespace ac3mpc
