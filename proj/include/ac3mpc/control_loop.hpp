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

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "ac3mpc/nmpc.hpp"
#include "ac3mpc/observation.hpp"
#include "ac3mpc/policy.hpp"
#include "ac3mpc/rewards.hpp"

namespace ac3mpc {

/// The four controller compositions.
enum class ControllerKind { kMpc, kAc, kAc2Mpc, kAc3Mpc };

const char* controller_name(ControllerKind k);
ControllerKind controller_from_name(const std::string& name);

/// Per-step solver outcome recorded in the rollout.
enum class StepSolverStatus { kConverged = 0, kMaxIter = 1, kInfeasibleRelaxed = 2, kFailed = 3, kNone = 4 };

/// Column-oriented per-step log of one closed-loop run.
struct RolloutRecord {
  std::vector<double> t, v_ref, v, v_err;
  std::vector<double> u_mpc_a, u_rl, u_applied_a, omega;
  std::vector<double> reward, kkt, slack;
  std::vector<int> solver_status, iterations, p_c;
  int solver_failures = 0;

  std::size_t size() const { return t.size(); }
  bool empty() const { return t.empty(); }
};

using SpeedProfileFn = std::function<double(double)>;

struct LoopConfig {
  ControllerKind kind = ControllerKind::kAc3Mpc;
  ObservationSpec obs_spec;
  RewardConfig reward;
  SimConfig sim;
  ActuatorLimits limits;
  VehicleParams vehicle;
  double accel_scale = 4.0;
  double agent_bound = 0.33;  // +/-1 for standalone AC
};

/// One closed-loop controller instance: plant, optional OCP solver, optional
/// learned agent, histories and warm-start memory. Single-threaded; run
/// independent instances for parallelism.
///
/// A control step follows the cooperative exchange order:
///   1. build the (augmented) initial state with a_rl = previous agent action
///   2. solve the OCP (warm-started), yielding u_mpc and its predictions
///   3. build the observation, including those predictions for AC3
///   4. the agent acts
///   5. u_applied = sat(u_mpc + u_rl); the plant advances
///   6. reward is evaluated on the post-step error and the pre-saturation sum
struct LoopStepContext {
  Eigen::VectorXd obs;  // empty for the pure-MPC controller
  double u_mpc_a = 0.0;
  double u_mpc_omega = 0.0;
  bool solver_ok = true;
};

struct LoopStepOutcome {
  double reward = 0.0;
  double v_err_post = 0.0;  // error at the new state (what the reward saw)
};

class ControlLoop {
 public:
  ControlLoop(const LoopConfig& cfg, const TerrainParams& terrain, SpeedProfileFn profile,
              SolverInterface* solver, const GaussianActor* agent);

  /// Start a fresh episode (t=0, v=0, zeroed histories, cleared warm start).
  void reset(SpeedProfileFn profile);

  LoopStepContext begin_step();
  LoopStepOutcome finish_step(double u_rl);

  /// Roll a full evaluation episode with the attached agent.
  RolloutRecord run(double duration_s, ActMode mode = ActMode::kDeterministic,
                    std::uint64_t action_seed = 0);

  const RolloutRecord& record() const { return record_; }
  RolloutRecord take_record();
  const PlantState& plant_state() const { return plant_; }
  void set_plant_state(const PlantState& p) { plant_ = p; }
  double time() const { return plant_.t; }
  bool needs_solver() const { return cfg_.kind != ControllerKind::kAc; }
  bool needs_agent() const { return cfg_.kind != ControllerKind::kMpc; }

 private:
  void push_front(std::vector<double>& hist, double value);

  LoopConfig cfg_;
  TerrainParams terrain_;
  SpeedProfileFn profile_;
  SolverInterface* solver_;
  const GaussianActor* agent_;

  PlantState plant_;
  std::vector<double> err_hist_, own_hist_, mpc_hist_;
  std::optional<OcpSolution> warm_;
  double prev_u_rl_ = 0.0;
  double held_u_mpc_a_ = 0.0, held_u_mpc_omega_ = 0.0;
  int consecutive_failures_ = 0;

  // Pending step context between begin_step and finish_step.
  LoopStepContext pending_;
  std::vector<double> pending_pred_;
  StepSolverStatus pending_status_ = StepSolverStatus::kNone;
  double pending_kkt_ = 0.0, pending_slack_ = 0.0;
  int pending_iters_ = 0;
  bool step_open_ = false;

  RolloutRecord record_;
};

}  // namespace ac3mpc
