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

#include "ac3mpc/control_loop.hpp"

#include <algorithm>
#include <cmath>

namespace ac3mpc {

const char* controller_name(ControllerKind k) {
  switch (k) {
    case ControllerKind::kMpc: return "MPC";
    case ControllerKind::kAc: return "AC";
    case ControllerKind::kAc2Mpc: return "AC2MPC";
    case ControllerKind::kAc3Mpc: return "AC3MPC";
  }
  return "?";
}

ControllerKind controller_from_name(const std::string& name) {
  if (name == "MPC") return ControllerKind::kMpc;
  if (name == "AC") return ControllerKind::kAc;
  if (name == "AC2MPC" || name == "AC2") return ControllerKind::kAc2Mpc;
  if (name == "AC3MPC" || name == "AC3") return ControllerKind::kAc3Mpc;
  throw ConfigError("unknown controller name: " + name);
}

ControlLoop::ControlLoop(const LoopConfig& cfg, const TerrainParams& terrain,
                         SpeedProfileFn profile, SolverInterface* solver,
                         const GaussianActor* agent)
    : cfg_(cfg), terrain_(terrain), solver_(solver), agent_(agent) {
  if (needs_solver() && solver_ == nullptr)
    throw ConfigError(std::string(controller_name(cfg.kind)) + " requires an OCP solver");
  cfg_.obs_spec.validate();
  reset(std::move(profile));
}

void ControlLoop::reset(SpeedProfileFn profile) {
  profile_ = std::move(profile);
  plant_ = PlantState{};
  const int h = cfg_.obs_spec.h_a;
  err_hist_.assign(h, 0.0);
  own_hist_.assign(h, 0.0);
  mpc_hist_.assign(h, 0.0);
  warm_.reset();
  prev_u_rl_ = 0.0;
  held_u_mpc_a_ = 0.0;
  held_u_mpc_omega_ = 0.0;
  consecutive_failures_ = 0;
  step_open_ = false;
  record_ = RolloutRecord{};
}

void ControlLoop::push_front(std::vector<double>& hist, double value) {
  if (hist.empty()) return;
  for (std::size_t i = hist.size() - 1; i > 0; --i) hist[i] = hist[i - 1];
  hist[0] = value;
}

LoopStepContext ControlLoop::begin_step() {
  const double t = plant_.t;
  const double v = plant_.state.v;
  const double v_ref = profile_(t);
  push_front(err_hist_, v - v_ref);

  pending_ = LoopStepContext{};
  pending_status_ = StepSolverStatus::kNone;
  pending_kkt_ = 0.0;
  pending_slack_ = 0.0;
  pending_iters_ = 0;
  pending_pred_.assign(std::max(1, cfg_.obs_spec.k_pred), 0.0);

  if (needs_solver()) {
    const OcpConfig& ocp = solver_->config();
    const ReferenceTrajectory ref =
        make_reference([this](double tau) { return profile_(tau); }, t, plant_.state.s_x,
                       ocp.horizon, ocp.dt);
    AugmentedState x0{plant_.state, 0.0};
    if (cfg_.kind == ControllerKind::kAc3Mpc) x0.a_rl = prev_u_rl_;
    try {
      const OcpSolution sol = solver_->solve(x0, ref, warm_ ? &*warm_ : nullptr);
      pending_.u_mpc_a = sol.u0.a;
      pending_.u_mpc_omega = sol.u0.omega;
      pending_.solver_ok = true;
      pending_status_ = static_cast<StepSolverStatus>(static_cast<int>(sol.status));
      pending_kkt_ = sol.kkt_residual;
      pending_slack_ = sol.max_violation;
      pending_iters_ = sol.iterations;
      for (int i = 0; i < cfg_.obs_spec.k_pred; ++i) {
        const int j = std::min<int>(i + 1, static_cast<int>(sol.u_pred.size()) - 1);
        pending_pred_[i] = sol.u_pred[j][kA];
      }
      warm_ = sol;
      held_u_mpc_a_ = sol.u0.a;
      held_u_mpc_omega_ = sol.u0.omega;
      consecutive_failures_ = 0;
    } catch (const SolverFailureError&) {
      // Hold the previous input once, then decay it toward zero.
      if (consecutive_failures_ > 0) {
        held_u_mpc_a_ *= 0.5;
        held_u_mpc_omega_ *= 0.5;
      }
      ++consecutive_failures_;
      ++record_.solver_failures;
      pending_.u_mpc_a = held_u_mpc_a_;
      pending_.u_mpc_omega = held_u_mpc_omega_;
      pending_.solver_ok = false;
      pending_status_ = StepSolverStatus::kFailed;
      pending_pred_.assign(std::max(1, cfg_.obs_spec.k_pred), held_u_mpc_a_);
      warm_.reset();
    }
  }

  if (needs_agent()) {
    std::vector<double> preview(cfg_.obs_spec.k_ref);
    for (int i = 0; i < cfg_.obs_spec.k_ref; ++i)
      preview[i] = profile_(t + cfg_.sim.control_dt * (i + 1));
    pending_.obs = build_observation(cfg_.obs_spec, v, err_hist_, preview, own_hist_, mpc_hist_,
                                     pending_.u_mpc_a, pending_pred_);
  }

  step_open_ = true;
  return pending_;
}

LoopStepOutcome ControlLoop::finish_step(double u_rl) {
  if (!step_open_) throw Error("finish_step called without begin_step");
  step_open_ = false;

  const double t = plant_.t;
  const double v = plant_.state.v;
  const double v_ref = profile_(t);
  u_rl = std::clamp(u_rl, -cfg_.agent_bound, cfg_.agent_bound);

  double sum_a = 0.0;
  double applied_a = 0.0;
  double omega = 0.0;
  switch (cfg_.kind) {
    case ControllerKind::kMpc:
      u_rl = 0.0;
      sum_a = pending_.u_mpc_a;
      applied_a = sum_a;
      omega = pending_.u_mpc_omega;
      break;
    case ControllerKind::kAc:
      sum_a = u_rl;
      applied_a = std::clamp(sum_a, cfg_.limits.a_min, cfg_.limits.a_max);
      omega = 0.0;
      break;
    case ControllerKind::kAc2Mpc:
    case ControllerKind::kAc3Mpc:
      sum_a = pending_.u_mpc_a + u_rl;
      applied_a = std::clamp(sum_a, cfg_.limits.a_min, cfg_.limits.a_max);
      omega = pending_.u_mpc_omega;
      break;
  }

  const ControlInput u{applied_a, omega};
  plant_ = plant_step(plant_, u, terrain_, cfg_.vehicle, cfg_.accel_scale, cfg_.sim, cfg_.limits);

  push_front(own_hist_, u_rl);
  push_front(mpc_hist_, pending_.u_mpc_a);

  const double v_err_post = plant_.state.v - profile_(plant_.t);
  double reward = 0.0;
  switch (cfg_.kind) {
    case ControllerKind::kMpc:
    case ControllerKind::kAc:
      reward = reward_r1(v_err_post, own_hist_, plant_.state.v, cfg_.reward);
      break;
    case ControllerKind::kAc2Mpc:
      reward = reward_r2(v_err_post, own_hist_, plant_.state.v, u_rl, cfg_.reward);
      break;
    case ControllerKind::kAc3Mpc:
      reward = reward_r3(v_err_post, pending_.u_mpc_a, u_rl, cfg_.reward);
      break;
  }

  record_.t.push_back(t);
  record_.v_ref.push_back(v_ref);
  record_.v.push_back(v);
  record_.v_err.push_back(v - v_ref);
  record_.u_mpc_a.push_back(pending_.u_mpc_a);
  record_.u_rl.push_back(u_rl);
  record_.u_applied_a.push_back(applied_a);
  record_.omega.push_back(omega);
  record_.reward.push_back(reward);
  record_.kkt.push_back(pending_kkt_);
  record_.slack.push_back(pending_slack_);
  record_.solver_status.push_back(static_cast<int>(pending_status_));
  record_.iterations.push_back(pending_iters_);
  record_.p_c.push_back(ceiling_interior(pending_.u_mpc_a, cfg_.reward) ? 1 : 0);

  prev_u_rl_ = u_rl;
  return LoopStepOutcome{reward, v_err_post};
}

RolloutRecord ControlLoop::run(double duration_s, ActMode mode, std::uint64_t action_seed) {
  Rng rng(action_seed);
  const int steps = static_cast<int>(std::llround(duration_s / cfg_.sim.control_dt));
  for (int i = 0; i < steps; ++i) {
    const LoopStepContext ctx = begin_step();
    double u_rl = 0.0;
    if (needs_agent()) {
      if (agent_ == nullptr) throw ConfigError("control loop has no agent attached");
      u_rl = agent_->act(ctx.obs, mode, rng).action;
    }
    finish_step(u_rl);
  }
  return take_record();
}

RolloutRecord ControlLoop::take_record() {
  RolloutRecord out = std::move(record_);
  record_ = RolloutRecord{};
  return out;
}

}  // namespace ac3mpc
