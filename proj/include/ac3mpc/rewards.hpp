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

#include <cmath>
#include <span>

namespace ac3mpc {

/// Weights and normalizers of the three agent reward functions. Each
/// normalized term is kept O(1); all weights are non-negative.
struct RewardConfig {
  // r1: standalone agent.
  double w11 = 1.0, w12 = 0.3, w13 = 1.0;
  // r2: unaware compensation.
  double w21 = 1.0, w22 = 0.3, w23 = 0.5;
  // r3: cooperative compensation.
  double w31 = 1.0, w32 = 0.0, w33 = 0.0;

  double n_err = 5.0;        // N_e, the reference cap
  double n_sigma = 0.5;      // N_sigma
  double n_violate = 0.33;   // N_violate
  double v_threshold = 0.5;  // [m/s]
  double epsilon_ceiling = 0.01;
  double a_min = -1.0, a_max = 1.0;  // normalized input range
};

/// Population standard deviation of an action history window.
inline double action_history_std(std::span<const double> hist) {
  if (hist.empty()) return 0.0;
  double mean = 0.0;
  for (double a : hist) mean += a;
  mean /= static_cast<double>(hist.size());
  double var = 0.0;
  for (double a : hist) var += (a - mean) * (a - mean);
  return std::sqrt(var / static_cast<double>(hist.size()));
}

/// p_c: the primary input sits strictly inside the epsilon-shrunk range.
inline bool ceiling_interior(double a_mpc, const RewardConfig& cfg) {
  return a_mpc > cfg.a_min + cfg.epsilon_ceiling && a_mpc < cfg.a_max - cfg.epsilon_ceiling;
}

/// p33: how far the requested sum exceeds the actuation range. At most one
/// side can be active.
inline double actuation_violation(double a_mpc, double a_rl, const RewardConfig& cfg) {
  const double sum = a_mpc + a_rl;
  return std::max(0.0, sum - cfg.a_max) + std::max(0.0, cfg.a_min - sum);
}

/// r1 = -W11 |v_err|/N_e - W12 sigma_a/N_sigma - W13 [v < 0]. Always <= 0.
inline double reward_r1(double v_err, std::span<const double> action_history, double v,
                        const RewardConfig& cfg) {
  const double p13 = (v < 0.0) ? 1.0 : 0.0;
  return -cfg.w11 * std::abs(v_err) / cfg.n_err -
         cfg.w12 * action_history_std(action_history) / cfg.n_sigma - cfg.w13 * p13;
}

/// r2 = W21 / (1 + |v_err|) - W22 sigma_a/N_sigma - [v < 0] - W23 p23, with
/// p23 = 1 iff a_rl > 0 and v < v_threshold. Bounded above by W21.
inline double reward_r2(double v_err, std::span<const double> action_history, double v,
                        double a_rl, const RewardConfig& cfg) {
  const double p13 = (v < 0.0) ? 1.0 : 0.0;
  const double p23 = (a_rl > 0.0 && v < cfg.v_threshold) ? 1.0 : 0.0;
  return cfg.w21 / (1.0 + std::abs(v_err)) -
         cfg.w22 * action_history_std(action_history) / cfg.n_sigma - p13 - cfg.w23 * p23;
}

/// r3 = -p_c W31 |v_err|/N_e - (1-p_c) W32 a_rl^2 - W33 p33/N_violate.
/// Always <= 0; the violation term sees the pre-saturation sum.
inline double reward_r3(double v_err, double a_mpc, double a_rl, const RewardConfig& cfg) {
  const double pc = ceiling_interior(a_mpc, cfg) ? 1.0 : 0.0;
  const double p33 = actuation_violation(a_mpc, a_rl, cfg);
  return -pc * cfg.w31 * std::abs(v_err) / cfg.n_err - (1.0 - pc) * cfg.w32 * a_rl * a_rl -
         cfg.w33 * p33 / cfg.n_violate;
}

}  // namespace ac3mpc
