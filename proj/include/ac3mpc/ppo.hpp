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

#include <vector>

#include "ac3mpc/policy.hpp"

namespace ac3mpc {

struct PpoConfig {
  int n_steps = 2048;       // rollout length per update
  int minibatch = 256;
  int epochs = 10;
  double clip_eps = 0.2;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double learning_rate = 3e-4;
  double entropy_coef = 0.0;
  double value_coef = 0.5;
  double max_grad_norm = 0.5;
  long total_steps = 50000;
  std::vector<long> checkpoint_steps = {5000};

  void validate() const;
};

/// One environment interaction, stored per control step.
struct Transition {
  Eigen::VectorXd obs;
  double action = 0.0;     // squashed, applied
  double presquash = 0.0;  // Gaussian sample before tanh
  double log_prob = 0.0;
  double reward = 0.0;
  double value = 0.0;
  bool done = false;
};

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  double mean_advantage_raw = 0.0;
};

/// Clipped-surrogate PPO over a squashed-Gaussian actor and an MLP critic.
///
/// Advantages come from GAE and are normalized once per update; each update
/// runs `epochs` passes of shuffled minibatch Adam steps with per-network
/// gradient-norm clipping. Throws NonFiniteError if the update diverges.
class PpoTrainer {
 public:
  PpoTrainer(const PpoConfig& cfg, GaussianActor actor, Mlp critic, std::uint64_t seed);

  GaussianActor& actor() { return actor_; }
  const GaussianActor& actor() const { return actor_; }
  Mlp& critic() { return critic_; }
  const Mlp& critic() const { return critic_; }
  Rng& rng() { return rng_; }
  const PpoConfig& config() const { return cfg_; }

  double value_of(const Eigen::VectorXd& obs) const { return critic_.forward(obs.transpose())(0, 0); }

  /// buffer.size() must equal cfg.n_steps; `last_value`/`last_done` bootstrap
  /// the advantage tail.
  UpdateStats update(const std::vector<Transition>& buffer, double last_value, bool last_done);

  /// Exposed for gradient verification: loss and analytic gradients of one
  /// batch at the current parameters, without taking an optimizer step.
  struct LossGrad {
    double loss = 0.0;
    Eigen::VectorXd actor_grad;    // over [net params..., log_std]
    Eigen::VectorXd critic_grad;
    double policy_loss = 0.0, value_loss = 0.0, entropy = 0.0;
    double approx_kl = 0.0, clip_fraction = 0.0;
  };
  LossGrad loss_and_grad(const Eigen::MatrixXd& obs, const Eigen::VectorXd& presquash,
                         const Eigen::VectorXd& old_log_prob, const Eigen::VectorXd& advantage,
                         const Eigen::VectorXd& returns) const;

  /// GAE advantages and discounted returns for a rollout (exposed for tests).
  static void compute_gae(const std::vector<Transition>& buffer, double last_value, bool last_done,
                          double gamma, double gae_lambda, Eigen::VectorXd& advantages,
                          Eigen::VectorXd& returns);

 private:
  PpoConfig cfg_;
  GaussianActor actor_;
  Mlp critic_;
  Adam actor_opt_, critic_opt_;
  Rng rng_;
};

}  // namespace ac3mpc
