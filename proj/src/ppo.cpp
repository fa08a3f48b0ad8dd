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

#include "ac3mpc/ppo.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace ac3mpc {

void PpoConfig::validate() const {
  if (!(clip_eps > 0.0 && clip_eps < 1.0)) throw ConfigError("ppo: clip_eps must be in (0,1)");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("ppo: gamma must be in (0,1]");
  if (!(gae_lambda > 0.0 && gae_lambda <= 1.0))
    throw ConfigError("ppo: gae_lambda must be in (0,1]");
  if (n_steps < minibatch) throw ConfigError("ppo: n_steps must be >= minibatch");
  if (minibatch < 1 || epochs < 1) throw ConfigError("ppo: minibatch and epochs must be >= 1");
  if (learning_rate <= 0.0) throw ConfigError("ppo: learning rate must be positive");
  if (total_steps < 0) throw ConfigError("ppo: total_steps must be >= 0");
}

PpoTrainer::PpoTrainer(const PpoConfig& cfg, GaussianActor actor, Mlp critic, std::uint64_t seed)
    : cfg_(cfg),
      actor_(std::move(actor)),
      critic_(std::move(critic)),
      actor_opt_(actor_.net().param_count() + 1, cfg.learning_rate),
      critic_opt_(critic_.param_count(), cfg.learning_rate),
      rng_(seed) {
  cfg_.validate();
  if (critic_.output_dim() != 1) throw ShapeMismatchError("critic must have a scalar output");
}

void PpoTrainer::compute_gae(const std::vector<Transition>& buffer, double last_value,
                             bool last_done, double gamma, double gae_lambda,
                             Eigen::VectorXd& advantages, Eigen::VectorXd& returns) {
  const int n = static_cast<int>(buffer.size());
  advantages.resize(n);
  returns.resize(n);
  (void)last_done;
  double gae = 0.0;
  for (int i = n - 1; i >= 0; --i) {
    const double next_value = (i + 1 < n) ? buffer[i + 1].value : last_value;
    // done marks the state reached by this transition as terminal, so the
    // bootstrap and the recursion both cut there.
    const double not_done = buffer[i].done ? 0.0 : 1.0;
    const double delta = buffer[i].reward + gamma * next_value * not_done - buffer[i].value;
    gae = delta + gamma * gae_lambda * not_done * gae;
    advantages[i] = gae;
    returns[i] = advantages[i] + buffer[i].value;
  }
}

PpoTrainer::LossGrad PpoTrainer::loss_and_grad(const Eigen::MatrixXd& obs,
                                               const Eigen::VectorXd& presquash,
                                               const Eigen::VectorXd& old_log_prob,
                                               const Eigen::VectorXd& advantage,
                                               const Eigen::VectorXd& returns) const {
  const int m = static_cast<int>(obs.rows());
  LossGrad out;

  // --- actor ---
  Mlp::Cache a_cache;
  const Eigen::VectorXd mean = actor_.net().forward(obs, &a_cache).col(0);
  const double sigma = std::exp(actor_.log_std());

  Eigen::VectorXd log_prob(m), d_mean(m);
  double d_log_std = 0.0;
  double policy_loss = 0.0, kl = 0.0;
  int clipped = 0;
  for (int i = 0; i < m; ++i) {
    log_prob[i] = actor_.log_prob_presquash(presquash[i], mean[i]);
    const double ratio = std::exp(log_prob[i] - old_log_prob[i]);
    const double adv = advantage[i];
    const double unclipped = ratio * adv;
    const double clip_lo = 1.0 - cfg_.clip_eps;
    const double clip_hi = 1.0 + cfg_.clip_eps;
    const double clipped_term = std::clamp(ratio, clip_lo, clip_hi) * adv;
    policy_loss -= std::min(unclipped, clipped_term);
    kl += old_log_prob[i] - log_prob[i];

    // The min() selects the unclipped branch unless clipping binds with the
    // step direction, in which case the gradient through the ratio is zero.
    double d_logp = 0.0;
    if (unclipped <= clipped_term) {
      d_logp = -ratio * adv;
    } else {
      ++clipped;
    }
    const double t = (presquash[i] - mean[i]) / sigma;
    d_mean[i] = d_logp * (t / sigma);
    d_log_std += d_logp * (t * t - 1.0);
  }
  policy_loss /= m;
  d_mean /= m;
  d_log_std /= m;

  // Entropy bonus of the pre-squash Gaussian: H = 0.5 ln(2 pi e) + log_std.
  const double entropy = 0.5 * std::log(2.0 * M_PI * std::exp(1.0)) + actor_.log_std();
  d_log_std -= cfg_.entropy_coef;

  const Eigen::VectorXd actor_net_grad = actor_.net().backward(a_cache, d_mean);
  out.actor_grad.resize(actor_net_grad.size() + 1);
  out.actor_grad.head(actor_net_grad.size()) = actor_net_grad;
  out.actor_grad[actor_net_grad.size()] = d_log_std;

  // --- critic ---
  Mlp::Cache c_cache;
  const Eigen::VectorXd values = critic_.forward(obs, &c_cache).col(0);
  const Eigen::VectorXd verr = values - returns;
  const double value_loss = verr.squaredNorm() / m;
  const Eigen::MatrixXd dV = (2.0 * cfg_.value_coef / m) * verr;
  out.critic_grad = critic_.backward(c_cache, dV);

  out.policy_loss = policy_loss;
  out.value_loss = value_loss;
  out.entropy = entropy;
  out.loss = policy_loss + cfg_.value_coef * value_loss - cfg_.entropy_coef * entropy;
  out.approx_kl = kl / m;
  out.clip_fraction = static_cast<double>(clipped) / m;
  return out;
}

UpdateStats PpoTrainer::update(const std::vector<Transition>& buffer, double last_value,
                               bool last_done) {
  if (static_cast<int>(buffer.size()) != cfg_.n_steps)
    throw ShapeMismatchError("ppo update: buffer length must equal n_steps");
  const int n = cfg_.n_steps;
  const int dim = static_cast<int>(buffer.front().obs.size());

  Eigen::MatrixXd obs(n, dim);
  Eigen::VectorXd presquash(n), old_log_prob(n);
  for (int i = 0; i < n; ++i) {
    obs.row(i) = buffer[i].obs.transpose();
    presquash[i] = buffer[i].presquash;
    old_log_prob[i] = buffer[i].log_prob;
  }

  Eigen::VectorXd advantages, returns;
  compute_gae(buffer, last_value, last_done, cfg_.gamma, cfg_.gae_lambda, advantages, returns);

  UpdateStats stats;
  stats.mean_advantage_raw = advantages.mean();
  const double adv_std = std::sqrt(
      (advantages.array() - advantages.mean()).square().sum() / std::max(1, n - 1));
  advantages = (advantages.array() - advantages.mean()) / (adv_std + 1e-8);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  int batches = 0;
  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    rng_.shuffle(order);
    for (int start = 0; start + cfg_.minibatch <= n; start += cfg_.minibatch) {
      const int m = cfg_.minibatch;
      Eigen::MatrixXd mb_obs(m, dim);
      Eigen::VectorXd mb_z(m), mb_lp(m), mb_adv(m), mb_ret(m);
      for (int r = 0; r < m; ++r) {
        const int j = order[start + r];
        mb_obs.row(r) = obs.row(j);
        mb_z[r] = presquash[j];
        mb_lp[r] = old_log_prob[j];
        mb_adv[r] = advantages[j];
        mb_ret[r] = returns[j];
      }
      LossGrad lg = loss_and_grad(mb_obs, mb_z, mb_lp, mb_adv, mb_ret);
      if (!std::isfinite(lg.loss) || !lg.actor_grad.allFinite() || !lg.critic_grad.allFinite()) {
        std::ostringstream msg;
        msg << "ppo update diverged: loss=" << lg.loss << " policy=" << lg.policy_loss
            << " value=" << lg.value_loss << " kl=" << lg.approx_kl;
        throw NonFiniteError(msg.str());
      }
      clip_grad_norm(lg.actor_grad, cfg_.max_grad_norm);
      clip_grad_norm(lg.critic_grad, cfg_.max_grad_norm);

      Eigen::VectorXd actor_params(actor_.net().param_count() + 1);
      actor_params.head(actor_.net().param_count()) = actor_.net().params();
      actor_params[actor_.net().param_count()] = actor_.log_std();
      actor_opt_.step(actor_params, lg.actor_grad);
      actor_.net().params() = actor_params.head(actor_.net().param_count());
      actor_.log_std() = actor_params[actor_.net().param_count()];

      critic_opt_.step(critic_.params(), lg.critic_grad);

      stats.policy_loss += lg.policy_loss;
      stats.value_loss += lg.value_loss;
      stats.entropy += lg.entropy;
      stats.approx_kl += lg.approx_kl;
      stats.clip_fraction += lg.clip_fraction;
      ++batches;
    }
  }
  if (batches > 0) {
    stats.policy_loss /= batches;
    stats.value_loss /= batches;
    stats.entropy /= batches;
    stats.approx_kl /= batches;
    stats.clip_fraction /= batches;
  }
  if (!actor_.net().params().allFinite() || !critic_.params().allFinite() ||
      !std::isfinite(actor_.log_std()))
    throw NonFiniteError("ppo update left non-finite parameters");
  return stats;
}

}  // namespace ac3mpc
