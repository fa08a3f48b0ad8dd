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

#include "ac3mpc/policy.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace ac3mpc {

namespace {

constexpr int kCheckpointVersion = 1;
constexpr const char* kCheckpointKind = "ac3mpc-policy";

// log(1 - tanh(z)^2) in a form that stays finite for large |z|.
double log_one_minus_tanh_sq(double z) {
  return 2.0 * (std::log(2.0) - z - std::log1p(std::exp(-2.0 * z)));
}

}  // namespace

GaussianActor::GaussianActor(std::vector<int> sizes, double action_bound, double init_log_std)
    : net_(std::move(sizes)), log_std_(init_log_std), action_bound_(action_bound) {
  if (net_.output_dim() != 1) throw ShapeMismatchError("actor network must have a scalar output");
  if (action_bound_ <= 0.0) throw ShapeMismatchError("action bound must be positive");
}

double GaussianActor::log_prob_presquash(double z, double mean) const {
  const double sigma = std::exp(log_std_);
  const double t = (z - mean) / sigma;
  const double log_gauss = -0.5 * t * t - 0.5 * std::log(2.0 * M_PI) - log_std_;
  // Change of variables through a = bound * tanh(z).
  return log_gauss - std::log(action_bound_) - log_one_minus_tanh_sq(z);
}

GaussianActor::Action GaussianActor::act(const Eigen::VectorXd& obs, ActMode mode,
                                         Rng& rng) const {
  if (obs.size() != net_.input_dim())
    throw ShapeMismatchError("observation length does not match the actor input");
  const double mean = net_.forward(obs.transpose())(0, 0);
  double z = mean;
  if (mode == ActMode::kStochastic) z = mean + std::exp(log_std_) * rng.normal();
  Action out;
  out.presquash = z;
  out.action = action_bound_ * std::tanh(z);
  out.log_prob = log_prob_presquash(z, mean);
  return out;
}

void checkpoint_save(const GaussianActor& actor, const Mlp& critic, const CheckpointMeta& meta,
                     const std::string& path) {
  nlohmann::json j;
  j["format_version"] = kCheckpointVersion;
  j["kind"] = kCheckpointKind;
  j["variant"] = meta.variant;
  j["seed"] = meta.seed;
  j["step_count"] = meta.step_count;
  j["action_bound"] = actor.action_bound();
  j["log_std"] = actor.log_std();
  j["actor_sizes"] = actor.net().sizes();
  j["critic_sizes"] = critic.sizes();
  j["actor_params"] = std::vector<double>(actor.net().params().data(),
                                          actor.net().params().data() + actor.net().param_count());
  j["critic_params"] =
      std::vector<double>(critic.params().data(), critic.params().data() + critic.param_count());

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path);
  out << j.dump(1) << "\n";
  if (!out) throw IoError("failed writing checkpoint: " + path);
}

void checkpoint_load(const std::string& path, GaussianActor& actor, Mlp& critic,
                     CheckpointMeta* meta) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed checkpoint " + path + ": " + e.what());
  }
  if (!j.contains("format_version") || j["format_version"].get<int>() != kCheckpointVersion ||
      j.value("kind", "") != kCheckpointKind)
    throw FormatVersionMismatchError("unsupported checkpoint container: " + path);

  const auto actor_sizes = j["actor_sizes"].get<std::vector<int>>();
  const auto critic_sizes = j["critic_sizes"].get<std::vector<int>>();
  if (actor_sizes != actor.net().sizes() || critic_sizes != critic.sizes())
    throw FormatVersionMismatchError("checkpoint architecture does not match target networks");

  const auto ap = j["actor_params"].get<std::vector<double>>();
  const auto cp = j["critic_params"].get<std::vector<double>>();
  if (static_cast<int>(ap.size()) != actor.net().param_count() ||
      static_cast<int>(cp.size()) != critic.param_count())
    throw FormatVersionMismatchError("checkpoint parameter payload has the wrong size");

  actor.net().params() = Eigen::Map<const Eigen::VectorXd>(ap.data(), ap.size());
  critic.params() = Eigen::Map<const Eigen::VectorXd>(cp.data(), cp.size());
  actor.log_std() = j["log_std"].get<double>();
  if (meta != nullptr) {
    meta->variant = j.value("variant", "");
    meta->seed = j.value("seed", std::uint64_t{0});
    meta->step_count = j.value("step_count", 0L);
  }
}

}  // namespace ac3mpc
