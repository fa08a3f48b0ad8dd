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

#include <cstdint>
#include <string>

#include "ac3mpc/mlp.hpp"

namespace ac3mpc {

enum class ActMode { kStochastic, kDeterministic };

/// Squashed-Gaussian policy head over a scalar action.
///
/// The network outputs the Gaussian mean; a single state-independent
/// learnable log-std controls exploration. Samples are squashed by tanh and
/// scaled by `action_bound`, so every emitted action lies strictly inside
/// [-action_bound, action_bound].
class GaussianActor {
 public:
  GaussianActor() = default;
  GaussianActor(std::vector<int> sizes, double action_bound, double init_log_std = std::log(0.3));

  void init(Rng& rng) { net_.init(rng, 0.01); }

  struct Action {
    double action;    // squashed and scaled
    double presquash; // the Gaussian sample z (kept for exact replay)
    double log_prob;
  };

  Action act(const Eigen::VectorXd& obs, ActMode mode, Rng& rng) const;

  /// Log-density of the squashed action identified by its pre-squash value z,
  /// under a Gaussian with the given mean and the current log-std.
  double log_prob_presquash(double z, double mean) const;

  Mlp& net() { return net_; }
  const Mlp& net() const { return net_; }
  double& log_std() { return log_std_; }
  double log_std() const { return log_std_; }
  double action_bound() const { return action_bound_; }

 private:
  Mlp net_;
  double log_std_ = std::log(0.3);
  double action_bound_ = 0.33;
};

/// Checkpoint metadata persisted alongside the parameters.
struct CheckpointMeta {
  std::string variant;  // "AC", "AC2", "AC3", or "toy"
  std::uint64_t seed = 0;
  long step_count = 0;
};

/// Write actor + critic to a versioned JSON container. The payload uses
/// shortest round-trip float encoding, so load(save(x)) is bit-exact.
void checkpoint_save(const GaussianActor& actor, const Mlp& critic, const CheckpointMeta& meta,
                     const std::string& path);

/// Load a checkpoint. Throws FormatVersionMismatchError when the container
/// version or the stored architecture does not match, IoError on filesystem
/// problems.
void checkpoint_load(const std::string& path, GaussianActor& actor, Mlp& critic,
                     CheckpointMeta* meta = nullptr);

}  // namespace ac3mpc
