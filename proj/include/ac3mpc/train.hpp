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
#include <string>
#include <vector>

#include "ac3mpc/config.hpp"

namespace ac3mpc {

struct TrainResult {
  std::vector<long> curve_steps;       // env step at each episode end
  std::vector<double> curve_returns;   // episode return
  std::vector<std::string> checkpoint_paths;
  std::string final_checkpoint;
  std::string curve_path;
  long steps_run = 0;
};

/// Train one agent variant with PPO on the training terrain over randomized
/// speed profiles. Checkpoints are written at every configured step count
/// plus a final one; the reward curve goes to a schema-tagged CSV.
///
/// `progress` (optional) is called after each PPO update with (step, mean
/// recent return).
TrainResult train_agent(const ExperimentConfig& cfg, ControllerKind kind, int seed,
                        const std::string& out_dir,
                        const std::function<void(long, double)>& progress = {});

/// Checkpoint naming shared by training and evaluation.
std::string checkpoint_filename(ControllerKind kind, int seed, long step, bool is_final);

/// Steps needed to first close 90% of the gap between the initial episode
/// return and the final plateau (mean return over the last quarter of the
/// curve). Returns the total step count when the curve never gets there.
long steps_to_90pct_plateau(const std::vector<long>& steps, const std::vector<double>& returns);

}  // namespace ac3mpc
