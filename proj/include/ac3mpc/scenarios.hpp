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
#include <vector>

#include "ac3mpc/control_loop.hpp"

namespace ac3mpc {

enum class ProfileKind { kConstant, kVarying, kRandomTrain };

/// Speed-profile generator settings. All generated references lie in
/// [0, v_cap]; varying profiles interpolate random knots with a monotone
/// (overshoot-free) C1 cubic.
struct SpeedProfileSpec {
  ProfileKind kind = ProfileKind::kConstant;
  double v_cap = 5.0;      // [m/s]
  double duration = 60.0;  // [s]
  std::uint64_t seed = 0;
  double knot_spacing = 4.0;  // [s]
  double amp_lo = 0.5, amp_hi = 5.0;
};

/// Time-indexed reference speed built from knots with monotone cubic
/// (Fritsch-Carlson) interpolation: continuous first derivative, values never
/// leave the knot range. Constant profiles hold v_cap.
class SpeedProfile {
 public:
  static SpeedProfile generate(const SpeedProfileSpec& spec);

  double operator()(double t) const;
  const std::vector<double>& knot_times() const { return t_; }
  const std::vector<double>& knot_values() const { return y_; }

 private:
  std::vector<double> t_, y_, m_;  // knots and endpoint slopes
};

/// Table-style run metrics.
struct Metrics {
  double rms_err = 0.0;       // sqrt(mean(v_err^2)), errors capped at +/-5
  double avg_jerk = 0.0;      // mean |delta a| / dt of realized speed
  double avg_cmd_jerk = 0.0;  // same on the commanded acceleration (diagnostic)
  double mean_abs_u = 0.0;    // input utilization
  int solver_failures = 0;
  std::vector<double> segment_rms;  // run split into 4 equal segments
};

/// Metrics over one rollout. Throws EmptyRecordError on an empty record.
Metrics compute_metrics(const RolloutRecord& record, double dt, double accel_scale = 4.0);

/// FNV-1a hash of a profile sampled at the control rate; pins golden profiles.
std::uint64_t profile_hash(const SpeedProfile& p, double duration, double dt);

/// Golden evaluation profile for a (terrain index, seed index) cell; frozen
/// seeds so every release reproduces the same references.
SpeedProfileSpec golden_varying_spec(int terrain_index, int seed_index, double duration = 60.0);

}  // namespace ac3mpc
