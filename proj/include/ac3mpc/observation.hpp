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

#include <Eigen/Dense>
#include <span>

#include "ac3mpc/errors.hpp"

namespace ac3mpc {

enum class AgentVariant { kAc, kAc2, kAc3 };

/// Observation layout parameters. The vector is a fixed-order concatenation,
/// each block scaled by its normalizer:
///
///   [ v/S_v,
///     v_err history (h_a entries, newest first) / S_e,
///     reference preview (k_ref entries, t+dt .. t+k_ref*dt) / S_v,
///     own action history (h_a entries, newest first),
///     AC2 only:  MPC action history (h_a entries, newest first),
///     AC3 only:  current u_mpc, then the next k_pred predicted MPC inputs ]
///
/// AC sees the first four blocks; AC2 appends the MPC history; AC3 appends
/// the cooperative prediction block instead and runs with a smaller h_a.
struct ObservationSpec {
  AgentVariant variant = AgentVariant::kAc3;
  int h_a = 3;       // action/error history length
  int k_pred = 5;    // predicted MPC inputs observed (AC3)
  int k_ref = 5;     // reference preview length
  double v_scale = 5.0;
  double e_scale = 5.0;

  void validate() const {
    if (h_a < 1) throw ShapeMismatchError("observation: h_a must be >= 1");
    if (k_ref < 1) throw ShapeMismatchError("observation: k_ref must be >= 1");
    if (variant == AgentVariant::kAc3 && k_pred < 1)
      throw ShapeMismatchError("observation: AC3 requires k_pred >= 1");
  }
};

/// Base block length: v + error history + reference preview + own actions.
inline int observation_base_length(const ObservationSpec& s) { return 1 + s.h_a + s.k_ref + s.h_a; }

inline int observation_length(const ObservationSpec& s) {
  switch (s.variant) {
    case AgentVariant::kAc:
      return observation_base_length(s);
    case AgentVariant::kAc2:
      return observation_base_length(s) + s.h_a;
    case AgentVariant::kAc3:
      return observation_base_length(s) + 1 + s.k_pred;
  }
  return 0;
}

/// Assemble the observation vector. History spans are newest-first and must
/// hold at least h_a entries; `u_pred` must hold k_pred entries for AC3 and
/// is ignored otherwise.
inline Eigen::VectorXd build_observation(const ObservationSpec& spec, double v,
                                         std::span<const double> err_hist,
                                         std::span<const double> ref_preview,
                                         std::span<const double> own_hist,
                                         std::span<const double> mpc_hist, double u_mpc_now,
                                         std::span<const double> u_pred) {
  spec.validate();
  if (static_cast<int>(err_hist.size()) < spec.h_a ||
      static_cast<int>(own_hist.size()) < spec.h_a)
    throw ShapeMismatchError("observation: history shorter than h_a");
  if (static_cast<int>(ref_preview.size()) < spec.k_ref)
    throw ShapeMismatchError("observation: reference preview shorter than k_ref");
  if (spec.variant == AgentVariant::kAc2 && static_cast<int>(mpc_hist.size()) < spec.h_a)
    throw ShapeMismatchError("observation: MPC history shorter than h_a");
  if (spec.variant == AgentVariant::kAc3 && static_cast<int>(u_pred.size()) < spec.k_pred)
    throw ShapeMismatchError("observation: prediction block shorter than k_pred");

  Eigen::VectorXd obs(observation_length(spec));
  int k = 0;
  obs[k++] = v / spec.v_scale;
  for (int i = 0; i < spec.h_a; ++i) obs[k++] = err_hist[i] / spec.e_scale;
  for (int i = 0; i < spec.k_ref; ++i) obs[k++] = ref_preview[i] / spec.v_scale;
  for (int i = 0; i < spec.h_a; ++i) obs[k++] = own_hist[i];
  if (spec.variant == AgentVariant::kAc2) {
    for (int i = 0; i < spec.h_a; ++i) obs[k++] = mpc_hist[i];
  } else if (spec.variant == AgentVariant::kAc3) {
    obs[k++] = u_mpc_now;
    for (int i = 0; i < spec.k_pred; ++i) obs[k++] = u_pred[i];
  }
  return obs;
}

}  // namespace ac3mpc
