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

#include <algorithm>
#include <cstdint>
#include <string>

#include "ac3mpc/dynamics.hpp"

namespace ac3mpc {

/// Physical actuator range of the simulated vehicle. The normalized throttle
/// spans [-1, 1] by construction; steering angle and rate match a UTV-class
/// platform.
struct ActuatorLimits {
  double a_min = -1.0;
  double a_max = 1.0;
  double omega_min = -0.6;  // [rad/s]
  double omega_max = 0.6;
  double delta_min = -0.45;  // [rad]
  double delta_max = 0.45;
};

/// Longitudinal resistance model of a deformable terrain.
///
/// Traction efficiency scales commanded acceleration; the polynomial
/// c0 + c1*v + c2*v^2 resists motion while the vehicle moves forward, with c0
/// ramped in smoothly below `sinkage_sat` so the resistance vanishes at rest.
struct TerrainParams {
  std::string name = "T0";
  double traction_eff = 1.0;  // eta, (0, 1]
  double c0 = 0.0;            // constant resistance [m/s^2]
  double c1 = 0.0;            // linear drag [1/s]
  double c2 = 0.0;            // quadratic drag [1/m]
  double sinkage_sat = 0.5;   // v_sat [m/s]
};

/// Simulation stepping parameters: one control period of `control_dt` is
/// integrated in `substeps` equal RK4 sub-steps.
struct SimConfig {
  double control_dt = 0.05;  // T_s [s]
  int substeps = 5;
  std::uint64_t seed = 0;
  double v_floor = 0.0;
};

/// True-plant state: vehicle state plus simulation clock.
struct PlantState {
  VehicleState state;
  double t = 0.0;
};

/// Smoothstep on [0,1]: 0 below 0, 1 above 1, 3s^2-2s^3 between.
inline double smooth01(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * (3.0 - 2.0 * s);
}

/// Resistive deceleration r(v) [m/s^2]; active only while moving forward.
inline double terrain_resistance(double v, const TerrainParams& t) {
  if (v <= 0.0) return 0.0;
  return t.c0 * smooth01(v / t.sinkage_sat) + t.c1 * v + t.c2 * v * v;
}

/// Frozen terrain presets. T0 is rigid ground (no mismatch); T1..T3 are the
/// deformable presets produced by the calibrate-terrain tool.
TerrainParams terrain_preset(const std::string& name);

/// Advance the true plant by one control period.
///
/// Inputs are saturated to the actuator limits, then `cfg.substeps` RK4
/// sub-steps integrate the nominal kinematics with effective acceleration
///   a_eff = eta * accel_scale * sat(u.a) - r(v).
/// Speed is clamped at zero from below and the steering angle at its
/// mechanical stops after every sub-step. Deterministic.
PlantState plant_step(const PlantState& p, const ControlInput& u, const TerrainParams& terrain,
                      const VehicleParams& vehicle, double accel_scale, const SimConfig& cfg,
                      const ActuatorLimits& limits = {});

}  // namespace ac3mpc
