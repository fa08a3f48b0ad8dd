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

#include "ac3mpc/plant.hpp"

namespace ac3mpc {

TerrainParams terrain_preset(const std::string& name) {
  if (name == "T0") return {"T0", 1.0, 0.0, 0.0, 0.0, 0.5};
  if (name == "T1") return {"T1", 0.70, 0.55, 0.045, 0.004, 0.5};
  if (name == "T2") return {"T2", 0.78, 0.60, 0.06, 0.005, 0.5};
  if (name == "T3") return {"T3", 0.62, 0.70, 0.06, 0.003, 0.5};
  throw UnknownTerrainError("unknown terrain preset: " + name);
}

PlantState plant_step(const PlantState& p, const ControlInput& u, const TerrainParams& terrain,
                      const VehicleParams& vehicle, double accel_scale, const SimConfig& cfg,
                      const ActuatorLimits& limits) {
  const double a_cmd = std::clamp(u.a, limits.a_min, limits.a_max);
  const double omega = std::clamp(u.omega, limits.omega_min, limits.omega_max);
  const double drive = terrain.traction_eff * accel_scale * a_cmd;

  const double h = cfg.control_dt / cfg.substeps;
  VehicleState x = p.state;
  const ControlInput u_sat{a_cmd, omega};
  for (int k = 0; k < cfg.substeps; ++k) {
    x = detail::fixed_step(x, h, IntegrationScheme::kRk4, [&](const VehicleState& s) {
      VehicleState d = nominal_derivative(s, u_sat, vehicle, accel_scale);
      d.v = drive - terrain_resistance(s.v, terrain);
      return d;
    });
    x.v = std::max(x.v, cfg.v_floor);
    x.delta = std::clamp(x.delta, limits.delta_min, limits.delta_max);
  }
  return {x, p.t + cfg.control_dt};
}

}  // namespace ac3mpc
