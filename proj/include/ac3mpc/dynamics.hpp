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

#include "ac3mpc/errors.hpp"

namespace ac3mpc {

/// Kinematic bicycle geometry.
///
/// `wheelbase` is the axle-to-axle distance L, `rear_axle_dist` the distance
/// L_r from the rear axle to the reference point. Invariant: 0 < L_r < L.
struct VehicleParams {
  double wheelbase = 3.0;       // L [m]
  double rear_axle_dist = 1.5;  // L_r [m]
};

/// Bicycle-model state. The body slip angle is an algebraic output of the
/// steering angle and is recomputed on demand, never stored.
struct VehicleState {
  double s_x = 0.0;    // position [m]
  double s_y = 0.0;    // position [m]
  double phi = 0.0;    // yaw [rad]
  double delta = 0.0;  // steering angle [rad]
  double v = 0.0;      // longitudinal speed [m/s]
};

/// Bicycle state extended with the compensation acceleration channel.
/// `a_rl` is a normalized input held as a state so the OCP can anticipate it.
struct AugmentedState {
  VehicleState base;
  double a_rl = 0.0;  // normalized compensation input
};

/// Normalized acceleration command plus steering rate.
struct ControlInput {
  double a = 0.0;      // normalized, maps linearly to physical accel
  double omega = 0.0;  // steering rate [rad/s]
};

/// How the compensation channel enters the speed equation. `Plus` matches the
/// additive composition of the control loop (u = u_mpc + u_rl); `Minus` is the
/// alternative convention, kept selectable for sensitivity studies.
enum class CompensationSign { kPlus, kMinus };

enum class IntegrationScheme { kEuler, kRk4 };

/// Body slip angle beta = atan(L_r/L * tan(delta)). Odd and monotone
/// increasing in delta on (-pi/2, pi/2).
inline double slip_angle(double delta, const VehicleParams& p) {
  return std::atan(p.rear_axle_dist / p.wheelbase * std::tan(delta));
}

/// Continuous-time derivative of the nominal model:
///   s_x' = v cos(phi+beta), s_y' = v sin(phi+beta),
///   phi' = v/L tan(beta), delta' = omega, v' = accel_scale * a.
inline VehicleState nominal_derivative(const VehicleState& x, const ControlInput& u,
                                       const VehicleParams& p, double accel_scale) {
  const double beta = slip_angle(x.delta, p);
  VehicleState d;
  d.s_x = x.v * std::cos(x.phi + beta);
  d.s_y = x.v * std::sin(x.phi + beta);
  d.phi = x.v / p.wheelbase * std::tan(beta);
  d.delta = u.omega;
  d.v = accel_scale * u.a;
  return d;
}

/// Derivative of the augmented model. Shared states follow the nominal model;
/// the speed equation adds (or subtracts) the compensation channel and the
/// compensation itself drifts at the constant rate lambda.
inline AugmentedState augmented_derivative(const AugmentedState& x, const ControlInput& u,
                                           double lambda, const VehicleParams& p,
                                           double accel_scale,
                                           CompensationSign sign = CompensationSign::kPlus) {
  AugmentedState d;
  d.base = nominal_derivative(x.base, u, p, accel_scale);
  const double s = (sign == CompensationSign::kPlus) ? 1.0 : -1.0;
  d.base.v = accel_scale * (u.a + s * x.a_rl);
  d.a_rl = lambda;
  return d;
}

namespace detail {

inline VehicleState axpy(const VehicleState& x, double h, const VehicleState& k) {
  return {x.s_x + h * k.s_x, x.s_y + h * k.s_y, x.phi + h * k.phi, x.delta + h * k.delta,
          x.v + h * k.v};
}

inline AugmentedState axpy(const AugmentedState& x, double h, const AugmentedState& k) {
  return {axpy(x.base, h, k.base), x.a_rl + h * k.a_rl};
}

inline bool finite(const VehicleState& x) {
  return std::isfinite(x.s_x) && std::isfinite(x.s_y) && std::isfinite(x.phi) &&
         std::isfinite(x.delta) && std::isfinite(x.v);
}

inline bool finite(const AugmentedState& x) { return finite(x.base) && std::isfinite(x.a_rl); }

// One fixed step of euler/rk4 for any state type with an rhs functor.
template <typename State, typename Rhs>
State fixed_step(const State& x, double dt, IntegrationScheme scheme, const Rhs& rhs) {
  State out;
  if (scheme == IntegrationScheme::kEuler) {
    out = axpy(x, dt, rhs(x));
  } else {
    const State k1 = rhs(x);
    const State k2 = rhs(axpy(x, 0.5 * dt, k1));
    const State k3 = rhs(axpy(x, 0.5 * dt, k2));
    const State k4 = rhs(axpy(x, dt, k3));
    State acc = axpy(x, dt / 6.0, k1);
    acc = axpy(acc, dt / 3.0, k2);
    acc = axpy(acc, dt / 3.0, k3);
    out = axpy(acc, dt / 6.0, k4);
  }
  if (!finite(out)) throw NonFiniteError("integration produced a non-finite state");
  return out;
}

}  // namespace detail

/// One fixed integration step of the nominal model.
inline VehicleState integrate_nominal(const VehicleState& x, const ControlInput& u,
                                      const VehicleParams& p, double accel_scale, double dt,
                                      IntegrationScheme scheme = IntegrationScheme::kRk4) {
  return detail::fixed_step(
      x, dt, scheme, [&](const VehicleState& s) { return nominal_derivative(s, u, p, accel_scale); });
}

/// One fixed integration step of the augmented model.
inline AugmentedState integrate_augmented(const AugmentedState& x, const ControlInput& u,
                                          double lambda, const VehicleParams& p, double accel_scale,
                                          CompensationSign sign = CompensationSign::kPlus,
                                          double dt = 0.05,
                                          IntegrationScheme scheme = IntegrationScheme::kRk4) {
  return detail::fixed_step(x, dt, scheme, [&](const AugmentedState& s) {
    return augmented_derivative(s, u, lambda, p, accel_scale, sign);
  });
}

}  // namespace ac3mpc
