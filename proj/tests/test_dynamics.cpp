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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ac3mpc/dynamics.hpp"
#include "ac3mpc/rng.hpp"

using namespace ac3mpc;

namespace {

const VehicleParams kVeh{3.0, 1.5};
constexpr double kScale = 4.0;

// Fine-step Euler reference used as the integration oracle.
template <typename State, typename Rhs>
State euler_fine(State x, double dt, int substeps, const Rhs& rhs) {
  const double h = dt / substeps;
  for (int i = 0; i < substeps; ++i) x = detail::axpy(x, h, rhs(x));
  return x;
}

double max_state_diff(const AugmentedState& a, const AugmentedState& b) {
  double m = std::abs(a.base.s_x - b.base.s_x);
  m = std::max(m, std::abs(a.base.s_y - b.base.s_y));
  m = std::max(m, std::abs(a.base.phi - b.base.phi));
  m = std::max(m, std::abs(a.base.delta - b.base.delta));
  m = std::max(m, std::abs(a.base.v - b.base.v));
  return std::max(m, std::abs(a.a_rl - b.a_rl));
}

}  // namespace

TEST_CASE("slip angle closed form") {
  CHECK(slip_angle(0.0, kVeh) == 0.0);
  // atan(0.5 * tan(0.2)), frozen from a 30-digit evaluation.
  CHECK(slip_angle(0.2, kVeh) == doctest::Approx(0.101010073458161286).epsilon(1e-12));
  CHECK(slip_angle(-0.2, kVeh) == doctest::Approx(-slip_angle(0.2, kVeh)).epsilon(1e-15));
}

TEST_CASE("slip angle is odd and monotone on (-pi/2, pi/2)") {
  double prev = -10.0;
  for (int i = -40; i <= 40; ++i) {
    const double d = i * 0.035;
    const double b = slip_angle(d, kVeh);
    CHECK(b == doctest::Approx(-slip_angle(-d, kVeh)).epsilon(1e-14));
    CHECK(b > prev);
    prev = b;
  }
}

TEST_CASE("nominal derivative") {
  SUBCASE("rest stays at rest") {
    const VehicleState x{0, 0, 0.3, 0.1, 0.0};
    const VehicleState d = nominal_derivative(x, {0.0, 0.0}, kVeh, kScale);
    CHECK(d.s_x == 0.0);
    CHECK(d.s_y == 0.0);
    CHECK(d.phi == 0.0);
    CHECK(d.v == 0.0);
  }
  SUBCASE("straight-line motion") {
    const VehicleState x{0, 0, 0, 0, 5.0};
    const VehicleState d = nominal_derivative(x, {0.0, 0.0}, kVeh, kScale);
    CHECK(d.s_x == doctest::Approx(5.0));
    CHECK(d.s_y == 0.0);
    CHECK(d.phi == 0.0);
  }
  SUBCASE("yaw rate closed form, v=5 delta=0.2") {
    const VehicleState x{0, 0, 0, 0.2, 5.0};
    const VehicleState d = nominal_derivative(x, {0.0, 0.0}, kVeh, kScale);
    // (5/3) * tan(atan(0.5 tan 0.2)), frozen from a 30-digit evaluation.
    CHECK(d.phi == doctest::Approx(0.168925029590560403).epsilon(1e-12));
  }
  SUBCASE("acceleration scaling") {
    const VehicleState x{0, 0, 0, 0, 2.0};
    CHECK(nominal_derivative(x, {0.5, 0.0}, kVeh, kScale).v == doctest::Approx(2.0));
  }
}

TEST_CASE("augmented derivative") {
  SUBCASE("degenerate augmentation equals nominal") {
    const AugmentedState x{{1, 2, 0.3, 0.1, 4.0}, 0.0};
    const AugmentedState d = augmented_derivative(x, {0.25, 0.05}, 0.0, kVeh, kScale);
    const VehicleState dn = nominal_derivative(x.base, {0.25, 0.05}, kVeh, kScale);
    CHECK(d.base.s_x == dn.s_x);
    CHECK(d.base.s_y == dn.s_y);
    CHECK(d.base.phi == dn.phi);
    CHECK(d.base.delta == dn.delta);
    CHECK(d.base.v == dn.v);
    CHECK(d.a_rl == 0.0);
  }
  SUBCASE("plus convention") {
    const AugmentedState x{{0, 0, 0, 0, 1.0}, 0.2};
    CHECK(augmented_derivative(x, {0.5, 0.0}, 0.0, kVeh, kScale).base.v == doctest::Approx(2.8));
  }
  SUBCASE("minus convention is sign-configurable") {
    const AugmentedState x{{0, 0, 0, 0, 1.0}, 0.2};
    CHECK(augmented_derivative(x, {0.5, 0.0}, 0.0, kVeh, kScale, CompensationSign::kMinus).base.v ==
          doctest::Approx(4.0 * 0.3));
  }
  SUBCASE("lambda drives the compensation state linearly") {
    const AugmentedState x{{0, 0, 0, 0, 1.0}, 0.1};
    const AugmentedState x1 = integrate_augmented(x, {0.0, 0.0}, 0.1, kVeh, kScale,
                                                  CompensationSign::kPlus, 0.05);
    CHECK(x1.a_rl == doctest::Approx(0.1 + 0.005).epsilon(1e-15));
  }
}

TEST_CASE("integration basics") {
  SUBCASE("equilibrium is a fixed point") {
    const VehicleState x{3, -2, 0.7, 0.0, 0.0};
    const VehicleState y = integrate_nominal(x, {0.0, 0.0}, kVeh, kScale, 0.05);
    CHECK(y.s_x == x.s_x);
    CHECK(y.s_y == x.s_y);
    CHECK(y.v == 0.0);
  }
  SUBCASE("steering channel is linear in omega") {
    const VehicleState x{0, 0, 0, 0.1, 2.0};
    const VehicleState y = integrate_nominal(x, {0.0, 0.1}, kVeh, kScale, 0.05);
    CHECK(y.delta == doctest::Approx(0.105).epsilon(1e-15));
  }
  SUBCASE("rk4 matches a 1000x finer euler oracle") {
    // At dt=0.05 the Euler oracle's own global error is ~1.25e-6*|xdotdot|,
    // so the bound there reflects the oracle, not RK4; at dt=0.02 the oracle
    // is accurate enough for a 1e-6 bound.
    const AugmentedState x{{0, 0, 0, 0.2, 5.0}, 0.1};
    const ControlInput u{0.3, 0.05};
    const auto rhs = [&](const AugmentedState& s) {
      return augmented_derivative(s, u, 0.0, kVeh, kScale);
    };
    const AugmentedState rk_05 = integrate_augmented(x, u, 0.0, kVeh, kScale,
                                                     CompensationSign::kPlus, 0.05);
    CHECK(max_state_diff(rk_05, euler_fine(x, 0.05, 1000, rhs)) < 2e-6);
    const AugmentedState rk_02 = integrate_augmented(x, u, 0.0, kVeh, kScale,
                                                     CompensationSign::kPlus, 0.02);
    CHECK(max_state_diff(rk_02, euler_fine(x, 0.02, 1000, rhs)) < 1e-6);
  }
}

TEST_CASE("rk4 vs fine euler over 100 random states and inputs") {
  // dt chosen so the oracle's own first-order error stays below the bound
  // over the whole actuation envelope.
  const double dt = 0.01;
  Rng rng(42);
  for (int k = 0; k < 100; ++k) {
    AugmentedState x;
    x.base.s_x = rng.uniform(-50, 50);
    x.base.s_y = rng.uniform(-50, 50);
    x.base.phi = rng.uniform(-3, 3);
    x.base.delta = rng.uniform(-0.45, 0.45);
    x.base.v = rng.uniform(0, 8);
    x.a_rl = rng.uniform(-0.33, 0.33);
    const ControlInput u{rng.uniform(-1, 1), rng.uniform(-0.6, 0.6)};
    const double lambda = rng.uniform(-0.1, 0.1);
    const auto rhs = [&](const AugmentedState& s) {
      return augmented_derivative(s, u, lambda, kVeh, kScale);
    };
    const AugmentedState rk =
        integrate_augmented(x, u, lambda, kVeh, kScale, CompensationSign::kPlus, dt);
    const AugmentedState eu = euler_fine(x, dt, 1000, rhs);
    CHECK(max_state_diff(rk, eu) < 1e-6);
  }
}

TEST_CASE("straight-line invariance: delta=0, omega=0 keeps s_y and phi") {
  VehicleState x{0, 1.5, 0.0, 0.0, 3.0};
  for (int i = 0; i < 200; ++i) x = integrate_nominal(x, {0.4, 0.0}, kVeh, kScale, 0.05);
  CHECK(x.s_y == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(x.phi == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("translation invariance of the position channels") {
  Rng rng(7);
  for (int k = 0; k < 20; ++k) {
    VehicleState x{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-1, 1),
                   rng.uniform(-0.3, 0.3), rng.uniform(0, 6)};
    const ControlInput u{rng.uniform(-1, 1), rng.uniform(-0.5, 0.5)};
    VehicleState shifted = x;
    shifted.s_x += 11.0;
    shifted.s_y -= 4.0;
    const VehicleState a = integrate_nominal(x, u, kVeh, kScale, 0.05);
    const VehicleState b = integrate_nominal(shifted, u, kVeh, kScale, 0.05);
    CHECK(b.s_x - a.s_x == doctest::Approx(11.0).epsilon(1e-12));
    CHECK(b.s_y - a.s_y == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(b.phi == doctest::Approx(a.phi).epsilon(1e-14));
    CHECK(b.v == doctest::Approx(a.v).epsilon(1e-14));
  }
}

TEST_CASE("non-finite states are rejected") {
  VehicleState x{0, 0, 0, 0, 1e308};
  CHECK_THROWS_AS(integrate_nominal(x, {1.0, 0.0}, kVeh, 1e308, 1e3), NonFiniteError);
}
