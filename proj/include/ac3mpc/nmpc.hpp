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
#include <optional>
#include <vector>

#include "ac3mpc/dynamics.hpp"
#include "ac3mpc/plant.hpp"

namespace ac3mpc {

using Vec2 = Eigen::Matrix<double, 2, 1>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat62 = Eigen::Matrix<double, 6, 2>;

// Augmented state ordering used throughout the solver.
enum StateIndex { kSx = 0, kSy = 1, kPhi = 2, kDelta = 3, kV = 4, kArl = 5 };
enum InputIndex { kA = 0, kOmega = 1 };

inline Vec6 to_vec(const AugmentedState& x) {
  Vec6 v;
  v << x.base.s_x, x.base.s_y, x.base.phi, x.base.delta, x.base.v, x.a_rl;
  return v;
}

inline AugmentedState to_augmented(const Vec6& v) {
  return {{v[kSx], v[kSy], v[kPhi], v[kDelta], v[kV]}, v[kArl]};
}

/// Whether the OCP runs on the nominal model (compensation channel pinned to
/// zero) or the compensation-augmented model.
enum class ModelKind { kBaseline, kAugmented };

/// Weights, bounds and solver settings of the tracking OCP.
struct OcpConfig {
  int horizon = 20;  // N [stages]
  double dt = 0.05;  // stage duration [s]

  // Diagonal weights over (s_x, s_y, phi, delta, v, a_rl) and (a, omega).
  Vec6 q_diag = (Vec6() << 0.0, 0.0, 0.1, 0.1, 0.1, 0.0).finished();
  Vec6 p_diag = (Vec6() << 0.0, 0.0, 0.2, 0.2, 0.2, 0.0).finished();
  Vec2 r_diag = (Vec2() << 1.0, 1.0).finished();

  double lambda = 0.0;  // compensation drift rate over the horizon [1/s]
  // Rate at which the model's compensation channel relaxes toward zero along
  // the horizon [1/s]. Zero holds a_rl constant (the lambda -> 0 limit); a
  // positive rate keeps the anticipated compensation inside its bounds and
  // preserves the agent's control authority.
  double comp_decay_rate = 30.0;
  CompensationSign comp_sign = CompensationSign::kPlus;

  ActuatorLimits limits;        // hard input bounds (a, omega); delta path bound
  double v_min = 0.0;           // soft
  double alat_min = -3.0;       // soft [m/s^2]
  double alat_max = 3.0;
  double a_rl_bound = 0.33;

  double accel_scale = 4.0;  // [m/s^2] per unit normalized throttle
  VehicleParams vehicle;

  double slack_weight = 1e3;      // L1 penalty weight on state-constraint violation
  double slack_smoothing = 1e-3;  // hinge smoothing half-width
  int max_iter_cold = 30;
  int max_iter_warm = 3;  // RTI-style bounded refinement from a shifted guess
  double kkt_tol = 1e-6;

  void validate() const;  // throws ConfigError on malformed settings
};

/// Reference states chi (N+1) and inputs mu (N) over the horizon.
struct ReferenceTrajectory {
  std::vector<Vec6> chi;
  std::vector<Vec2> mu;
};

/// Build a straight-line tracking reference from a speed profile sampled at
/// t0, t0+dt, ...; positions integrate the reference speed, yaw/steering and
/// the compensation reference are zero.
template <typename ProfileFn>
ReferenceTrajectory make_reference(const ProfileFn& v_ref, double t0, double s_x0, int horizon,
                                   double dt) {
  ReferenceTrajectory ref;
  ref.chi.resize(horizon + 1, Vec6::Zero());
  ref.mu.resize(horizon, Vec2::Zero());
  double s = s_x0;
  for (int i = 0; i <= horizon; ++i) {
    const double vr = v_ref(t0 + i * dt);
    ref.chi[i][kSx] = s;
    ref.chi[i][kV] = vr;
    s += vr * dt;
  }
  return ref;
}

enum class SolveStatus { kConverged, kMaxIter, kInfeasibleRelaxed };

struct OcpSolution {
  ControlInput u0;
  std::vector<Vec2> u_pred;  // length N, all within input bounds
  std::vector<Vec6> x_pred;  // length N+1
  SolveStatus status = SolveStatus::kMaxIter;
  double kkt_residual = 0.0;
  double cost = 0.0;
  double max_violation = 0.0;  // worst soft-constraint violation along x_pred
  int iterations = 0;
};

/// Lateral acceleration output z = v^2 tan(delta) / L.
inline double lateral_accel(double v, double delta, double wheelbase) {
  return v * v * std::tan(delta) / wheelbase;
}

/// Minimal solve interface so control loops can be exercised with fakes.
class SolverInterface {
 public:
  virtual ~SolverInterface() = default;
  virtual OcpSolution solve(const AugmentedState& x0, const ReferenceTrajectory& ref,
                            const OcpSolution* warm) = 0;
  virtual const OcpConfig& config() const = 0;
};

/// SQP tracking solver over a multiple-shooting transcription.
///
/// Each iteration linearizes the RK4-discretized dynamics around the current
/// state/input trajectory, condenses the state deviations onto the inputs,
/// and solves a box-constrained QP with a projected-Newton active-set method.
/// Input bounds are hard (satisfied to machine precision); the speed,
/// lateral-acceleration and steering path constraints enter as a smoothed L1
/// penalty. A warm solve runs a bounded number of iterations from the shifted
/// previous solution.
///
/// A solver instance owns its workspace and is single-threaded; independent
/// instances may run concurrently.
class OcpSolver : public SolverInterface {
 public:
  explicit OcpSolver(const OcpConfig& cfg, ModelKind kind = ModelKind::kAugmented);

  OcpSolution solve(const AugmentedState& x0, const ReferenceTrajectory& ref,
                    const OcpSolution* warm = nullptr) override;

  /// Baseline convenience: solve from a plain vehicle state (a_rl pinned 0).
  OcpSolution solve(const VehicleState& x0, const ReferenceTrajectory& ref,
                    const OcpSolution* warm = nullptr);

  const OcpConfig& config() const override { return cfg_; }
  ModelKind kind() const { return kind_; }

  struct Guess {
    std::vector<Vec6> x;
    std::vector<Vec2> u;
  };

  /// Receding-horizon shift: drop stage 0, duplicate stage N-1, re-roll the
  /// states from the new initial state through the model.
  Guess shift_warm_start(const OcpSolution& prev, const Vec6& x0) const;

  /// Discrete dynamics step used by the transcription (RK4 over one stage).
  Vec6 discrete_step(const Vec6& x, const Vec2& u) const;

  /// Exact Jacobians of discrete_step, chained analytically through RK4.
  void discrete_jacobians(const Vec6& x, const Vec2& u, Mat6& A, Mat62& B) const;

  /// Total NLP objective (tracking cost plus soft-constraint penalty) of a
  /// state/input trajectory. Exposed for oracle tests and warm-start checks.
  double trajectory_cost(const std::vector<Vec6>& x, const std::vector<Vec2>& u,
                         const ReferenceTrajectory& ref) const;

  /// Gradient of trajectory_cost w.r.t. the stacked inputs, with states
  /// eliminated through the linearized dynamics (the condensed SQP gradient).
  Eigen::VectorXd condensed_gradient(const std::vector<Vec6>& x, const std::vector<Vec2>& u,
                                     const ReferenceTrajectory& ref) const;

 private:
  Vec6 rhs(const Vec6& x, const Vec2& u) const;
  void rhs_jacobians(const Vec6& x, Mat6& fx, Mat62& fu) const;

  // Stage cost pieces at one shooting node (tracking + penalty).
  struct StageQuad {
    Vec6 grad_x;
    Mat6 hess_x;
    double value;
    double violation;
  };
  StageQuad stage_state_quad(const Vec6& x, const Vec6& chi, const Vec6& q_diag) const;

  struct BuiltQp;
  void build_qp(const std::vector<Vec6>& x, const std::vector<Vec2>& u,
                const ReferenceTrajectory& ref, BuiltQp& qp) const;

  OcpConfig cfg_;
  ModelKind kind_;
};

}  // namespace ac3mpc
