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

#include "ac3mpc/nmpc.hpp"

#include <algorithm>
#include <cmath>

#include "ac3mpc/errors.hpp"

namespace ac3mpc {

namespace {

constexpr double kBindingEps = 1e-10;
constexpr double kDefectMeritWeight = 1e3;

// Smoothed one-sided L1 penalty: 0 for t<=0, quadratic blend on (0, kappa),
// slope-1 linear beyond. Keeps the exact-penalty slope while staying C1.
struct Hinge {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

Hinge hinge(double t, double kappa) {
  Hinge h;
  if (t <= 0.0) return h;
  if (t >= kappa) {
    h.value = t - 0.5 * kappa;
    h.d1 = 1.0;
  } else {
    h.value = 0.5 * t * t / kappa;
    h.d1 = t / kappa;
    h.d2 = 1.0 / kappa;
  }
  return h;
}

// Projected gradient infinity-norm of the box QP at step zero.
double bound_stationarity(const Eigen::VectorXd& g, const Eigen::VectorXd& lo,
                          const Eigen::VectorXd& hi) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    double comp = g[j];
    if (lo[j] >= -kBindingEps) comp = std::min(g[j], 0.0);
    if (hi[j] <= kBindingEps) comp = std::max(g[j], 0.0);
    worst = std::max(worst, std::abs(comp));
  }
  return worst;
}

// Projected-Newton solver for  min 1/2 z'Hz + g'z  s.t. lo <= z <= hi.
// H must be positive definite (guaranteed here by R > 0 on every stage).
Eigen::VectorXd solve_box_qp(const Eigen::MatrixXd& H, const Eigen::VectorXd& g,
                             const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  const Eigen::Index n = g.size();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n).cwiseMax(lo).cwiseMin(hi);
  const auto objective = [&](const Eigen::VectorXd& w) {
    return 0.5 * w.dot(H * w) + g.dot(w);
  };

  for (int iter = 0; iter < 50; ++iter) {
    const Eigen::VectorXd grad = H * z + g;
    std::vector<Eigen::Index> free;
    free.reserve(n);
    double pg = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const bool at_lo = z[j] <= lo[j] + kBindingEps;
      const bool at_hi = z[j] >= hi[j] - kBindingEps;
      if ((at_lo && grad[j] > 0.0) || (at_hi && grad[j] < 0.0)) continue;
      free.push_back(j);
      pg = std::max(pg, std::abs(grad[j]));
    }
    if (pg < 1e-10 || free.empty()) break;

    Eigen::MatrixXd Hff(free.size(), free.size());
    Eigen::VectorXd gf(free.size());
    for (std::size_t r = 0; r < free.size(); ++r) {
      gf[r] = grad[free[r]];
      for (std::size_t c = 0; c < free.size(); ++c) Hff(r, c) = H(free[r], free[c]);
    }
    const Eigen::VectorXd pf = Hff.ldlt().solve(-gf);

    Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
    for (std::size_t r = 0; r < free.size(); ++r) p[free[r]] = pf[r];

    const double f0 = objective(z);
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 12; ++ls) {
      Eigen::VectorXd zt = (z + alpha * p).cwiseMax(lo).cwiseMin(hi);
      if (objective(zt) < f0 - 1e-14) {
        z = zt;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }
  return z;
}

}  // namespace

void OcpConfig::validate() const {
  if (horizon < 2) throw ConfigError("ocp: horizon must be >= 2");
  if (dt <= 0.0) throw ConfigError("ocp: dt must be positive");
  if ((q_diag.array() < 0.0).any() || (p_diag.array() < 0.0).any())
    throw ConfigError("ocp: state weights must be non-negative");
  if ((r_diag.array() <= 0.0).any()) throw ConfigError("ocp: input weights must be positive");
  if (limits.a_min >= limits.a_max || limits.omega_min >= limits.omega_max ||
      limits.delta_min >= limits.delta_max)
    throw ConfigError("ocp: bounds must be well-ordered");
  if (alat_min >= alat_max) throw ConfigError("ocp: lateral acceleration bounds ill-ordered");
  if (a_rl_bound <= 0.0) throw ConfigError("ocp: a_rl_bound must be positive");
  if (accel_scale <= 0.0) throw ConfigError("ocp: accel_scale must be positive");
  if (slack_weight <= 0.0 || slack_smoothing <= 0.0)
    throw ConfigError("ocp: slack settings must be positive");
  if (comp_decay_rate < 0.0) throw ConfigError("ocp: comp_decay_rate must be >= 0");
  const auto& veh = vehicle;
  if (!(veh.rear_axle_dist > 0.0 && veh.rear_axle_dist < veh.wheelbase))
    throw ConfigError("ocp: vehicle geometry requires 0 < L_r < L");
}

OcpSolver::OcpSolver(const OcpConfig& cfg, ModelKind kind) : cfg_(cfg), kind_(kind) {
  cfg_.validate();
}

Vec6 OcpSolver::rhs(const Vec6& x, const Vec2& u) const {
  const VehicleParams& p = cfg_.vehicle;
  const double beta = std::atan(p.rear_axle_dist / p.wheelbase * std::tan(x[kDelta]));
  const double sgn = (cfg_.comp_sign == CompensationSign::kPlus) ? 1.0 : -1.0;
  Vec6 f;
  f[kSx] = x[kV] * std::cos(x[kPhi] + beta);
  f[kSy] = x[kV] * std::sin(x[kPhi] + beta);
  f[kPhi] = x[kV] / p.wheelbase * std::tan(beta);
  f[kDelta] = u[kOmega];
  f[kV] = cfg_.accel_scale * (u[kA] + sgn * x[kArl]);
  f[kArl] =
      (kind_ == ModelKind::kBaseline) ? 0.0 : cfg_.lambda - cfg_.comp_decay_rate * x[kArl];
  return f;
}

void OcpSolver::rhs_jacobians(const Vec6& x, Mat6& fx, Mat62& fu) const {
  const VehicleParams& p = cfg_.vehicle;
  const double ratio = p.rear_axle_dist / p.wheelbase;
  const double td = std::tan(x[kDelta]);
  const double beta = std::atan(ratio * td);
  const double sec2d = 1.0 + td * td;
  // d beta / d delta
  const double dbeta = ratio * sec2d / (1.0 + ratio * ratio * td * td);
  const double cb = std::cos(x[kPhi] + beta);
  const double sb = std::sin(x[kPhi] + beta);
  const double tb = std::tan(beta);
  const double sec2b = 1.0 + tb * tb;
  const double sgn = (cfg_.comp_sign == CompensationSign::kPlus) ? 1.0 : -1.0;

  fx.setZero();
  fx(kSx, kPhi) = -x[kV] * sb;
  fx(kSx, kDelta) = -x[kV] * sb * dbeta;
  fx(kSx, kV) = cb;
  fx(kSy, kPhi) = x[kV] * cb;
  fx(kSy, kDelta) = x[kV] * cb * dbeta;
  fx(kSy, kV) = sb;
  fx(kPhi, kDelta) = x[kV] / p.wheelbase * sec2b * dbeta;
  fx(kPhi, kV) = tb / p.wheelbase;
  fx(kV, kArl) = cfg_.accel_scale * sgn;
  if (kind_ != ModelKind::kBaseline) fx(kArl, kArl) = -cfg_.comp_decay_rate;

  fu.setZero();
  fu(kDelta, kOmega) = 1.0;
  fu(kV, kA) = cfg_.accel_scale;
}

Vec6 OcpSolver::discrete_step(const Vec6& x, const Vec2& u) const {
  const double h = cfg_.dt;
  const Vec6 k1 = rhs(x, u);
  const Vec6 k2 = rhs(x + 0.5 * h * k1, u);
  const Vec6 k3 = rhs(x + 0.5 * h * k2, u);
  const Vec6 k4 = rhs(x + h * k3, u);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void OcpSolver::discrete_jacobians(const Vec6& x, const Vec2& u, Mat6& A, Mat62& B) const {
  const double h = cfg_.dt;
  Mat6 fx1, fx2, fx3, fx4;
  Mat62 fu;

  const Vec6 k1 = rhs(x, u);
  rhs_jacobians(x, fx1, fu);
  const Mat6 K1x = fx1;
  const Mat62 K1u = fu;

  const Vec6 x2 = x + 0.5 * h * k1;
  const Vec6 k2 = rhs(x2, u);
  rhs_jacobians(x2, fx2, fu);
  const Mat6 K2x = fx2 * (Mat6::Identity() + 0.5 * h * K1x);
  const Mat62 K2u = fx2 * (0.5 * h * K1u) + fu;

  const Vec6 x3 = x + 0.5 * h * k2;
  rhs_jacobians(x3, fx3, fu);
  const Mat6 K3x = fx3 * (Mat6::Identity() + 0.5 * h * K2x);
  const Mat62 K3u = fx3 * (0.5 * h * K2u) + fu;

  const Vec6 k3 = rhs(x3, u);
  const Vec6 x4 = x + h * k3;
  rhs_jacobians(x4, fx4, fu);
  const Mat6 K4x = fx4 * (Mat6::Identity() + h * K3x);
  const Mat62 K4u = fx4 * (h * K3u) + fu;

  A = Mat6::Identity() + (h / 6.0) * (K1x + 2.0 * K2x + 2.0 * K3x + K4x);
  B = (h / 6.0) * (K1u + 2.0 * K2u + 2.0 * K3u + K4u);
}

OcpSolver::StageQuad OcpSolver::stage_state_quad(const Vec6& x, const Vec6& chi,
                                                 const Vec6& q_diag) const {
  StageQuad out;
  out.hess_x.setZero();
  out.grad_x.setZero();
  out.value = 0.0;
  out.violation = 0.0;

  const Vec6 err = x - chi;
  out.value += err.dot(q_diag.cwiseProduct(err));
  out.grad_x += 2.0 * q_diag.cwiseProduct(err);
  out.hess_x.diagonal() += 2.0 * q_diag;

  const double rho = cfg_.slack_weight;
  const double kappa = cfg_.slack_smoothing;
  const double L = cfg_.vehicle.wheelbase;
  const double td = std::tan(x[kDelta]);
  const double a_lat = x[kV] * x[kV] * td / L;
  Vec6 alat_grad = Vec6::Zero();
  alat_grad[kV] = 2.0 * x[kV] * td / L;
  alat_grad[kDelta] = x[kV] * x[kV] * (1.0 + td * td) / L;

  struct Term {
    double g;
    Vec6 grad;
  };
  Vec6 e_v = Vec6::Zero();
  e_v[kV] = 1.0;
  Vec6 e_d = Vec6::Zero();
  e_d[kDelta] = 1.0;
  const Term terms[] = {
      {cfg_.v_min - x[kV], -e_v},
      {a_lat - cfg_.alat_max, alat_grad},
      {cfg_.alat_min - a_lat, -alat_grad},
      {x[kDelta] - cfg_.limits.delta_max, e_d},
      {cfg_.limits.delta_min - x[kDelta], -e_d},
  };
  for (const Term& t : terms) {
    out.violation = std::max(out.violation, t.g);
    const Hinge h = hinge(t.g, kappa);
    if (h.value == 0.0 && h.d1 == 0.0) continue;
    out.value += rho * h.value;
    out.grad_x += rho * h.d1 * t.grad;
    if (h.d2 > 0.0) out.hess_x += rho * h.d2 * t.grad * t.grad.transpose();
  }
  out.violation = std::max(out.violation, 0.0);
  return out;
}

double OcpSolver::trajectory_cost(const std::vector<Vec6>& x, const std::vector<Vec2>& u,
                                  const ReferenceTrajectory& ref) const {
  const int N = cfg_.horizon;
  double cost = 0.0;
  for (int i = 0; i < N; ++i) {
    cost += stage_state_quad(x[i], ref.chi[i], cfg_.q_diag).value;
    const Vec2 du = u[i] - ref.mu[i];
    cost += du.dot(cfg_.r_diag.cwiseProduct(du));
  }
  cost += stage_state_quad(x[N], ref.chi[N], cfg_.p_diag).value;
  return cost;
}

struct OcpSolver::BuiltQp {
  Eigen::MatrixXd H;
  Eigen::VectorXd g, lo, hi;
  std::vector<Eigen::MatrixXd> E;  // node sensitivities d x_i / d u, 6 x 2N
  std::vector<Vec6> c;             // defect roll-up per node
  std::vector<Vec6> d;             // shooting defects per stage
  double cost = 0.0;
  double defect_inf = 0.0;
  double stat_inf = 0.0;
  double violation = 0.0;
};

void OcpSolver::build_qp(const std::vector<Vec6>& x, const std::vector<Vec2>& u,
                         const ReferenceTrajectory& ref, BuiltQp& qp) const {
  const int N = cfg_.horizon;
  const int n = 2 * N;
  qp.H.setZero(n, n);
  qp.g.setZero(n);
  qp.lo.resize(n);
  qp.hi.resize(n);
  qp.E.assign(N + 1, Eigen::MatrixXd::Zero(6, n));
  qp.c.assign(N + 1, Vec6::Zero());
  qp.d.assign(N, Vec6::Zero());
  qp.cost = 0.0;
  qp.defect_inf = 0.0;
  qp.violation = 0.0;

  Mat6 A;
  Mat62 B;
  for (int i = 0; i < N; ++i) {
    const Vec6 next = discrete_step(x[i], u[i]);
    discrete_jacobians(x[i], u[i], A, B);
    qp.d[i] = next - x[i + 1];
    qp.defect_inf = std::max(qp.defect_inf, qp.d[i].cwiseAbs().maxCoeff());

    const StageQuad sq = stage_state_quad(x[i], ref.chi[i], cfg_.q_diag);
    qp.cost += sq.value;
    qp.violation = std::max(qp.violation, sq.violation);
    if (i > 0) {
      const Eigen::MatrixXd HxE = sq.hess_x * qp.E[i];
      qp.H.noalias() += qp.E[i].transpose() * HxE;
      qp.g.noalias() += qp.E[i].transpose() * (sq.grad_x + sq.hess_x * qp.c[i]);
    }

    const Vec2 du = u[i] - ref.mu[i];
    qp.cost += du.dot(cfg_.r_diag.cwiseProduct(du));
    qp.g.segment<2>(2 * i) += 2.0 * cfg_.r_diag.cwiseProduct(du);
    qp.H(2 * i, 2 * i) += 2.0 * cfg_.r_diag[0];
    qp.H(2 * i + 1, 2 * i + 1) += 2.0 * cfg_.r_diag[1];

    qp.lo[2 * i] = cfg_.limits.a_min - u[i][kA];
    qp.hi[2 * i] = cfg_.limits.a_max - u[i][kA];
    qp.lo[2 * i + 1] = cfg_.limits.omega_min - u[i][kOmega];
    qp.hi[2 * i + 1] = cfg_.limits.omega_max - u[i][kOmega];

    qp.E[i + 1].noalias() = A * qp.E[i];
    qp.E[i + 1].block<6, 2>(0, 2 * i) += B;
    qp.c[i + 1] = A * qp.c[i] + qp.d[i];
  }

  const StageQuad sqN = stage_state_quad(x[N], ref.chi[N], cfg_.p_diag);
  qp.cost += sqN.value;
  qp.violation = std::max(qp.violation, sqN.violation);
  const Eigen::MatrixXd HxE = sqN.hess_x * qp.E[N];
  qp.H.noalias() += qp.E[N].transpose() * HxE;
  qp.g.noalias() += qp.E[N].transpose() * (sqN.grad_x + sqN.hess_x * qp.c[N]);

  if (!qp.H.allFinite() || !qp.g.allFinite() || !std::isfinite(qp.cost))
    throw SolverFailureError("ocp linearization produced non-finite data");

  qp.stat_inf = bound_stationarity(qp.g, qp.lo, qp.hi);
}

Eigen::VectorXd OcpSolver::condensed_gradient(const std::vector<Vec6>& x,
                                              const std::vector<Vec2>& u,
                                              const ReferenceTrajectory& ref) const {
  BuiltQp qp;
  build_qp(x, u, ref, qp);
  return qp.g;
}

OcpSolver::Guess OcpSolver::shift_warm_start(const OcpSolution& prev, const Vec6& x0) const {
  const int N = cfg_.horizon;
  Guess guess;
  guess.u.resize(N);
  for (int i = 0; i + 1 < N; ++i) guess.u[i] = prev.u_pred[i + 1];
  guess.u[N - 1] = prev.u_pred[N - 1];
  guess.x.resize(N + 1);
  guess.x[0] = x0;
  for (int i = 0; i < N; ++i) guess.x[i + 1] = discrete_step(guess.x[i], guess.u[i]);
  return guess;
}

OcpSolution OcpSolver::solve(const VehicleState& x0, const ReferenceTrajectory& ref,
                             const OcpSolution* warm) {
  return solve(AugmentedState{x0, 0.0}, ref, warm);
}

OcpSolution OcpSolver::solve(const AugmentedState& x0_in, const ReferenceTrajectory& ref,
                             const OcpSolution* warm) {
  const int N = cfg_.horizon;
  if (static_cast<int>(ref.chi.size()) != N + 1 || static_cast<int>(ref.mu.size()) != N)
    throw ShapeMismatchError("reference dimensions do not match the horizon");
  AugmentedState x0 = x0_in;
  if (kind_ == ModelKind::kBaseline) x0.a_rl = 0.0;
  Vec6 x0v = to_vec(x0);
  if (!x0v.allFinite()) throw NonFiniteError("ocp initial state not finite");

  std::vector<Vec6> X(N + 1);
  std::vector<Vec2> U(N, Vec2::Zero());
  if (warm != nullptr && static_cast<int>(warm->u_pred.size()) == N) {
    Guess g = shift_warm_start(*warm, x0v);
    X = std::move(g.x);
    U = std::move(g.u);
  } else {
    X[0] = x0v;
    for (int i = 0; i < N; ++i) X[i + 1] = discrete_step(X[i], U[i]);
  }
  const int max_iter = (warm != nullptr) ? cfg_.max_iter_warm : cfg_.max_iter_cold;

  BuiltQp qp;
  OcpSolution sol;
  int it = 0;
  while (true) {
    build_qp(X, U, ref, qp);
    const double kkt = std::max(qp.stat_inf, qp.defect_inf);
    if (kkt < cfg_.kkt_tol) {
      sol.status =
          (qp.violation > 1e-3) ? SolveStatus::kInfeasibleRelaxed : SolveStatus::kConverged;
      sol.kkt_residual = kkt;
      break;
    }
    if (it >= max_iter) {
      sol.status = SolveStatus::kMaxIter;
      sol.kkt_residual = kkt;
      break;
    }

    const Eigen::VectorXd du = solve_box_qp(qp.H, qp.g, qp.lo, qp.hi);
    if (!du.allFinite()) throw SolverFailureError("box QP produced a non-finite step");

    // Merit line search on cost + L1 defect. Full steps are the common case.
    const double merit0 = qp.cost + kDefectMeritWeight * [&] {
      double s = 0.0;
      for (const Vec6& d : qp.d) s += d.lpNorm<1>();
      return s;
    }();
    std::vector<Vec6> Xt(N + 1);
    std::vector<Vec2> Ut(N);
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 6; ++ls) {
      for (int i = 0; i <= N; ++i) Xt[i] = X[i] + alpha * (qp.E[i] * du + qp.c[i]);
      double defect1 = 0.0;
      for (int i = 0; i < N; ++i) {
        Ut[i] = U[i] + alpha * du.segment<2>(2 * i);
        Ut[i][kA] = std::clamp(Ut[i][kA], cfg_.limits.a_min, cfg_.limits.a_max);
        Ut[i][kOmega] = std::clamp(Ut[i][kOmega], cfg_.limits.omega_min, cfg_.limits.omega_max);
      }
      for (int i = 0; i < N; ++i) defect1 += (discrete_step(Xt[i], Ut[i]) - Xt[i + 1]).lpNorm<1>();
      const double merit = trajectory_cost(Xt, Ut, ref) + kDefectMeritWeight * defect1;
      if (merit < merit0 - 1e-14) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      sol.status = SolveStatus::kMaxIter;
      sol.kkt_residual = std::max(qp.stat_inf, qp.defect_inf);
      break;
    }
    X.swap(Xt);
    U.swap(Ut);
    ++it;
  }

  sol.iterations = it;
  sol.cost = qp.cost;
  sol.max_violation = qp.violation;
  sol.u_pred = U;
  sol.x_pred = X;
  sol.u0 = ControlInput{U[0][kA], U[0][kOmega]};
  if (!std::isfinite(sol.u0.a) || !std::isfinite(sol.u0.omega))
    throw SolverFailureError("ocp returned a non-finite input");
  return sol;
}

}  // namespace ac3mpc
