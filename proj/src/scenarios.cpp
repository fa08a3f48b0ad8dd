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

#include "ac3mpc/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ac3mpc/rng.hpp"

namespace ac3mpc {

SpeedProfile SpeedProfile::generate(const SpeedProfileSpec& spec) {
  SpeedProfile p;
  if (spec.kind == ProfileKind::kConstant) {
    p.t_ = {0.0, spec.duration};
    p.y_ = {spec.v_cap, spec.v_cap};
    p.m_ = {0.0, 0.0};
    return p;
  }

  Rng rng(spec.seed);
  const int n_knots = std::max(2, static_cast<int>(std::ceil(spec.duration / spec.knot_spacing)) + 1);
  p.t_.resize(n_knots);
  p.y_.resize(n_knots);
  for (int i = 0; i < n_knots; ++i) {
    p.t_[i] = i * spec.knot_spacing;
    p.y_[i] = std::clamp(rng.uniform(spec.amp_lo, spec.amp_hi), 0.0, spec.v_cap);
  }

  // Fritsch-Carlson slopes: shape preserving, so values stay inside the local
  // knot range and the first derivative is continuous.
  const int n = n_knots;
  std::vector<double> d(n - 1);
  for (int i = 0; i + 1 < n; ++i) d[i] = (p.y_[i + 1] - p.y_[i]) / (p.t_[i + 1] - p.t_[i]);
  p.m_.assign(n, 0.0);
  p.m_[0] = d[0];
  p.m_[n - 1] = d[n - 2];
  for (int i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      p.m_[i] = 0.0;
    } else {
      const double h0 = p.t_[i] - p.t_[i - 1];
      const double h1 = p.t_[i + 1] - p.t_[i];
      const double w1 = 2.0 * h1 + h0;
      const double w2 = h1 + 2.0 * h0;
      p.m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  return p;
}

double SpeedProfile::operator()(double t) const {
  if (t_.size() == 2 && m_[0] == 0.0 && m_[1] == 0.0 && y_[0] == y_[1]) return y_[0];
  if (t <= t_.front()) return y_.front();
  if (t >= t_.back()) return y_.back();
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const int i = static_cast<int>(it - t_.begin()) - 1;
  const double h = t_[i + 1] - t_[i];
  const double s = (t - t_[i]) / h;
  const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
  const double h10 = s * (1.0 - s) * (1.0 - s);
  const double h01 = s * s * (3.0 - 2.0 * s);
  const double h11 = s * s * (s - 1.0);
  return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
}

Metrics compute_metrics(const RolloutRecord& record, double dt, double accel_scale) {
  if (record.empty()) throw EmptyRecordError("metrics over an empty record");
  const int n = static_cast<int>(record.size());

  Metrics m;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = std::clamp(record.v_err[i], -5.0, 5.0);
    sq += e * e;
  }
  m.rms_err = std::sqrt(sq / n);

  // Realized acceleration from the achieved speed; jerk from its increments.
  if (n >= 3) {
    double acc = 0.0;
    int cnt = 0;
    for (int i = 0; i + 2 < n; ++i) {
      const double a0 = (record.v[i + 1] - record.v[i]) / dt;
      const double a1 = (record.v[i + 2] - record.v[i + 1]) / dt;
      acc += std::abs(a1 - a0) / dt;
      ++cnt;
    }
    m.avg_jerk = acc / cnt;
  }
  if (n >= 2) {
    double acc = 0.0;
    for (int i = 0; i + 1 < n; ++i)
      acc += std::abs(record.u_applied_a[i + 1] - record.u_applied_a[i]) * accel_scale / dt;
    m.avg_cmd_jerk = acc / (n - 1);
  }

  double util = 0.0;
  for (int i = 0; i < n; ++i) util += std::abs(record.u_applied_a[i]);
  m.mean_abs_u = util / n;
  m.solver_failures = record.solver_failures;

  m.segment_rms.assign(4, 0.0);
  for (int s = 0; s < 4; ++s) {
    const int lo = s * n / 4;
    const int hi = std::max(lo + 1, (s + 1) * n / 4);
    double acc = 0.0;
    for (int i = lo; i < hi; ++i) {
      const double e = std::clamp(record.v_err[i], -5.0, 5.0);
      acc += e * e;
    }
    m.segment_rms[s] = std::sqrt(acc / (hi - lo));
  }
  return m;
}

std::uint64_t profile_hash(const SpeedProfile& p, double duration, double dt) {
  std::uint64_t h = 1469598103934665603ULL;
  const auto mix = [&h](std::uint64_t x) {
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xffULL;
      h *= 1099511628211ULL;
    }
  };
  const int steps = static_cast<int>(std::llround(duration / dt));
  for (int i = 0; i <= steps; ++i) {
    // Hash a fixed-precision decimal rendering, not raw bits, so the pin is
    // robust to FMA contraction differences between compilers.
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9f", p(i * dt));
    for (const char* c = buf; *c != '\0'; ++c) {
      h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(*c));
      h *= 1099511628211ULL;
    }
    mix(0x7fULL);
  }
  return h;
}

SpeedProfileSpec golden_varying_spec(int terrain_index, int seed_index, double duration) {
  SpeedProfileSpec spec;
  spec.kind = ProfileKind::kVarying;
  spec.duration = duration;
  spec.seed = 7000ULL + 100ULL * static_cast<std::uint64_t>(terrain_index) +
              static_cast<std::uint64_t>(seed_index);
  return spec;
}

}  // namespace ac3mpc
