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
#include <filesystem>
#include <fstream>

#include "ac3mpc/csv.hpp"
#include "ac3mpc/scenarios.hpp"

using namespace ac3mpc;

namespace {

RolloutRecord synthetic_record(int n, double dt, const std::function<double(double)>& v_of_t,
                               const std::function<double(double)>& vref_of_t) {
  RolloutRecord r;
  for (int i = 0; i < n; ++i) {
    const double t = i * dt;
    r.t.push_back(t);
    r.v.push_back(v_of_t(t));
    r.v_ref.push_back(vref_of_t(t));
    r.v_err.push_back(v_of_t(t) - vref_of_t(t));
    r.u_mpc_a.push_back(0.0);
    r.u_rl.push_back(0.0);
    r.u_applied_a.push_back(0.0);
    r.omega.push_back(0.0);
    r.reward.push_back(0.0);
    r.kkt.push_back(0.0);
    r.slack.push_back(0.0);
    r.solver_status.push_back(0);
    r.iterations.push_back(0);
    r.p_c.push_back(1);
  }
  return r;
}

}  // namespace

TEST_CASE("constant profile holds the cap") {
  SpeedProfileSpec spec;
  spec.kind = ProfileKind::kConstant;
  const SpeedProfile p = SpeedProfile::generate(spec);
  for (double t : {0.0, 1.0, 37.5, 60.0}) CHECK(p(t) == 5.0);
}

TEST_CASE("varying profiles stay in range with a continuous first derivative") {
  for (std::uint64_t seed : {1ULL, 2ULL, 77ULL}) {
    SpeedProfileSpec spec;
    spec.kind = ProfileKind::kVarying;
    spec.seed = seed;
    const SpeedProfile p = SpeedProfile::generate(spec);
    double prev_slope = 0.0;
    bool have_prev = false;
    const double h = 1e-4;
    for (double t = 0.0; t <= 60.0; t += 0.05) {
      const double v = p(t);
      CHECK(v >= 0.0);
      CHECK(v <= 5.0);
      if (t > h && t < 60.0 - h) {
        const double slope = (p(t + h) - p(t - h)) / (2 * h);
        if (have_prev) CHECK(std::abs(slope - prev_slope) < 0.3);  // C1: no slope jumps at 0.05 spacing
        prev_slope = slope;
        have_prev = true;
      }
    }
  }
}

TEST_CASE("profiles are deterministic in the seed") {
  SpeedProfileSpec spec;
  spec.kind = ProfileKind::kVarying;
  spec.seed = 12345;
  const SpeedProfile a = SpeedProfile::generate(spec);
  const SpeedProfile b = SpeedProfile::generate(spec);
  for (double t = 0.0; t < 60.0; t += 0.37) CHECK(a(t) == b(t));
  spec.seed = 12346;
  const SpeedProfile c = SpeedProfile::generate(spec);
  double diff = 0.0;
  for (double t = 0.0; t < 60.0; t += 0.37) diff += std::abs(a(t) - c(t));
  CHECK(diff > 1.0);
}

TEST_CASE("golden profile hashes are pinned") {
  // FNV-1a over a fixed-precision sampling; regenerating must reproduce these.
  const std::uint64_t pins[3][3] = {
      {0xb7ac41f3265d809eULL, 0xb316fecb33e14aa7ULL, 0x1f1ccbbad447b136ULL},
      {0xd91f81321a4ebec8ULL, 0xec8c97f4d5207077ULL, 0x9553f82f7facaa21ULL},
      {0x8fb2e2cc38d8ea24ULL, 0xd6ceb60d08fe76b3ULL, 0x9b6706e4d229398dULL},
  };
  for (int terrain : {1, 2, 3})
    for (int seed : {1, 2, 3}) {
      const SpeedProfile p = SpeedProfile::generate(golden_varying_spec(terrain, seed));
      CHECK(profile_hash(p, 60.0, 0.05) == pins[terrain - 1][seed - 1]);
    }
}

TEST_CASE("golden profiles match the shipped files byte for byte") {
  const auto shipped = std::filesystem::path(AC3MPC_SOURCE_DIR) / "assets" / "profiles";
  for (int terrain : {1, 2, 3}) {
    for (int seed : {1, 2, 3}) {
      const SpeedProfileSpec spec = golden_varying_spec(terrain, seed);
      const SpeedProfile p = SpeedProfile::generate(spec);
      std::vector<double> t, v;
      for (int i = 0; i <= 1200; ++i) {
        t.push_back(i * 0.05);
        v.push_back(p(i * 0.05));
      }
      const auto tmp = std::filesystem::temp_directory_path() /
                       ("golden_T" + std::to_string(terrain) + "_s" + std::to_string(seed) + ".csv");
      write_profile_csv(t, v, tmp.string());
      const auto name = "golden_T" + std::to_string(terrain) + "_s" + std::to_string(seed) + ".csv";
      std::ifstream a(shipped / name), b(tmp);
      REQUIRE(a.good());
      REQUIRE(b.good());
      std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
      std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
      CHECK(sa == sb);
      std::filesystem::remove(tmp);
    }
  }
}

TEST_CASE("metrics basics") {
  SUBCASE("zero error, constant speed") {
    const RolloutRecord r = synthetic_record(200, 0.05, [](double) { return 3.0; },
                                             [](double) { return 3.0; });
    const Metrics m = compute_metrics(r, 0.05);
    CHECK(m.rms_err == 0.0);
    CHECK(m.avg_jerk == 0.0);
  }
  SUBCASE("constant error of two") {
    const RolloutRecord r = synthetic_record(200, 0.05, [](double) { return 5.0; },
                                             [](double) { return 3.0; });
    CHECK(compute_metrics(r, 0.05).rms_err == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("errors are capped at five") {
    const RolloutRecord r = synthetic_record(100, 0.05, [](double) { return 15.0; },
                                             [](double) { return 0.0; });
    CHECK(compute_metrics(r, 0.05).rms_err == doctest::Approx(5.0).epsilon(1e-14));
  }
  SUBCASE("quadratic speed profile has analytic jerk two") {
    const RolloutRecord r = synthetic_record(400, 0.05, [](double t) { return t * t; },
                                             [](double t) { return t * t; });
    CHECK(compute_metrics(r, 0.05).avg_jerk == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("negating the error leaves the rms unchanged") {
    const RolloutRecord a = synthetic_record(150, 0.05, [](double t) { return 3.0 + std::sin(t); },
                                             [](double) { return 3.0; });
    RolloutRecord b = a;
    for (auto& e : b.v_err) e = -e;
    CHECK(compute_metrics(a, 0.05).rms_err ==
          doctest::Approx(compute_metrics(b, 0.05).rms_err).epsilon(1e-14));
  }
  SUBCASE("empty record is rejected") {
    RolloutRecord r;
    CHECK_THROWS_AS(compute_metrics(r, 0.05), EmptyRecordError);
  }
}

TEST_CASE("jerk is stable under doubling the sampling period") {
  const SpeedProfile p = SpeedProfile::generate(golden_varying_spec(1, 1));
  const auto sample = [&](double dt) {
    const int n = static_cast<int>(60.0 / dt);
    const RolloutRecord r = synthetic_record(n, dt, [&](double t) { return p(t); },
                                             [&](double t) { return p(t); });
    return compute_metrics(r, dt).avg_jerk;
  };
  const double j1 = sample(0.05);
  const double j2 = sample(0.10);
  CHECK(std::abs(j1 - j2) / j1 < 0.10);
}

TEST_CASE("segment breakdown covers the run in four parts") {
  const RolloutRecord r = synthetic_record(400, 0.05, [](double t) { return t < 10 ? 0.0 : 3.0; },
                                           [](double) { return 3.0; });
  const Metrics m = compute_metrics(r, 0.05);
  REQUIRE(m.segment_rms.size() == 4);
  CHECK(m.segment_rms[0] > m.segment_rms[3]);
  CHECK(m.segment_rms[3] == 0.0);
}
