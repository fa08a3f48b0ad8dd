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
//
// Exercises the train/eval/compare drivers at desk scale (tiny budgets).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ac3mpc/csv.hpp"
#include "ac3mpc/eval.hpp"
#include "ac3mpc/train.hpp"

using namespace ac3mpc;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.eval_duration = 5.0;
  cfg.ppo.n_steps = 64;
  cfg.ppo.minibatch = 32;
  cfg.ppo.epochs = 2;
  cfg.terrains = {"T1"};
  cfg.controllers = {"MPC", "AC"};
  cfg.seeds = {1};
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("zero training steps emit only the untrained final checkpoint") {
  const fs::path out = fresh_dir("ac3mpc_cli_train0");
  ExperimentConfig cfg = tiny_config();
  cfg.ppo.total_steps = 0;
  cfg.ppo.checkpoint_steps = {5000};
  const TrainResult res = train_agent(cfg, ControllerKind::kAc, 1, out.string());
  CHECK(res.checkpoint_paths.empty());
  CHECK(fs::exists(res.final_checkpoint));
  int files = 0;
  for (const auto& e : fs::directory_iterator(out / "checkpoints")) {
    (void)e;
    ++files;
  }
  CHECK(files == 1);
}

TEST_CASE("checkpoint schedule produces exactly the scheduled files plus final") {
  const fs::path out = fresh_dir("ac3mpc_cli_sched");
  ExperimentConfig cfg = tiny_config();
  cfg.ppo.total_steps = 200;
  cfg.ppo.checkpoint_steps = {64, 128};
  const TrainResult res = train_agent(cfg, ControllerKind::kAc, 3, out.string());
  CHECK(res.checkpoint_paths.size() == 2);
  CHECK(fs::exists(out / "checkpoints" / "AC_s3_step64.json"));
  CHECK(fs::exists(out / "checkpoints" / "AC_s3_step128.json"));
  CHECK(fs::exists(out / "checkpoints" / "AC_s3_final.json"));
  CHECK(fs::exists(res.curve_path));
}

TEST_CASE("eval grid: counting contract, skipped cells, determinism") {
  const fs::path train_out = fresh_dir("ac3mpc_cli_train");
  ExperimentConfig cfg = tiny_config();
  cfg.ppo.total_steps = 64;  // one update
  cfg.ppo.checkpoint_steps = {};
  train_agent(cfg, ControllerKind::kAc, 1, train_out.string());

  EvalOptions opts;
  opts.checkpoint_dir = (train_out / "checkpoints").string();
  opts.threads = 2;
  opts.write_svg = true;

  const fs::path out_a = fresh_dir("ac3mpc_cli_eval_a");
  const EvalResult a = run_eval_grid(cfg, opts, out_a.string());
  // 1 terrain x 2 profiles x 2 controllers x 1 seed
  CHECK(a.rows.size() == 4);
  int ok = 0;
  for (const auto& r : a.rows) {
    CHECK(r.status == "ok");
    if (r.status == "ok") {
      ++ok;
      CHECK(fs::exists(r.record_path));
    }
  }
  CHECK(ok == 4);
  CHECK(fs::exists(a.summary_path));
  CHECK(fs::exists(a.table1_path));
  CHECK(fs::exists(out_a / "plots" / "trace_T1_C_MPC.svg"));

  SUBCASE("re-running reproduces the summary byte for byte") {
    const fs::path out_b = fresh_dir("ac3mpc_cli_eval_b");
    const EvalResult b = run_eval_grid(cfg, opts, out_b.string());
    // record paths embed the run dir, so compare row-wise metric fields
    REQUIRE(b.rows.size() == a.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      CHECK(a.rows[i].metrics.rms_err == b.rows[i].metrics.rms_err);
      CHECK(a.rows[i].metrics.avg_jerk == b.rows[i].metrics.avg_jerk);
    }
    // and the record files themselves are identical
    for (std::size_t i = 0; i < a.rows.size(); ++i)
      CHECK(slurp(a.rows[i].record_path) == slurp(b.rows[i].record_path));
  }

  SUBCASE("missing checkpoints skip cells explicitly") {
    ExperimentConfig cfg2 = cfg;
    cfg2.controllers = {"MPC", "AC", "AC3MPC"};  // AC3MPC was never trained
    const fs::path out_c = fresh_dir("ac3mpc_cli_eval_c");
    const EvalResult c = run_eval_grid(cfg2, opts, out_c.string());
    int skipped = 0;
    for (const auto& r : c.rows)
      if (r.status != "ok") {
        ++skipped;
        CHECK(r.controller == "AC3MPC");
        CHECK(r.status.find("missing checkpoint") != std::string::npos);
      }
    CHECK(skipped == 2);
  }
}

TEST_CASE("summary csv round-trips through the reader") {
  const fs::path train_out = fresh_dir("ac3mpc_cli_sum_train");
  ExperimentConfig cfg = tiny_config();
  cfg.controllers = {"MPC"};
  cfg.ppo.total_steps = 0;
  const fs::path out = fresh_dir("ac3mpc_cli_sum_eval");
  EvalOptions opts;
  opts.checkpoint_dir = (train_out / "checkpoints").string();
  const EvalResult res = run_eval_grid(cfg, opts, out.string());
  const auto rows = read_summary_csv(res.summary_path);
  REQUIRE(rows.size() == res.rows.size());
  CHECK(rows[0].metrics.rms_err == doctest::Approx(res.rows[0].metrics.rms_err).epsilon(1e-7));
}

TEST_CASE("compare: identical inputs give zero improvement, arithmetic checks out") {
  const fs::path dir = fresh_dir("ac3mpc_cli_compare");
  const auto write_summary = [&](const std::string& name, double mpc_rms, double ac3_rms) {
    std::vector<std::vector<std::string>> rows = {
        {"T1_C", "T1", "C", "MPC", "1", "-1", format_double(mpc_rms), "1.0", "1.0", "0.5", "0",
         "ok", ""},
        {"T1_C", "T1", "C", "AC3MPC", "1", "-1", format_double(ac3_rms), "0.5", "0.5", "0.5", "0",
         "ok", ""},
    };
    const std::string path = (dir / name).string();
    write_table_csv("ac3mpc-summary v1",
                    {"scenario", "terrain", "profile", "controller", "seed", "checkpoint_step",
                     "rms_err", "avg_jerk", "avg_cmd_jerk", "mean_abs_u", "solver_failures",
                     "status", "record"},
                    rows, path);
    return path;
  };

  SUBCASE("identical summaries: zero percent") {
    const auto p1 = write_summary("a.csv", 2.0, 2.0);
    const auto p2 = write_summary("b.csv", 2.0, 2.0);
    const CompareReport rep = compare_summaries({p1, p2});
    CHECK(rep.mean_rms_improvement_pct.at({"AC3MPC", "MPC"}) == doctest::Approx(0.0));
  }
  SUBCASE("2.0 vs 1.5 reports a 25 percent improvement") {
    const auto p1 = write_summary("c.csv", 2.0, 1.5);
    const auto p2 = write_summary("d.csv", 2.0, 1.5);
    const CompareReport rep = compare_summaries({p1, p2});
    CHECK(rep.mean_rms_improvement_pct.at({"AC3MPC", "MPC"}) == doctest::Approx(25.0));
    bool found = false;
    for (const auto& v : rep.ordering_verdicts)
      if (v.find("AC3MPC < MPC") != std::string::npos) {
        CHECK(v.find(": holds") != std::string::npos);
        found = true;
      }
    CHECK(found);
  }
  SUBCASE("mismatched scenario sets are reported") {
    const auto p1 = write_summary("e.csv", 2.0, 1.5);
    std::vector<std::vector<std::string>> rows = {
        {"T2_C", "T2", "C", "MPC", "1", "-1", "2.0", "1.0", "1.0", "0.5", "0", "ok", ""}};
    const std::string p2 = (dir / "f.csv").string();
    write_table_csv("ac3mpc-summary v1",
                    {"scenario", "terrain", "profile", "controller", "seed", "checkpoint_step",
                     "rms_err", "avg_jerk", "avg_cmd_jerk", "mean_abs_u", "solver_failures",
                     "status", "record"},
                    rows, p2);
    const CompareReport rep = compare_summaries({p1, p2});
    CHECK(!rep.diffs.empty());
  }
}
