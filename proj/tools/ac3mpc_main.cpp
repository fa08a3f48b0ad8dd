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
// Command-line workbench: train agents, run the evaluation grid, compare
// summaries and calibrate terrain presets.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <memory>

#include "ac3mpc/csv.hpp"
#include "ac3mpc/eval.hpp"
#include "ac3mpc/train.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitCheckFailed = 4;

ac3mpc::ExperimentConfig load_config(const std::string& path) {
  if (path.empty()) return ac3mpc::ExperimentConfig{};
  return ac3mpc::parse_config_file(path);
}

double mpc_rms_on(const ac3mpc::ExperimentConfig& cfg, const ac3mpc::TerrainParams& terrain,
                  const ac3mpc::SpeedProfileSpec& pspec) {
  ac3mpc::OcpSolver solver(cfg.ocp_config(), ac3mpc::ModelKind::kBaseline);
  const ac3mpc::SpeedProfile profile = ac3mpc::SpeedProfile::generate(pspec);
  ac3mpc::ControlLoop loop(cfg.loop_config(ac3mpc::ControllerKind::kMpc), terrain,
                           [&profile](double t) { return profile(t); }, &solver, nullptr);
  const ac3mpc::RolloutRecord rec = loop.run(cfg.eval_duration);
  return ac3mpc::compute_metrics(rec, cfg.sim.control_dt, cfg.accel_scale).rms_err;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"off-road speed-tracking control workbench (MPC / AC / AC2MPC / AC3MPC)"};
  app.require_subcommand(1);

  std::string config_path, out_dir, variant = "AC3MPC", checkpoint_dir;
  int seed = 1, threads = 0;
  long checkpoint_step = -1;
  bool sweep = false, strict = false;
  std::vector<std::string> summaries;

  auto* train = app.add_subcommand("train", "train one agent variant with PPO on the training terrain");
  train->add_option("--config", config_path, "configuration file");
  train->add_option("--variant", variant, "AC | AC2MPC | AC3MPC")->capture_default_str();
  train->add_option("--seed", seed, "training seed")->capture_default_str();
  train->add_option("--out", out_dir, "output directory (default: config output_dir)");

  auto* eval = app.add_subcommand("eval", "run the scenario x controller evaluation grid");
  eval->add_option("--config", config_path, "configuration file");
  eval->add_option("--checkpoint-dir", checkpoint_dir, "directory holding trained checkpoints");
  eval->add_option("--checkpoint-step", checkpoint_step,
                   "evaluate the under-trained checkpoint written at this step (-1: final)")
      ->capture_default_str();
  eval->add_option("--threads", threads, "worker threads (0: hardware)")->capture_default_str();
  eval->add_option("--out", out_dir, "output directory (default: config output_dir)");

  auto* cmp = app.add_subcommand("compare", "compare evaluation summaries");
  cmp->add_option("summaries", summaries, "summary.csv paths (>= 2)")->required();
  cmp->add_flag("--strict", strict, "exit non-zero when an expected ordering does not hold");

  auto* cal = app.add_subcommand("calibrate-terrain",
                                 "report baseline-MPC tracking error per terrain preset");
  cal->add_option("--config", config_path, "configuration file");
  cal->add_flag("--sweep", sweep, "grid-sweep traction/resistance multipliers on T1");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      const ac3mpc::ExperimentConfig cfg = load_config(config_path);
      const std::string out = out_dir.empty() ? cfg.output_dir : out_dir;
      const ac3mpc::ControllerKind kind = ac3mpc::controller_from_name(variant);
      std::cout << "training " << variant << " seed " << seed << " for " << cfg.ppo.total_steps
                << " steps on " << cfg.train_terrain << "\n";
      const ac3mpc::TrainResult res = ac3mpc::train_agent(
          cfg, kind, seed, out, [](long step, double ret) {
            std::cout << "  step " << step << "  mean return " << ret << "\n";
          });
      std::cout << "final checkpoint: " << res.final_checkpoint << "\n";
      std::cout << "reward curve:     " << res.curve_path << "\n";
      return kExitOk;
    }

    if (eval->parsed()) {
      const ac3mpc::ExperimentConfig cfg = load_config(config_path);
      const std::string out = out_dir.empty() ? cfg.output_dir : out_dir;
      ac3mpc::EvalOptions opts;
      opts.checkpoint_dir =
          checkpoint_dir.empty() ? (std::filesystem::path(out) / "checkpoints").string()
                                 : checkpoint_dir;
      opts.checkpoint_step = checkpoint_step;
      opts.threads = threads;
      const ac3mpc::EvalResult res = ac3mpc::run_eval_grid(cfg, opts, out);
      int skipped = 0;
      for (const auto& row : res.rows)
        if (row.status != "ok") {
          ++skipped;
          std::cout << row.scenario << " " << row.controller << " s" << row.seed << " -> "
                    << row.status << "\n";
        }
      std::cout << res.rows.size() - skipped << "/" << res.rows.size() << " cells evaluated\n";
      std::cout << "summary: " << res.summary_path << "\n";
      std::cout << "table:   " << res.table1_path << "\n";
      return kExitOk;
    }

    if (cmp->parsed()) {
      const ac3mpc::CompareReport rep = ac3mpc::compare_summaries(summaries);
      std::cout << rep.rendered;
      if (strict) {
        for (const auto& v : rep.ordering_verdicts)
          if (v.find("does not hold") != std::string::npos) return kExitCheckFailed;
        if (!rep.diffs.empty()) return kExitCheckFailed;
      }
      return kExitOk;
    }

    if (cal->parsed()) {
      const ac3mpc::ExperimentConfig cfg = load_config(config_path);
      if (sweep) {
        std::cout << "baseline-MPC rms on T1 constant-5 while scaling (traction_eff, c0):\n";
        std::cout << "eta_mult,c0_mult,rms\n";
        for (double em : {0.8, 0.9, 1.0, 1.1, 1.2}) {
          for (double cm : {0.5, 0.75, 1.0, 1.5, 2.0}) {
            ac3mpc::TerrainParams t = cfg.terrain("T1");
            t.traction_eff = std::min(1.0, t.traction_eff * em);
            t.c0 *= cm;
            std::cout << em << ',' << cm << ','
                      << ac3mpc::format_double(
                             mpc_rms_on(cfg, t, cfg.profile_spec(ac3mpc::ProfileKind::kConstant, 0)))
                      << "\n";
          }
        }
        return kExitOk;
      }
      std::cout << "baseline-MPC rms per terrain (constant-5 and three golden varying "
                   "profiles); the deformable presets were chosen from these numbers:\n";
      for (const auto& name : cfg.terrains) {
        const ac3mpc::TerrainParams terrain = cfg.terrain(name);
        const double rms_c =
            mpc_rms_on(cfg, terrain, cfg.profile_spec(ac3mpc::ProfileKind::kConstant, 0));
        std::cout << name << "_C rms " << ac3mpc::format_double(rms_c) << "\n";
        for (int s : cfg.seeds) {
          const auto spec = ac3mpc::golden_varying_spec(name[1] - '0', s, cfg.eval_duration);
          std::cout << name << "_V s" << s << " rms "
                    << ac3mpc::format_double(mpc_rms_on(cfg, terrain, spec)) << "\n";
        }
      }
      return kExitOk;
    }
  } catch (const ac3mpc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ac3mpc::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
