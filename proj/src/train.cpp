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

#include "ac3mpc/train.hpp"

#include <algorithm>
#include <filesystem>
#include <memory>

#include "ac3mpc/csv.hpp"

namespace ac3mpc {

namespace fs = std::filesystem;

std::string checkpoint_filename(ControllerKind kind, int seed, long step, bool is_final) {
  std::string base = std::string(controller_name(kind)) + "_s" + std::to_string(seed);
  if (is_final) return base + "_final.json";
  return base + "_step" + std::to_string(step) + ".json";
}

long steps_to_90pct_plateau(const std::vector<long>& steps, const std::vector<double>& returns) {
  if (steps.empty()) return 0;
  const std::size_t n = returns.size();
  const std::size_t tail = std::max<std::size_t>(1, n / 4);
  double plateau = 0.0;
  for (std::size_t i = n - tail; i < n; ++i) plateau += returns[i];
  plateau /= static_cast<double>(tail);
  const double start = returns.front();
  if (plateau <= start) return steps.front();  // flat or non-improving curve
  const double target = start + 0.9 * (plateau - start);
  // Smooth with a short window so a single lucky episode does not count.
  const std::size_t w = std::min<std::size_t>(5, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = (i + 1 >= w) ? i + 1 - w : 0;
    double mean = 0.0;
    for (std::size_t j = lo; j <= i; ++j) mean += returns[j];
    mean /= static_cast<double>(i - lo + 1);
    if (mean >= target) return steps[i];
  }
  return steps.back();
}

TrainResult train_agent(const ExperimentConfig& cfg, ControllerKind kind, int seed,
                        const std::string& out_dir,
                        const std::function<void(long, double)>& progress) {
  if (kind == ControllerKind::kMpc)
    throw ConfigError("the pure MPC controller has nothing to train");
  cfg.validate();

  fs::create_directories(fs::path(out_dir) / "checkpoints");
  fs::create_directories(fs::path(out_dir) / "curves");

  const LoopConfig loop_cfg = cfg.loop_config(kind);
  const int obs_dim = observation_length(loop_cfg.obs_spec);

  std::unique_ptr<OcpSolver> solver;
  if (kind == ControllerKind::kAc2Mpc)
    solver = std::make_unique<OcpSolver>(cfg.ocp_config(), ModelKind::kBaseline);
  else if (kind == ControllerKind::kAc3Mpc)
    solver = std::make_unique<OcpSolver>(cfg.ocp_config(), ModelKind::kAugmented);

  Rng init_rng(0x5eed0000ULL + static_cast<std::uint64_t>(seed));
  GaussianActor actor({obs_dim, 64, 64, 1}, cfg.agent_bound(kind));
  actor.init(init_rng);
  Mlp critic({obs_dim, 64, 64, 1});
  critic.init(init_rng);
  PpoTrainer trainer(cfg.ppo, std::move(actor), std::move(critic),
                     0xac710000ULL + static_cast<std::uint64_t>(seed));

  const TerrainParams terrain = cfg.terrain(cfg.train_terrain);
  std::uint64_t episode_seed = 0x9a0fULL * static_cast<std::uint64_t>(seed) + 1;
  Rng reset_rng(0xbee5ULL + static_cast<std::uint64_t>(seed));
  const auto next_profile = [&]() {
    SpeedProfileSpec spec = cfg.profile_spec(ProfileKind::kRandomTrain, episode_seed++);
    return SpeedProfile::generate(spec);
  };
  SpeedProfile profile = next_profile();
  ControlLoop loop(loop_cfg, terrain, [&profile](double t) { return profile(t); },
                   solver.get(), &trainer.actor());
  const auto randomize_start = [&]() {
    PlantState p0;
    p0.state.v = reset_rng.uniform(0.0, cfg.train_v0_max);
    loop.set_plant_state(p0);
  };
  randomize_start();

  const long episode_steps = std::lround(cfg.eval_duration / cfg.sim.control_dt);
  const CheckpointMeta meta_base{controller_name(kind), static_cast<std::uint64_t>(seed), 0};

  TrainResult result;
  const auto ckpt_dir = fs::path(out_dir) / "checkpoints";
  const auto save_at = [&](long step, bool is_final) {
    CheckpointMeta meta = meta_base;
    meta.step_count = step;
    const std::string path = (ckpt_dir / checkpoint_filename(kind, seed, step, is_final)).string();
    checkpoint_save(trainer.actor(), trainer.critic(), meta, path);
    if (is_final)
      result.final_checkpoint = path;
    else
      result.checkpoint_paths.push_back(path);
  };

  std::vector<long> pending_ckpts = cfg.ppo.checkpoint_steps;
  std::sort(pending_ckpts.begin(), pending_ckpts.end());
  pending_ckpts.erase(std::unique(pending_ckpts.begin(), pending_ckpts.end()),
                      pending_ckpts.end());

  std::vector<Transition> buffer;
  buffer.reserve(cfg.ppo.n_steps);
  double episode_return = 0.0;
  long step_in_episode = 0;
  Eigen::VectorXd last_obs;

  for (long step = 0; step < cfg.ppo.total_steps; ++step) {
    const LoopStepContext ctx = loop.begin_step();
    const GaussianActor::Action act =
        trainer.actor().act(ctx.obs, ActMode::kStochastic, trainer.rng());
    const double value = trainer.value_of(ctx.obs);
    const LoopStepOutcome out = loop.finish_step(act.action);
    ++step_in_episode;
    episode_return += out.reward;

    Transition tr;
    tr.obs = ctx.obs;
    tr.action = act.action;
    tr.presquash = act.presquash;
    tr.log_prob = act.log_prob;
    tr.reward = out.reward;
    tr.value = value;
    tr.done = (step_in_episode >= episode_steps);
    buffer.push_back(std::move(tr));

    if (step_in_episode >= episode_steps) {
      result.curve_steps.push_back(step + 1);
      result.curve_returns.push_back(episode_return);
      episode_return = 0.0;
      step_in_episode = 0;
      profile = next_profile();
      loop.reset([&profile](double t) { return profile(t); });
      randomize_start();
    }

    if (static_cast<int>(buffer.size()) == cfg.ppo.n_steps) {
      // Bootstrap from the upcoming observation unless the episode just ended.
      double last_value = 0.0;
      const bool last_done = buffer.back().done;
      if (!last_done) {
        const LoopStepContext peek = loop.begin_step();
        last_value = trainer.value_of(peek.obs);
        last_obs = peek.obs;
        const UpdateStats stats = trainer.update(buffer, last_value, last_done);
        (void)stats;
        buffer.clear();
        // The peeked step must still be executed with the updated policy.
        const GaussianActor::Action act2 =
            trainer.actor().act(last_obs, ActMode::kStochastic, trainer.rng());
        const double value2 = trainer.value_of(last_obs);
        const LoopStepOutcome out2 = loop.finish_step(act2.action);
        ++step;
        ++step_in_episode;
        episode_return += out2.reward;
        Transition tr2;
        tr2.obs = last_obs;
        tr2.action = act2.action;
        tr2.presquash = act2.presquash;
        tr2.log_prob = act2.log_prob;
        tr2.reward = out2.reward;
        tr2.value = value2;
        tr2.done = (step_in_episode >= episode_steps);
        buffer.push_back(std::move(tr2));
        if (step_in_episode >= episode_steps) {
          result.curve_steps.push_back(step + 1);
          result.curve_returns.push_back(episode_return);
          episode_return = 0.0;
          step_in_episode = 0;
          profile = next_profile();
          loop.reset([&profile](double t) { return profile(t); });
          randomize_start();
        }
      } else {
        const UpdateStats stats = trainer.update(buffer, 0.0, true);
        (void)stats;
        buffer.clear();
      }
      if (progress) {
        double recent = 0.0;
        const std::size_t n = result.curve_returns.size();
        const std::size_t w = std::min<std::size_t>(10, n);
        for (std::size_t i = n - w; i < n; ++i) recent += result.curve_returns[i];
        progress(step + 1, w > 0 ? recent / w : 0.0);
      }
    }

    while (!pending_ckpts.empty() && step + 1 >= pending_ckpts.front() &&
           pending_ckpts.front() <= cfg.ppo.total_steps) {
      save_at(pending_ckpts.front(), false);
      pending_ckpts.erase(pending_ckpts.begin());
    }
    result.steps_run = step + 1;
  }

  save_at(cfg.ppo.total_steps, true);

  // Reward curve CSV.
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < result.curve_steps.size(); ++i)
    rows.push_back({std::to_string(result.curve_steps[i]), std::to_string(i),
                    format_double(result.curve_returns[i])});
  const std::string curve_path =
      (fs::path(out_dir) / "curves" /
       (std::string(controller_name(kind)) + "_s" + std::to_string(seed) + ".csv"))
          .string();
  write_table_csv("ac3mpc-curve v1", {"step", "episode", "return"}, rows, curve_path);
  result.curve_path = curve_path;
  return result;
}

}  // namespace ac3mpc
