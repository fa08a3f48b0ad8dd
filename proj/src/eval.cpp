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

#include "ac3mpc/eval.hpp"

#include <atomic>
#include <filesystem>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "ac3mpc/csv.hpp"
#include "ac3mpc/svg.hpp"

namespace ac3mpc {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSummarySchema = "ac3mpc-summary v1";
constexpr const char* kTable1Schema = "ac3mpc-table1 v1";

int terrain_index(const std::string& name) {
  if (name.size() >= 2 && name[0] == 'T' && std::isdigit(static_cast<unsigned char>(name[1])))
    return name[1] - '0';
  return 9;
}

struct Cell {
  std::string terrain;
  ProfileKind profile;
  ControllerKind controller;
  int seed;
};

std::string scenario_label(const std::string& terrain, ProfileKind kind) {
  return terrain + (kind == ProfileKind::kConstant ? "_C" : "_V");
}

}  // namespace

EvalResult run_eval_grid(const ExperimentConfig& cfg, const EvalOptions& opts,
                         const std::string& out_dir) {
  cfg.validate();
  fs::create_directories(fs::path(out_dir) / "records");
  if (opts.write_svg) fs::create_directories(fs::path(out_dir) / "plots");

  std::vector<Cell> cells;
  for (const auto& terrain : cfg.terrains)
    for (ProfileKind prof : {ProfileKind::kConstant, ProfileKind::kVarying})
      for (const auto& ctrl : cfg.controllers)
        for (int seed : cfg.seeds)
          cells.push_back({terrain, prof, controller_from_name(ctrl), seed});

  std::vector<EvalRow> rows(cells.size());
  std::atomic<std::size_t> next{0};

  const auto run_cell = [&](std::size_t idx) {
    const Cell& cell = cells[idx];
    EvalRow row;
    row.scenario = scenario_label(cell.terrain, cell.profile);
    row.terrain = cell.terrain;
    row.profile = cell.profile == ProfileKind::kConstant ? "C" : "V";
    row.controller = controller_name(cell.controller);
    row.seed = cell.seed;
    row.checkpoint_step = opts.checkpoint_step;

    const LoopConfig loop_cfg = cfg.loop_config(cell.controller);

    GaussianActor actor({observation_length(loop_cfg.obs_spec), 64, 64, 1},
                        cfg.agent_bound(cell.controller));
    Mlp critic({observation_length(loop_cfg.obs_spec), 64, 64, 1});
    if (cell.controller != ControllerKind::kMpc) {
      const std::string fname = checkpoint_filename(cell.controller, cell.seed,
                                                    opts.checkpoint_step,
                                                    opts.checkpoint_step < 0);
      const fs::path path = fs::path(opts.checkpoint_dir) / fname;
      if (!fs::exists(path)) {
        row.status = "skipped: missing checkpoint " + path.string();
        rows[idx] = row;
        return;
      }
      try {
        checkpoint_load(path.string(), actor, critic);
      } catch (const Error& e) {
        row.status = std::string("skipped: ") + e.what();
        rows[idx] = row;
        return;
      }
    }

    std::unique_ptr<OcpSolver> solver;
    if (cell.controller == ControllerKind::kAc3Mpc)
      solver = std::make_unique<OcpSolver>(cfg.ocp_config(), ModelKind::kAugmented);
    else if (cell.controller != ControllerKind::kAc)
      solver = std::make_unique<OcpSolver>(cfg.ocp_config(), ModelKind::kBaseline);

    SpeedProfileSpec pspec =
        cell.profile == ProfileKind::kConstant
            ? cfg.profile_spec(ProfileKind::kConstant, 0)
            : golden_varying_spec(terrain_index(cell.terrain), cell.seed, cfg.eval_duration);
    pspec.v_cap = cfg.v_cap;
    const SpeedProfile profile = SpeedProfile::generate(pspec);

    ControlLoop loop(loop_cfg, cfg.terrain(cell.terrain),
                     [&profile](double t) { return profile(t); }, solver.get(), &actor);
    const RolloutRecord record = loop.run(cfg.eval_duration, ActMode::kDeterministic);
    row.metrics = compute_metrics(record, cfg.sim.control_dt, cfg.accel_scale);
    row.status = "ok";

    if (opts.write_records) {
      const std::string rec_name =
          row.scenario + "_" + row.controller + "_s" + std::to_string(cell.seed) + ".csv";
      row.record_path = (fs::path(out_dir) / "records" / rec_name).string();
      write_rollout_csv(record, row.record_path);
    }

    if (opts.write_svg && cell.seed == cfg.seeds.front()) {
      SvgChart trace(row.scenario + " " + row.controller + " speed tracking", "t [s]", "v [m/s]");
      trace.add_series("reference", record.t, record.v_ref);
      trace.add_series("achieved", record.t, record.v);
      trace.write((fs::path(out_dir) / "plots" /
                   ("trace_" + row.scenario + "_" + row.controller + ".svg"))
                      .string());
      SvgChart control(row.scenario + " " + row.controller + " control split", "t [s]",
                       "normalized input");
      control.add_series("u_applied", record.t, record.u_applied_a);
      if (cell.controller == ControllerKind::kAc2Mpc || cell.controller == ControllerKind::kAc3Mpc) {
        control.add_series("u_mpc", record.t, record.u_mpc_a);
        control.add_series("u_rl", record.t, record.u_rl);
      }
      control.write((fs::path(out_dir) / "plots" /
                     ("split_" + row.scenario + "_" + row.controller + ".svg"))
                        .string());
    }
    rows[idx] = row;
  };

  int threads = opts.threads > 0 ? opts.threads
                                 : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(cells.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1))
          run_cell(i);
      });
    for (auto& th : pool) th.join();
  }

  // Summary CSV (one row per cell, fixed order).
  std::vector<std::vector<std::string>> srows;
  for (const EvalRow& r : rows) {
    srows.push_back({r.scenario, r.terrain, r.profile, r.controller, std::to_string(r.seed),
                     std::to_string(r.checkpoint_step), format_double(r.metrics.rms_err),
                     format_double(r.metrics.avg_jerk), format_double(r.metrics.avg_cmd_jerk),
                     format_double(r.metrics.mean_abs_u),
                     std::to_string(r.metrics.solver_failures), r.status, r.record_path});
  }
  EvalResult result;
  result.rows = rows;
  result.summary_path = (fs::path(out_dir) / "summary.csv").string();
  write_table_csv(kSummarySchema,
                  {"scenario", "terrain", "profile", "controller", "seed", "checkpoint_step",
                   "rms_err", "avg_jerk", "avg_cmd_jerk", "mean_abs_u", "solver_failures",
                   "status", "record"},
                  srows, result.summary_path);

  // Table-I-shaped aggregate (means over seeds).
  const auto agg = aggregate_rows(rows);
  std::vector<std::vector<std::string>> trows;
  for (const auto& [key, m] : agg)
    trows.push_back({key.first, key.second, format_double(m.rms_err), format_double(m.avg_jerk)});
  result.table1_path = (fs::path(out_dir) / "table1.csv").string();
  write_table_csv(kTable1Schema, {"scenario", "controller", "rms_err", "avg_jerk"}, trows,
                  result.table1_path);
  return result;
}

std::map<std::pair<std::string, std::string>, Metrics> aggregate_rows(
    const std::vector<EvalRow>& rows) {
  std::map<std::pair<std::string, std::string>, std::pair<Metrics, int>> acc;
  for (const EvalRow& r : rows) {
    if (r.status != "ok") continue;
    auto& [m, n] = acc[{r.scenario, r.controller}];
    m.rms_err += r.metrics.rms_err;
    m.avg_jerk += r.metrics.avg_jerk;
    m.avg_cmd_jerk += r.metrics.avg_cmd_jerk;
    m.mean_abs_u += r.metrics.mean_abs_u;
    m.solver_failures += r.metrics.solver_failures;
    ++n;
  }
  std::map<std::pair<std::string, std::string>, Metrics> out;
  for (auto& [key, mn] : acc) {
    Metrics m = mn.first;
    const int n = mn.second;
    m.rms_err /= n;
    m.avg_jerk /= n;
    m.avg_cmd_jerk /= n;
    m.mean_abs_u /= n;
    out[key] = m;
  }
  return out;
}

std::vector<EvalRow> read_summary_csv(const std::string& path) {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> raw;
  read_table_csv(path, kSummarySchema, header, raw);
  std::vector<EvalRow> rows;
  for (const auto& c : raw) {
    if (c.size() < 12) throw IoError("summary row arity in " + path);
    EvalRow r;
    r.scenario = c[0];
    r.terrain = c[1];
    r.profile = c[2];
    r.controller = c[3];
    r.seed = std::stoi(c[4]);
    r.checkpoint_step = std::stol(c[5]);
    r.metrics.rms_err = std::stod(c[6]);
    r.metrics.avg_jerk = std::stod(c[7]);
    r.metrics.avg_cmd_jerk = std::stod(c[8]);
    r.metrics.mean_abs_u = std::stod(c[9]);
    r.metrics.solver_failures = std::stoi(c[10]);
    r.status = c[11];
    if (c.size() > 12) r.record_path = c[12];
    rows.push_back(std::move(r));
  }
  return rows;
}

CompareReport compare_summaries(const std::vector<std::string>& summary_paths) {
  if (summary_paths.size() < 2) throw ConfigError("compare needs at least two summaries");
  CompareReport rep;

  std::vector<EvalRow> all;
  std::vector<std::set<std::string>> per_input_scenarios;
  for (const auto& path : summary_paths) {
    const auto rows = read_summary_csv(path);
    std::set<std::string> sc;
    for (const auto& r : rows)
      if (r.status == "ok") sc.insert(r.scenario);
    per_input_scenarios.push_back(std::move(sc));
    all.insert(all.end(), rows.begin(), rows.end());
  }
  for (std::size_t i = 1; i < per_input_scenarios.size(); ++i) {
    if (per_input_scenarios[i] != per_input_scenarios[0]) {
      std::ostringstream d;
      d << "scenario sets differ between " << summary_paths[0] << " and " << summary_paths[i]
        << ":";
      for (const auto& s : per_input_scenarios[0])
        if (!per_input_scenarios[i].count(s)) d << " -" << s;
      for (const auto& s : per_input_scenarios[i])
        if (!per_input_scenarios[0].count(s)) d << " +" << s;
      rep.diffs.push_back(d.str());
    }
  }

  const auto agg = aggregate_rows(all);
  std::set<std::string> scenarios, controllers;
  for (const auto& [key, m] : agg) {
    scenarios.insert(key.first);
    controllers.insert(key.second);
    rep.rms[key] = m.rms_err;
    rep.jerk[key] = m.avg_jerk;
  }
  rep.scenarios.assign(scenarios.begin(), scenarios.end());
  rep.controllers.assign(controllers.begin(), controllers.end());

  std::ostringstream out;
  out << "scenario";
  for (const auto& c : rep.controllers) out << "," << c << "_rms," << c << "_jerk";
  out << "\n";
  for (const auto& s : rep.scenarios) {
    out << s;
    for (const auto& c : rep.controllers) {
      const auto it = rep.rms.find({s, c});
      if (it == rep.rms.end())
        out << ",-,-";
      else
        out << "," << format_double(it->second) << "," << format_double(rep.jerk[{s, c}]);
    }
    out << "\n";
  }

  // Pairwise mean improvements over scenarios both controllers cover.
  for (const auto& a : rep.controllers) {
    for (const auto& b : rep.controllers) {
      if (a == b) continue;
      double acc = 0.0;
      int n = 0;
      for (const auto& s : rep.scenarios) {
        const auto ia = rep.rms.find({s, a});
        const auto ib = rep.rms.find({s, b});
        if (ia == rep.rms.end() || ib == rep.rms.end() || ib->second <= 0.0) continue;
        acc += (ib->second - ia->second) / ib->second * 100.0;
        ++n;
      }
      if (n > 0) rep.mean_rms_improvement_pct[{a, b}] = acc / n;
    }
  }
  out << "\nmean rms improvement of A over B [%]:\n";
  for (const auto& [key, pct] : rep.mean_rms_improvement_pct)
    out << "  " << key.first << " over " << key.second << ": " << format_double(pct) << "\n";

  // Ordinal verdicts over controller means.
  std::map<std::string, double> mean_rms;
  std::map<std::string, int> counts;
  for (const auto& [key, v] : rep.rms) {
    mean_rms[key.second] += v;
    counts[key.second] += 1;
  }
  for (auto& [c, v] : mean_rms) v /= counts[c];
  const auto have = [&](const char* c) { return mean_rms.count(c) > 0; };
  const auto verdict = [&](const std::string& text, bool ok) {
    rep.ordering_verdicts.push_back(text + (ok ? ": holds" : ": does not hold"));
  };
  if (have("AC3MPC") && have("MPC"))
    verdict("mean rms AC3MPC < MPC", mean_rms["AC3MPC"] < mean_rms["MPC"]);
  if (have("AC3MPC") && have("AC2MPC"))
    verdict("mean rms AC3MPC < AC2MPC", mean_rms["AC3MPC"] < mean_rms["AC2MPC"]);
  if (have("AC3MPC") && have("AC"))
    verdict("mean rms AC3MPC < AC", mean_rms["AC3MPC"] < mean_rms["AC"]);
  if (have("AC2MPC") && have("AC"))
    verdict("mean rms AC2MPC < AC", mean_rms["AC2MPC"] < mean_rms["AC"]);
  out << "\nordering verdicts:\n";
  for (const auto& v : rep.ordering_verdicts) out << "  " << v << "\n";
  if (!rep.diffs.empty()) {
    out << "\nscenario-set differences:\n";
    for (const auto& d : rep.diffs) out << "  " << d << "\n";
  }
  rep.rendered = out.str();
  return rep;
}

}  // namespace ac3mpc
