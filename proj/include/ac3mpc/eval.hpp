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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ac3mpc/config.hpp"
#include "ac3mpc/train.hpp"

namespace ac3mpc {

struct EvalOptions {
  std::string checkpoint_dir;  // where trained agents live
  long checkpoint_step = -1;   // -1: final; otherwise the under-trained analog
  int threads = 0;             // 0: hardware choice
  bool write_svg = true;
  bool write_records = true;
};

struct EvalRow {
  std::string scenario;  // e.g. "T1_C", "T2_V"
  std::string terrain;
  std::string profile;  // "C" or "V"
  std::string controller;
  int seed = 0;
  long checkpoint_step = -1;
  Metrics metrics;
  std::string status;  // "ok" or "skipped: <reason>"
  std::string record_path;
};

struct EvalResult {
  std::vector<EvalRow> rows;
  std::string summary_path;
  std::string table1_path;
};

/// Run the full (terrain x profile x controller x seed) grid, writing per-cell
/// rollout CSVs, a Table-I-shaped summary, and SVG trace/split plots. Cells
/// with missing checkpoints are reported as skipped, never silently dropped.
EvalResult run_eval_grid(const ExperimentConfig& cfg, const EvalOptions& opts,
                         const std::string& out_dir);

/// Mean metric per (scenario, controller) over seeds, from summary rows.
std::map<std::pair<std::string, std::string>, Metrics> aggregate_rows(
    const std::vector<EvalRow>& rows);

/// Load the rows back from a summary CSV.
std::vector<EvalRow> read_summary_csv(const std::string& path);

struct CompareReport {
  std::vector<std::string> scenarios;
  std::vector<std::string> controllers;
  // mean rms / jerk per (scenario, controller)
  std::map<std::pair<std::string, std::string>, double> rms, jerk;
  // pairwise mean improvement of row controller over column controller, %
  std::map<std::pair<std::string, std::string>, double> mean_rms_improvement_pct;
  std::vector<std::string> ordering_verdicts;
  std::vector<std::string> diffs;  // scenario-set mismatches between inputs
  std::string rendered;            // printable report
};

/// Merge >= 2 summaries and compute pairwise improvements plus the ordinal
/// verdicts (which controller orderings hold on these runs).
CompareReport compare_summaries(const std::vector<std::string>& summary_paths);

}  // namespace ac3mpc
