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

#include <string>
#include <vector>

#include "ac3mpc/control_loop.hpp"

namespace ac3mpc {

// Each emitted CSV starts with a schema-version comment row, e.g.
// "# ac3mpc-rollout v1". Doubles are rendered with %.9g for byte-stable
// reruns.

void write_rollout_csv(const RolloutRecord& record, const std::string& path);
RolloutRecord read_rollout_csv(const std::string& path);

/// Write a reference profile (t, v_ref) sampled at the control rate.
void write_profile_csv(const std::vector<double>& t, const std::vector<double>& v,
                       const std::string& path);

/// Generic table writer used by summaries and curves; `rows` are
/// pre-rendered cells.
void write_table_csv(const std::string& schema, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows, const std::string& path);

/// Parse a table CSV written by write_table_csv; returns header and rows,
/// checking the schema tag. Throws IoError on missing file or wrong schema.
void read_table_csv(const std::string& path, const std::string& expected_schema,
                    std::vector<std::string>& header, std::vector<std::vector<std::string>>& rows);

std::string format_double(double x);

}  // namespace ac3mpc
