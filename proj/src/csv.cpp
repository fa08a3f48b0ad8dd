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

#include "ac3mpc/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ac3mpc {

namespace {

constexpr const char* kRolloutSchema = "# ac3mpc-rollout v1";
constexpr const char* kProfileSchema = "# ac3mpc-profile v1";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

void write_rollout_csv(const RolloutRecord& r, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write rollout csv: " + path);
  out << kRolloutSchema << "\n";
  out << "t,v_ref,v,v_err,u_mpc_a,u_rl,u_applied_a,omega,reward,solver_status,iterations,kkt,"
         "slack,p_c\n";
  for (std::size_t i = 0; i < r.size(); ++i) {
    out << format_double(r.t[i]) << ',' << format_double(r.v_ref[i]) << ','
        << format_double(r.v[i]) << ',' << format_double(r.v_err[i]) << ','
        << format_double(r.u_mpc_a[i]) << ',' << format_double(r.u_rl[i]) << ','
        << format_double(r.u_applied_a[i]) << ',' << format_double(r.omega[i]) << ','
        << format_double(r.reward[i]) << ',' << r.solver_status[i] << ',' << r.iterations[i] << ','
        << format_double(r.kkt[i]) << ',' << format_double(r.slack[i]) << ',' << r.p_c[i] << "\n";
  }
  if (!out) throw IoError("failed writing rollout csv: " + path);
}

RolloutRecord read_rollout_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open rollout csv: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kRolloutSchema)
    throw IoError("rollout csv has a wrong schema tag: " + path);
  std::getline(in, line);  // header
  RolloutRecord r;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split_csv_line(line);
    if (c.size() != 14) throw IoError("rollout csv row has wrong arity: " + path);
    r.t.push_back(std::stod(c[0]));
    r.v_ref.push_back(std::stod(c[1]));
    r.v.push_back(std::stod(c[2]));
    r.v_err.push_back(std::stod(c[3]));
    r.u_mpc_a.push_back(std::stod(c[4]));
    r.u_rl.push_back(std::stod(c[5]));
    r.u_applied_a.push_back(std::stod(c[6]));
    r.omega.push_back(std::stod(c[7]));
    r.reward.push_back(std::stod(c[8]));
    r.solver_status.push_back(std::stoi(c[9]));
    r.iterations.push_back(std::stoi(c[10]));
    r.kkt.push_back(std::stod(c[11]));
    r.slack.push_back(std::stod(c[12]));
    r.p_c.push_back(std::stoi(c[13]));
  }
  return r;
}

void write_profile_csv(const std::vector<double>& t, const std::vector<double>& v,
                       const std::string& path) {
  if (t.size() != v.size()) throw ShapeMismatchError("profile csv: t/v length mismatch");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write profile csv: " + path);
  out << kProfileSchema << "\n";
  out << "t,v_ref\n";
  for (std::size_t i = 0; i < t.size(); ++i)
    out << format_double(t[i]) << ',' << format_double(v[i]) << "\n";
  if (!out) throw IoError("failed writing profile csv: " + path);
}

void write_table_csv(const std::string& schema, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write table csv: " + path);
  out << "# " << schema << "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "");
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << row[i] << (i + 1 < row.size() ? "," : "");
    out << "\n";
  }
  if (!out) throw IoError("failed writing table csv: " + path);
}

void read_table_csv(const std::string& path, const std::string& expected_schema,
                    std::vector<std::string>& header, std::vector<std::vector<std::string>>& rows) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open table csv: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "# " + expected_schema)
    throw IoError("table csv " + path + " does not carry schema '" + expected_schema + "'");
  if (!std::getline(in, line)) throw IoError("table csv missing header: " + path);
  header = split_csv_line(line);
  rows.clear();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(split_csv_line(line));
  }
}

}  // namespace ac3mpc
