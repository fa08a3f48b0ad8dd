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

namespace ac3mpc {

/// Minimal static line chart writer (evaluation traces and control splits).
class SvgChart {
 public:
  SvgChart(std::string title, std::string x_label, std::string y_label);

  void add_series(const std::string& name, const std::vector<double>& x,
                  const std::vector<double>& y);
  void write(const std::string& path) const;

 private:
  std::string title_, x_label_, y_label_;
  struct Series {
    std::string name;
    std::vector<double> x, y;
  };
  std::vector<Series> series_;
};

}  // namespace ac3mpc
