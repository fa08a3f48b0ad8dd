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

#include "ac3mpc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ac3mpc/errors.hpp"

namespace ac3mpc {

namespace {
constexpr int kW = 900, kH = 420;
constexpr int kMarginL = 70, kMarginR = 150, kMarginT = 40, kMarginB = 50;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
}  // namespace

SvgChart::SvgChart(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgChart::add_series(const std::string& name, const std::vector<double>& x,
                          const std::vector<double>& y) {
  if (x.size() != y.size()) throw ShapeMismatchError("svg series: x/y length mismatch");
  series_.push_back({name, x, y});
}

void SvgChart::write(const std::string& path) const {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const auto& s : series_) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (first) {
        xmin = xmax = s.x[i];
        ymin = ymax = s.y[i];
        first = false;
      }
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const auto px = [&](double x) {
    return kMarginL + (x - xmin) / (xmax - xmin) * (kW - kMarginL - kMarginR);
  };
  const auto py = [&](double y) {
    return kH - kMarginB - (y - ymin) / (ymax - ymin) * (kH - kMarginT - kMarginB);
  };

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write svg: " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << kW / 2 << "' y='22' text-anchor='middle' font-size='16'>" << title_
      << "</text>\n";

  // axes and ticks
  out << "<line x1='" << kMarginL << "' y1='" << kH - kMarginB << "' x2='" << kW - kMarginR
      << "' y2='" << kH - kMarginB << "' stroke='black'/>\n";
  out << "<line x1='" << kMarginL << "' y1='" << kMarginT << "' x2='" << kMarginL << "' y2='"
      << kH - kMarginB << "' stroke='black'/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + i * (xmax - xmin) / 5.0;
    const double yv = ymin + i * (ymax - ymin) / 5.0;
    out << "<text x='" << px(xv) << "' y='" << kH - kMarginB + 18
        << "' text-anchor='middle' font-size='11'>" << static_cast<float>(xv) << "</text>\n";
    out << "<text x='" << kMarginL - 8 << "' y='" << py(yv) + 4
        << "' text-anchor='end' font-size='11'>" << static_cast<float>(yv) << "</text>\n";
    out << "<line x1='" << kMarginL << "' y1='" << py(yv) << "' x2='" << kW - kMarginR << "' y2='"
        << py(yv) << "' stroke='#dddddd'/>\n";
  }
  out << "<text x='" << (kMarginL + kW - kMarginR) / 2 << "' y='" << kH - 12
      << "' text-anchor='middle' font-size='13'>" << x_label_ << "</text>\n";
  out << "<text x='18' y='" << (kMarginT + kH - kMarginB) / 2
      << "' text-anchor='middle' font-size='13' transform='rotate(-90 18 "
      << (kMarginT + kH - kMarginB) / 2 << ")'>" << y_label_ << "</text>\n";

  for (std::size_t k = 0; k < series_.size(); ++k) {
    const auto& s = series_[k];
    const char* color = kColors[k % 6];
    out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << static_cast<float>(px(s.x[i])) << ',' << static_cast<float>(py(s.y[i])) << ' ';
    out << "'/>\n";
    const int ly = kMarginT + 18 * static_cast<int>(k);
    out << "<line x1='" << kW - kMarginR + 10 << "' y1='" << ly << "' x2='" << kW - kMarginR + 34
        << "' y2='" << ly << "' stroke='" << color << "' stroke-width='2'/>\n";
    out << "<text x='" << kW - kMarginR + 40 << "' y='" << ly + 4 << "' font-size='12'>" << s.name
        << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw IoError("failed writing svg: " + path);
}

}  // namespace ac3mpc
