// Copyright 2026 The ProxyForge Authors.
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

#include "proxyforge/analysis/plots.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "proxyforge/raster/palette.hpp"

namespace proxyforge::analysis {
namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string points_csv(const Matrix& points, const std::vector<std::string>& labels) {
  std::string out = labels.empty() ? "index,x,y\n" : "index,x,y,label\n";
  for (std::size_t i = 0; i < points.rows; ++i) {
    out += fmt::format("{},{:.17g},{:.17g}", i, points(i, 0), points(i, 1));
    if (!labels.empty()) out += "," + (i < labels.size() ? labels[i] : std::string());
    out += '\n';
  }
  return out;
}

std::string kl_trace_csv(const std::vector<double>& trace) {
  std::string out = "iteration,kl\n";
  for (std::size_t i = 0; i < trace.size(); ++i) out += fmt::format("{},{:.17g}\n", i, trace[i]);
  return out;
}

std::string matrix_csv(const Matrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) out += fmt::format("{}{:.17g}", c ? "," : "", m(r, c));
    out += '\n';
  }
  return out;
}

std::string scatter_svg(const Matrix& points, const std::vector<std::string>& labels, int size) {
  double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  if (points.rows > 0) {
    x_lo = x_hi = points(0, 0);
    y_lo = y_hi = points(0, 1);
    for (std::size_t i = 1; i < points.rows; ++i) {
      x_lo = std::min(x_lo, points(i, 0));
      x_hi = std::max(x_hi, points(i, 0));
      y_lo = std::min(y_lo, points(i, 1));
      y_hi = std::max(y_hi, points(i, 1));
    }
  }
  const double margin = 20.0;
  const double span = size - 2 * margin;
  auto sx = [&](double v) { return x_hi > x_lo ? margin + (v - x_lo) / (x_hi - x_lo) * span : size / 2.0; };
  auto sy = [&](double v) { return y_hi > y_lo ? size - margin - (v - y_lo) / (y_hi - y_lo) * span : size / 2.0; };

  std::map<std::string, int> label_index;
  for (const auto& l : labels) label_index.emplace(l, 0);
  int next = 1;
  for (auto& [name, idx] : label_index) idx = next++;

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      size);
  for (std::size_t i = 0; i < points.rows; ++i) {
    raster::Rgb c{40, 90, 200};
    if (i < labels.size()) c = raster::palette_color(label_index[labels[i]]);
    out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"#{:02x}{:02x}{:02x}\"/>\n", sx(points(i, 0)),
                       sy(points(i, 1)), c[0], c[1], c[2]);
  }
  int row = 0;
  for (const auto& [name, idx] : label_index) {
    const auto c = raster::palette_color(idx);
    out += fmt::format("<text x=\"4\" y=\"{}\" font-size=\"11\" fill=\"#{:02x}{:02x}{:02x}\">{}</text>\n",
                       14 + 13 * row++, c[0], c[1], c[2], xml_escape(name));
  }
  out += "</svg>\n";
  return out;
}

}  // namespace proxyforge::analysis
