// Copyright 2026 The hjblearn Authors
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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hjbl/csv.hpp"

namespace hjbl {

// Minimal deterministic SVG writer with a linear data-to-pixel mapping.
class SvgCanvas {
 public:
  SvgCanvas(double width, double height, double x_min, double x_max, double y_min, double y_max);

  void polyline(const std::vector<std::pair<double, double>>& points, const std::string& stroke,
                double stroke_width = 1.5);
  void polygon(const std::vector<std::pair<double, double>>& points, const std::string& fill,
               double opacity);
  void segment(double x0, double y0, double x1, double y1, const std::string& stroke,
               double stroke_width = 1.0);
  void text(double px, double py, const std::string& content, const std::string& anchor = "middle");
  void axes(const std::string& x_label, const std::string& y_label, int ticks = 5);

  std::string str() const;

 private:
  double px(double x) const;
  double py(double y) const;

  double width_, height_;
  double x_min_, x_max_, y_min_, y_max_;
  double margin_ = 50.0;
  std::string body_;
};

struct SeedCurve {
  std::uint64_t seed = 0;
  std::vector<double> values;  // normalized cost per epoch
};

// Long format: seed,epoch,normalized_cost (epochs + 1 rows per seed).
CsvTable curves_table(std::span<const SeedCurve> curves);

// Mean curve with a min/max band across seeds; a pure function of the table.
std::string render_curves_svg(const CsvTable& table);

// Writes <stem>.csv and <stem>.svg into dir; returns the file names written.
std::vector<std::string> export_curves(std::span<const SeedCurve> curves,
                                       const std::filesystem::path& dir,
                                       const std::string& stem = "curves_summary");

}  // namespace hjbl
