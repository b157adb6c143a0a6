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

#include "hjbl/plots.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>

#include "hjbl/common.hpp"

namespace hjbl {
namespace {

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

SvgCanvas::SvgCanvas(double width, double height, double x_min, double x_max, double y_min,
                     double y_max)
    : width_(width), height_(height), x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max) {
  if (!(x_max_ > x_min_)) x_max_ = x_min_ + 1.0;
  if (!(y_max_ > y_min_)) y_max_ = y_min_ + 1.0;
}

double SvgCanvas::px(double x) const {
  return margin_ + (x - x_min_) / (x_max_ - x_min_) * (width_ - 2 * margin_);
}

double SvgCanvas::py(double y) const {
  return height_ - margin_ - (y - y_min_) / (y_max_ - y_min_) * (height_ - 2 * margin_);
}

void SvgCanvas::polyline(const std::vector<std::pair<double, double>>& points,
                         const std::string& stroke, double stroke_width) {
  body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
           fixed(stroke_width) + "\" points=\"";
  for (const auto& [x, y] : points) body_ += fixed(px(x)) + "," + fixed(py(y)) + " ";
  body_ += "\"/>\n";
}

void SvgCanvas::polygon(const std::vector<std::pair<double, double>>& points,
                        const std::string& fill, double opacity) {
  body_ += "<polygon fill=\"" + fill + "\" fill-opacity=\"" + fixed(opacity) +
           "\" stroke=\"none\" points=\"";
  for (const auto& [x, y] : points) body_ += fixed(px(x)) + "," + fixed(py(y)) + " ";
  body_ += "\"/>\n";
}

void SvgCanvas::segment(double x0, double y0, double x1, double y1, const std::string& stroke,
                        double stroke_width) {
  body_ += "<line x1=\"" + fixed(px(x0)) + "\" y1=\"" + fixed(py(y0)) + "\" x2=\"" +
           fixed(px(x1)) + "\" y2=\"" + fixed(py(y1)) + "\" stroke=\"" + stroke +
           "\" stroke-width=\"" + fixed(stroke_width) + "\"/>\n";
}

void SvgCanvas::text(double x, double y, const std::string& content, const std::string& anchor) {
  body_ += "<text x=\"" + fixed(x) + "\" y=\"" + fixed(y) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"" + anchor + "\">" +
           content + "</text>\n";
}

void SvgCanvas::axes(const std::string& x_label, const std::string& y_label, int ticks) {
  const double left = margin_, right = width_ - margin_;
  const double top = margin_, bottom = height_ - margin_;
  body_ += "<rect x=\"" + fixed(left) + "\" y=\"" + fixed(top) + "\" width=\"" +
           fixed(right - left) + "\" height=\"" + fixed(bottom - top) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= ticks; ++i) {
    const double fx = x_min_ + (x_max_ - x_min_) * i / ticks;
    const double fy = y_min_ + (y_max_ - y_min_) * i / ticks;
    text(px(fx), bottom + 16, fixed(fx, 2));
    text(left - 6, py(fy) + 4, fixed(fy, 2), "end");
  }
  text((left + right) / 2, height_ - 10, x_label);
  body_ += "<text x=\"14\" y=\"" + fixed((top + bottom) / 2) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 14 " + fixed((top + bottom) / 2) + ")\">" + y_label +
           "</text>\n";
}

std::string SvgCanvas::str() const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width_, 0) +
         "\" height=\"" + fixed(height_, 0) + "\" viewBox=\"0 0 " + fixed(width_, 0) + " " +
         fixed(height_, 0) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
         body_ + "</svg>\n";
}

CsvTable curves_table(std::span<const SeedCurve> curves) {
  require(!curves.empty(), "export_curves: no results");
  CsvTable table{{"seed", "epoch", "normalized_cost"}, {}};
  for (const SeedCurve& c : curves) {
    require(!c.values.empty(), "export_curves: empty curve");
    for (std::size_t e = 0; e < c.values.size(); ++e) {
      table.rows.push_back({std::to_string(c.seed), std::to_string(e), format_number(c.values[e])});
    }
  }
  return table;
}

std::string render_curves_svg(const CsvTable& table) {
  const int epoch_col = table.column("epoch");
  const int value_col = table.column("normalized_cost");
  require(!table.rows.empty(), "render_curves_svg: no rows");

  struct Stats {
    double sum = 0, lo = std::numeric_limits<double>::infinity(),
           hi = -std::numeric_limits<double>::infinity();
    int count = 0;
  };
  std::map<int, Stats> per_epoch;
  for (const auto& row : table.rows) {
    const int epoch = std::stoi(row[std::size_t(epoch_col)]);
    const double v = std::stod(row[std::size_t(value_col)]);
    Stats& s = per_epoch[epoch];
    s.sum += v;
    s.lo = std::min(s.lo, v);
    s.hi = std::max(s.hi, v);
    ++s.count;
  }
  double y_hi = 0.0;
  for (const auto& [e, s] : per_epoch) y_hi = std::max(y_hi, s.hi);
  const int last_epoch = per_epoch.rbegin()->first;

  SvgCanvas canvas(640, 400, 0.0, std::max(1, last_epoch), 0.0, std::max(1.0, y_hi * 1.05));
  std::vector<std::pair<double, double>> band, mean;
  for (const auto& [e, s] : per_epoch) band.emplace_back(e, s.hi);
  for (auto it = per_epoch.rbegin(); it != per_epoch.rend(); ++it) band.emplace_back(it->first, it->second.lo);
  for (const auto& [e, s] : per_epoch) mean.emplace_back(e, s.sum / s.count);
  canvas.polygon(band, "#1f77b4", 0.25);
  canvas.polyline(mean, "#1f77b4", 2.0);
  canvas.axes("epoch", "normalised cost");
  return canvas.str();
}

std::vector<std::string> export_curves(std::span<const SeedCurve> curves,
                                       const std::filesystem::path& dir, const std::string& stem) {
  const CsvTable table = curves_table(curves);
  const std::string csv = to_csv(table);
  write_text_file(dir / (stem + ".csv"), csv);
  write_text_file(dir / (stem + ".svg"), render_curves_svg(parse_csv(csv)));
  return {stem + ".csv", stem + ".svg"};
}

}  // namespace hjbl
