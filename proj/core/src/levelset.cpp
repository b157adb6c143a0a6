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

#include "hjbl/levelset.hpp"

#include <random>

#include "hjbl/csv.hpp"
#include "hjbl/plots.hpp"
#include "hjbl/rollout.hpp"

namespace hjbl {
namespace {

std::array<int, 2> resolve_slice(const ControlAffineSystem& env, const LevelsetSpec& spec) {
  const int n = env.state_dim();
  if (!spec.slice) {
    require(n == 2, "levelset: state dimension " + std::to_string(n) +
                        " needs a two-coordinate slice");
    return {0, 1};
  }
  const auto s = *spec.slice;
  require(s[0] >= 0 && s[0] < n && s[1] >= 0 && s[1] < n && s[0] != s[1],
          "levelset: slice indices must be two distinct state coordinates");
  return s;
}

const char* kPalette[] = {"#440154", "#482878", "#3e4989", "#31688e", "#26828e",
                          "#1f9e89", "#35b779", "#6ece58", "#b5de2b", "#fde725"};

}  // namespace

std::vector<ContourSegment> marching_squares(const LevelsetGrid& grid, double level) {
  const Eigen::Index nx = grid.xs.size(), ny = grid.ys.size();
  require(nx >= 3 && ny >= 3, "marching_squares: grid must be at least 3 x 3");
  std::vector<ContourSegment> out;
  for (Eigen::Index i = 0; i + 1 < nx; ++i) {
    for (Eigen::Index j = 0; j + 1 < ny; ++j) {
      const Eigen::Vector2d p[4] = {{grid.xs(i), grid.ys(j)},
                                    {grid.xs(i + 1), grid.ys(j)},
                                    {grid.xs(i + 1), grid.ys(j + 1)},
                                    {grid.xs(i), grid.ys(j + 1)}};
      const double v[4] = {grid.values(i, j), grid.values(i + 1, j), grid.values(i + 1, j + 1),
                           grid.values(i, j + 1)};
      bool above[4];
      for (int c = 0; c < 4; ++c) above[c] = v[c] > level;

      // Edge e joins corner e and corner (e + 1) % 4.
      std::vector<int> edges;
      Eigen::Vector2d cross[4];
      for (int e = 0; e < 4; ++e) {
        const int a = e, b = (e + 1) % 4;
        if (above[a] == above[b]) continue;
        const double s = (level - v[a]) / (v[b] - v[a]);
        cross[e] = p[a] + s * (p[b] - p[a]);
        edges.push_back(e);
      }
      if (edges.size() == 2) {
        out.push_back({level, cross[edges[0]], cross[edges[1]]});
      } else if (edges.size() == 4) {
        const bool center_above = (v[0] + v[1] + v[2] + v[3]) / 4.0 > level;
        // Pair edges around the corners whose side differs from the centre.
        const bool isolate_even = above[0] != center_above;
        if (isolate_even) {
          out.push_back({level, cross[3], cross[0]});  // around corner 0
          out.push_back({level, cross[1], cross[2]});  // around corner 2
        } else {
          out.push_back({level, cross[0], cross[1]});  // around corner 1
          out.push_back({level, cross[2], cross[3]});  // around corner 3
        }
      }
    }
  }
  return out;
}

LevelsetResult compute_levelset(const ValueFunction& v, const ControlAffineSystem& env,
                                const LevelsetSpec& spec) {
  require(spec.resolution >= 3, "levelset: resolution must be at least 3");
  require(spec.x_max > spec.x_min && spec.y_max > spec.y_min, "levelset: empty bounds");
  require(v.state_dim() == env.state_dim(), "levelset: value function does not match environment");
  const auto slice = resolve_slice(env, spec);
  const int n = env.state_dim();
  const Vec base = spec.base.size() == 0 ? Vec::Zero(n) : spec.base;
  require(base.size() == n, "levelset: base point has wrong dimension");

  const EncodedValue physical(v, env.encoding());
  LevelsetResult result;
  result.grid.xs = Vec::LinSpaced(spec.resolution, spec.x_min, spec.x_max);
  result.grid.ys = Vec::LinSpaced(spec.resolution, spec.y_min, spec.y_max);
  result.grid.values.resize(spec.resolution, spec.resolution);
  for (int i = 0; i < spec.resolution; ++i) {
    for (int j = 0; j < spec.resolution; ++j) {
      Vec x = base;
      x(slice[0]) = result.grid.xs(i);
      x(slice[1]) = result.grid.ys(j);
      result.grid.values(i, j) = physical.value(x, spec.time);
    }
  }

  if (!spec.explicit_levels.empty()) {
    result.levels = spec.explicit_levels;
  } else {
    require(spec.levels >= 1, "levelset: need at least one level");
    const double lo = result.grid.values.minCoeff(), hi = result.grid.values.maxCoeff();
    for (int k = 0; k < spec.levels; ++k) {
      result.levels.push_back(lo + (hi - lo) * (k + 1) / (spec.levels + 1));
    }
  }
  for (double level : result.levels) {
    auto segs = marching_squares(result.grid, level);
    result.segments.insert(result.segments.end(), segs.begin(), segs.end());
  }

  if (spec.trajectories > 0) {
    std::mt19937_64 rng(spec.seed);
    const TimeGrid grid = TimeGrid::make(spec.horizon, spec.dt);
    std::uniform_real_distribution<double> ux(spec.x_min, spec.x_max), uy(spec.y_min, spec.y_max);
    for (int k = 0; k < spec.trajectories; ++k) {
      Vec x0 = base;
      x0(slice[0]) = ux(rng);
      x0(slice[1]) = uy(rng);
      const Trajectory traj = rollout(v, env, x0, grid);
      std::vector<Eigen::Vector2d> path;
      for (const Vec& x : traj.states) path.emplace_back(x(slice[0]), x(slice[1]));
      result.trajectories.push_back(std::move(path));
    }
  }
  return result;
}

std::vector<std::string> export_levelset(const ValueFunction& v, const ControlAffineSystem& env,
                                         const LevelsetSpec& spec,
                                         const std::filesystem::path& dir) {
  const LevelsetResult r = compute_levelset(v, env, spec);
  CsvTable table{{"x", "y", "value"}, {}};
  for (Eigen::Index i = 0; i < r.grid.xs.size(); ++i) {
    for (Eigen::Index j = 0; j < r.grid.ys.size(); ++j) {
      table.rows.push_back({format_number(r.grid.xs(i)), format_number(r.grid.ys(j)),
                            format_number(r.grid.values(i, j))});
    }
  }
  write_text_file(dir / "levelset.csv", to_csv(table));

  SvgCanvas canvas(600, 600, spec.x_min, spec.x_max, spec.y_min, spec.y_max);
  for (const ContourSegment& s : r.segments) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < r.levels.size(); ++k) {
      if (r.levels[k] == s.level) idx = k;
    }
    const std::size_t colour = r.levels.size() <= 1 ? 0 : idx * 9 / (r.levels.size() - 1);
    canvas.segment(s.a.x(), s.a.y(), s.b.x(), s.b.y(), kPalette[colour]);
  }
  for (const auto& path : r.trajectories) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : path) pts.emplace_back(p.x(), p.y());
    canvas.polyline(pts, "#d62728", 1.2);
  }
  canvas.axes("x" + std::to_string(spec.slice ? (*spec.slice)[0] : 0),
              "x" + std::to_string(spec.slice ? (*spec.slice)[1] : 1));
  write_text_file(dir / "levelset.svg", canvas.str());
  return {"levelset.csv", "levelset.svg"};
}

}  // namespace hjbl
