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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hjbl/envs.hpp"
#include "hjbl/value_function.hpp"

namespace hjbl {

struct LevelsetSpec {
  double time = 0.0;
  double x_min = -1.0, x_max = 1.0;
  double y_min = -1.0, y_max = 1.0;
  int resolution = 101;                     // grid points per axis, >= 3
  int levels = 10;                          // evenly spaced inside (min, max)
  std::vector<double> explicit_levels;      // overrides `levels` when non-empty
  std::optional<std::array<int, 2>> slice;  // required when n > 2
  Vec base;                                 // other coordinates; zeros if empty
  int trajectories = 0;                     // closed-loop overlays
  double horizon = 7.0;
  double dt = 0.01;
  std::uint64_t seed = 0;
};

struct LevelsetGrid {
  Vec xs;
  Vec ys;
  Mat values;  // values(i, j) = v at (xs(i), ys(j))
};

struct ContourSegment {
  double level = 0.0;
  Eigen::Vector2d a;
  Eigen::Vector2d b;
};

struct LevelsetResult {
  LevelsetGrid grid;
  std::vector<double> levels;
  std::vector<ContourSegment> segments;
  std::vector<std::vector<Eigen::Vector2d>> trajectories;
};

// Marching squares on a regular grid; saddles are resolved by the cell mean.
std::vector<ContourSegment> marching_squares(const LevelsetGrid& grid, double level);

// v is given in the environment's encoded coordinates; the grid lives in
// physical coordinates of the chosen slice.
LevelsetResult compute_levelset(const ValueFunction& v, const ControlAffineSystem& env,
                                const LevelsetSpec& spec);

// Writes levelset.csv (x,y,value) and levelset.svg; returns the file names.
std::vector<std::string> export_levelset(const ValueFunction& v, const ControlAffineSystem& env,
                                         const LevelsetSpec& spec,
                                         const std::filesystem::path& dir);

}  // namespace hjbl
