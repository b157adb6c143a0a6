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
#include <string>
#include <vector>

#include "hjbl/levelset.hpp"
#include "hjbl/mppi.hpp"
#include "hjbl/train.hpp"

namespace hjbl {

struct MpcSettings {
  int samples = 256;
  double horizon_ms = 20.0;
  double vanilla_horizon_ms = 500.0;  // horizon of the vanilla arm in --compare runs
  double dt = 0.0;                    // control period; 0 uses train.dt
  double temperature = 1.0;
  std::vector<double> noise_std{1.0};
  bool warmstart = true;
  bool terminal_value = false;
  int max_steps = 1000;
  double tolerance = 0.1;
  int initial_conditions = 20;
  bool compare = false;

  // Config for one arm; horizon from horizon_ms (or vanilla_horizon_ms).
  MppiConfig arm(bool warm, double default_dt, int workers) const;
};

struct LevelsetSettings {
  double time = 0.0;
  std::vector<double> bounds{-1.0, 1.0, -1.0, 1.0};  // x_min, x_max, y_min, y_max
  int resolution = 101;
  int levels = 10;
  std::vector<int> slice;  // two state indices; empty for n = 2
  int trajectories = 8;

  LevelsetSpec spec(const TrainConfig& train, std::uint64_t seed) const;
};

// Everything one CLI invocation needs. Serialises to a single JSON document;
// parsing rejects unknown keys and values whose type differs from the
// default's.
struct ExperimentConfig {
  std::string command = "train";  // train | eval | mpc | plot | levelset
  std::string preset;
  std::string checkpoint;
  std::vector<std::uint64_t> seeds{0};
  std::string out = "runs/default";
  bool parallel_seeds = false;
  bool record_wall_time = false;
  std::vector<std::string> inputs;  // plot: run directories holding curves.csv
  TrainConfig train;
  MpcSettings mppi;
  LevelsetSettings levelset;
};

std::string config_to_string(const ExperimentConfig& config);
ExperimentConfig config_from_string(const std::string& text);

// Replaces the train section with a named preset.
ExperimentConfig with_preset(ExperimentConfig config, const std::string& preset);

// Applies "dotted.key=value" assignments; the key must exist and the value
// must type-check against the current value.
ExperimentConfig with_overrides(const ExperimentConfig& config,
                                const std::vector<std::string>& assignments);

// Merges a JSON document over config with the same strictness as parsing.
ExperimentConfig merged(const ExperimentConfig& config, const std::string& document);

bool equivalent(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace hjbl
