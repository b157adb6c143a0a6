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

#include <random>
#include <span>
#include <vector>

#include "hjbl/envs.hpp"
#include "hjbl/value_function.hpp"

namespace hjbl {

struct MppiConfig {
  int samples = 256;                  // K
  int horizon = 1;                    // H, control steps
  double dt = 0.01;                   // control period, seconds
  double temperature = 1.0;           // lambda
  std::vector<double> noise_std{1.0}; // per control dimension, or one value for all
  bool warmstart = false;             // rebuild the nominal from the learned policy
  bool terminal_value = false;        // add v(x_H, 0) to every sample cost
  int max_steps = 1000;
  double tolerance = 0.1;             // on |encode(x) - encode(goal)|
  int workers = 1;
};

// round(horizon_ms / (1000 dt)), at least 1.
int horizon_steps(double horizon_ms, double dt);

void validate(const MppiConfig& config, int control_dim);

// exp(-(S_i - min S) / lambda), normalised. Non-finite costs get weight 0.
Vec importance_weights(std::span<const double> costs, double temperature);

// nominal + sum_i w_i eps_i.
Mat combine_samples(const Mat& nominal, std::span<const Mat> perturbations,
                    std::span<const double> costs, double temperature);

struct MppiStep {
  Vec control;    // first control of the updated sequence
  Mat updated;    // H x m updated sequence
  Mat shifted;    // updated sequence advanced one step, zero-padded
};

// One MPPI iteration from state x. Sample 0 is the unperturbed nominal.
// `value` is required when config.terminal_value is set.
MppiStep mppi_update(const MppiConfig& config, const ControlAffineSystem& env, const Vec& x,
                     const Mat& nominal, std::mt19937_64& rng,
                     const ValueFunction* value = nullptr);

// Controls of the HJB policy of v rolled out from x for H steps (times h dt).
Mat warmstart_nominal(const ValueFunction& v, const ControlAffineSystem& env, const Vec& x,
                      int horizon, double dt);

struct MpcResult {
  int steps = 0;
  bool completed = false;
  double cost = 0.0;  // sum of dt * running cost over executed steps
  int horizon = 0;
  std::vector<Vec> states;
  std::vector<Vec> controls;
};

// Closed-loop MPPI. `value` is required iff warmstart or terminal_value.
MpcResult run_mpc(const ControlAffineSystem& env, const MppiConfig& config,
                  const ValueFunction* value, const Vec& x0, std::uint64_t seed);

}  // namespace hjbl
