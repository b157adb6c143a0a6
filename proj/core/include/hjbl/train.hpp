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
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hjbl/adam.hpp"
#include "hjbl/envs.hpp"
#include "hjbl/network.hpp"
#include "hjbl/rollout.hpp"

namespace hjbl {

struct TrainConfig {
  std::string env = "di";
  LossKind loss = LossKind::kLyapunov;
  std::string network = "di_icnn";  // network_preset name
  int initial_conditions = 20;      // N
  double horizon = 7.0;             // T, seconds
  double dt = 0.01;                 // seconds
  int epochs = 65;
  double learning_rate = 3e-3;
  AdamHyper adam;
  std::uint64_t seed = 0;
  double epsilon = 0.1;             // icnn-pd only
  bool resample = false;            // fresh initial conditions every epoch
  bool lyapunov_control_penalty = false;
  bool drop_second_order = false;
  int workers = 1;
  std::map<std::string, double> env_params;
};

// Named experiment rows: di_lyapunov, di_value, cp_balance_lyapunov,
// cp_swingup_value, twolink_value.
TrainConfig train_preset(const std::string& name);
std::vector<std::string> train_preset_names();

// Checks the invariants of a config (N >= 1, epochs >= 1, lr > 0, grid).
void validate(const TrainConfig& config);

struct TrainResult {
  std::vector<double> loss;             // epochs + 1 entries on success
  std::vector<double> mean_cost;
  std::vector<double> normalized_cost;
  std::vector<double> wall_ms;
  ValueNetwork network{NetworkKind::kFcn, {2, 1}};  // final parameters
  std::uint64_t seed = 0;
  bool failed = false;
  std::string failure;
};

// Called after each epoch's metrics are recorded, with the network they
// were measured on.
using EpochCallback = std::function<void(int epoch, const ValueNetwork& net)>;

TrainResult train(const TrainConfig& config, const EpochCallback& on_epoch = {});

GradientOptions gradient_options(const TrainConfig& config);

double mean_of_squares(std::span<const double> residuals);
double mean_of_hinges(std::span<const double> inner);

double value_loss(const ValueFunction& v, const ControlAffineSystem& env,
                  std::span<const Vec> batch, const TimeGrid& grid, int workers = 1);
double lyapunov_loss(const ValueFunction& v, const ControlAffineSystem& env,
                     std::span<const Vec> batch, const TimeGrid& grid,
                     bool include_control = false, int workers = 1);

// curve / curve[0]; throws NumericError if curve[0] is zero or the curve is empty.
std::vector<double> normalized_cost(std::span<const double> curve);

// Per-step Lyapunov decrease along closed-loop Euler rollouts: a step k
// violates when v(x_{k+1}, t_{k+1}) - v(x_k, t_k) > -dt * l(x_k) + slack.
struct DescentStats {
  int steps = 0;
  int violations = 0;
  double violation_fraction() const { return steps == 0 ? 0.0 : double(violations) / steps; }
};

DescentStats lyapunov_descent(const ValueFunction& v, const ControlAffineSystem& env,
                              std::span<const Vec> batch, const TimeGrid& grid,
                              double slack = 1e-3);

// Initial conditions from a stream disjoint from the training batch.
std::vector<Vec> held_out_initial(const ControlAffineSystem& env, std::uint64_t seed, int count);

}  // namespace hjbl
