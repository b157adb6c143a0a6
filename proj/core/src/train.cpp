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

#include "hjbl/train.hpp"

#include <chrono>
#include <cmath>

#include "hjbl/encoded_value.hpp"
#include "hjbl/hjb.hpp"

namespace hjbl {

TrainConfig train_preset(const std::string& name) {
  TrainConfig c;
  if (name == "di_lyapunov") {
    c.env = "di";
    c.loss = LossKind::kLyapunov;
    c.network = "di_icnn";
    c.initial_conditions = 20;
    c.horizon = 7.0;
    c.dt = 0.01;
    c.epochs = 65;
    c.learning_rate = 2e-2;
  } else if (name == "di_value") {
    c.env = "di";
    c.loss = LossKind::kValue;
    c.network = "di_value_icnn";
    c.initial_conditions = 20;
    c.horizon = 7.0;
    c.dt = 0.01;
    c.epochs = 200;
    c.learning_rate = 1e-2;
  } else if (name == "cp_balance_lyapunov") {
    c.env = "cartpole_balance";
    c.loss = LossKind::kLyapunov;
    c.network = "cp_icnn";
    c.initial_conditions = 100;
    c.horizon = 1.0;
    c.dt = 0.008;
    c.epochs = 30;
    c.learning_rate = 1e-2;
  } else if (name == "cp_swingup_value") {
    c.env = "cartpole_swingup";
    c.loss = LossKind::kValue;
    c.network = "swingup_fcn";
    c.initial_conditions = 100;
    c.horizon = 3.04;  // 38 steps of the 0.08 s grid
    c.dt = 0.08;
    c.epochs = 150;
    c.learning_rate = 1e-3;
  } else if (name == "twolink_value") {
    c.env = "twolink";
    c.loss = LossKind::kValue;
    c.network = "twolink_fcn";
    c.initial_conditions = 100;
    c.horizon = 3.0;
    c.dt = 0.01;
    c.epochs = 50;
    c.learning_rate = 3e-4;
  } else {
    throw ContractError("unknown training preset '" + name + "'");
  }
  return c;
}

std::vector<std::string> train_preset_names() {
  return {"di_lyapunov", "di_value", "cp_balance_lyapunov", "cp_swingup_value", "twolink_value"};
}

void validate(const TrainConfig& c) {
  require(c.initial_conditions >= 1, "train: initial_conditions must be >= 1");
  require(c.epochs >= 1, "train: epochs must be >= 1");
  require(c.learning_rate > 0.0, "train: learning_rate must be positive");
  require(c.epsilon > 0.0, "train: epsilon must be positive");
  require(c.workers >= 1, "train: workers must be >= 1");
  require(c.adam.beta1 >= 0.0 && c.adam.beta1 < 1.0 && c.adam.beta2 >= 0.0 &&
              c.adam.beta2 < 1.0 && c.adam.eps > 0.0,
          "train: invalid Adam hyperparameters");
  TimeGrid::make(c.horizon, c.dt);
}

GradientOptions gradient_options(const TrainConfig& c) {
  GradientOptions o;
  o.loss = c.loss;
  o.lyapunov_control_penalty = c.lyapunov_control_penalty;
  o.drop_second_order = c.drop_second_order;
  o.workers = c.workers;
  return o;
}

TrainResult train(const TrainConfig& config, const EpochCallback& on_epoch) {
  validate(config);
  const auto env = make_env(config.env, config.env_params);
  const NetworkPreset preset = network_preset(config.network);
  require(preset.layer_widths.front() == env->state_dim() + 1,
          "train: network input width must be state dimension + 1");
  ValueNetwork net =
      ValueNetwork::initialized(preset.kind, preset.layer_widths, config.seed, config.epsilon);
  const TimeGrid grid = TimeGrid::make(config.horizon, config.dt);
  const GradientOptions options = gradient_options(config);

  std::mt19937_64 rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<Vec> batch = env->sample_initial(rng, config.initial_conditions);

  TrainResult result{{}, {}, {}, {}, net, config.seed, false, {}};
  AdamState adam = AdamState::zeros(net.param_count());

  try {
    for (int epoch = 0; epoch <= config.epochs; ++epoch) {
      const auto start = std::chrono::steady_clock::now();
      if (config.resample && epoch > 0) batch = env->sample_initial(rng, config.initial_conditions);

      const LossGradient lg = adjoint_gradient(net, *env, batch, grid, options);
      result.loss.push_back(lg.loss);
      result.mean_cost.push_back(lg.mean_cost);
      if (on_epoch) on_epoch(epoch, net);

      if (epoch < config.epochs) {
        AdamUpdate update = adam_step(adam, net.params(), lg.grad, config.learning_rate, config.adam);
        adam = std::move(update.state);
        net.set_params(update.params);
        net.project_icnn();
      }
      const auto elapsed = std::chrono::steady_clock::now() - start;
      result.wall_ms.push_back(std::chrono::duration<double, std::milli>(elapsed).count());
    }
  } catch (const NumericError& e) {
    result.failed = true;
    result.failure = e.what();
  }

  result.network = net;
  if (!result.mean_cost.empty() && result.mean_cost.front() > 0.0) {
    result.normalized_cost = normalized_cost(result.mean_cost);
  }
  return result;
}

double mean_of_squares(std::span<const double> residuals) {
  require(!residuals.empty(), "mean_of_squares: empty input");
  double sum = 0.0;
  for (double r : residuals) sum += r * r;
  return sum / double(residuals.size());
}

double mean_of_hinges(std::span<const double> inner) {
  require(!inner.empty(), "mean_of_hinges: empty input");
  double sum = 0.0;
  for (double r : inner) sum += hinge(r).value;
  return sum / double(inner.size());
}

double value_loss(const ValueFunction& v, const ControlAffineSystem& env,
                  std::span<const Vec> batch, const TimeGrid& grid, int workers) {
  GradientOptions o;
  o.loss = LossKind::kValue;
  o.workers = workers;
  return batch_loss(v, env, batch, grid, o);
}

double lyapunov_loss(const ValueFunction& v, const ControlAffineSystem& env,
                     std::span<const Vec> batch, const TimeGrid& grid, bool include_control,
                     int workers) {
  GradientOptions o;
  o.loss = LossKind::kLyapunov;
  o.lyapunov_control_penalty = include_control;
  o.workers = workers;
  return batch_loss(v, env, batch, grid, o);
}

std::vector<double> normalized_cost(std::span<const double> curve) {
  if (curve.empty()) throw NumericError("normalized_cost: empty curve");
  if (curve.front() == 0.0) throw NumericError("normalized_cost: epoch-0 value is zero");
  std::vector<double> out;
  out.reserve(curve.size());
  for (double c : curve) out.push_back(c / curve.front());
  return out;
}

DescentStats lyapunov_descent(const ValueFunction& v, const ControlAffineSystem& env,
                              std::span<const Vec> batch, const TimeGrid& grid, double slack) {
  const EncodedValue physical(v, env.encoding());
  const CostSpec cost = cost_spec(env);
  const Vec zero_u = Vec::Zero(env.control_dim());
  DescentStats stats;
  for (const Vec& x0 : batch) {
    const Trajectory traj = rollout(v, env, x0, grid);
    double prev = physical.value(traj.states[0], 0.0);
    for (int k = 0; k < grid.steps; ++k) {
      const double next = physical.value(traj.states[k + 1], grid.time(k + 1));
      const double ell = running_cost(cost, env.encode(traj.states[k]), zero_u);
      if (next - prev > -grid.dt * ell + slack) ++stats.violations;
      ++stats.steps;
      prev = next;
    }
  }
  return stats;
}

std::vector<Vec> held_out_initial(const ControlAffineSystem& env, std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed ^ 0xD1B54A32D192ED03ULL);
  return env.sample_initial(rng, count);
}

}  // namespace hjbl
