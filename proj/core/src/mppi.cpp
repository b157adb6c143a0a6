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

#include "hjbl/mppi.hpp"

#include <cmath>
#include <limits>

#include "hjbl/hjb.hpp"
#include "hjbl/parallel.hpp"
#include "hjbl/rollout.hpp"

namespace hjbl {

int horizon_steps(double horizon_ms, double dt) {
  require(horizon_ms > 0.0 && dt > 0.0, "horizon_steps: horizon and dt must be positive");
  return std::max(1, int(std::lround(horizon_ms / (1000.0 * dt))));
}

void validate(const MppiConfig& c, int control_dim) {
  require(c.samples >= 1, "mppi: samples must be >= 1");
  require(c.horizon >= 1, "mppi: horizon must be >= 1");
  require(c.dt > 0.0, "mppi: dt must be positive");
  require(c.temperature > 0.0, "mppi: temperature must be positive");
  require(c.noise_std.size() == 1 || int(c.noise_std.size()) == control_dim,
          "mppi: noise_std needs one entry or one per control dimension");
  for (double s : c.noise_std) require(s > 0.0, "mppi: noise_std must be positive");
  require(c.max_steps >= 1, "mppi: max_steps must be >= 1");
  require(c.tolerance > 0.0, "mppi: tolerance must be positive");
}

Vec importance_weights(std::span<const double> costs, double temperature) {
  require(!costs.empty(), "importance_weights: no samples");
  require(temperature > 0.0, "importance_weights: temperature must be positive");
  double best = std::numeric_limits<double>::infinity();
  for (double c : costs) {
    if (std::isfinite(c)) best = std::min(best, c);
  }
  if (!std::isfinite(best)) throw NumericError("mppi: all sampled rollouts diverged");
  Vec w(Eigen::Index(costs.size()));
  for (std::size_t i = 0; i < costs.size(); ++i) {
    w(Eigen::Index(i)) = std::isfinite(costs[i]) ? std::exp(-(costs[i] - best) / temperature) : 0.0;
  }
  return w / w.sum();
}

Mat combine_samples(const Mat& nominal, std::span<const Mat> perturbations,
                    std::span<const double> costs, double temperature) {
  require(perturbations.size() == costs.size(), "combine_samples: size mismatch");
  const Vec w = importance_weights(costs, temperature);
  Mat out = nominal;
  for (std::size_t i = 0; i < perturbations.size(); ++i) {
    require(perturbations[i].rows() == nominal.rows() && perturbations[i].cols() == nominal.cols(),
            "combine_samples: perturbation shape mismatch");
    if (w(Eigen::Index(i)) != 0.0) out += w(Eigen::Index(i)) * perturbations[i];
  }
  return out;
}

namespace {

double sequence_cost(const MppiConfig& c, const ControlAffineSystem& env, const CostSpec& cost,
                     Vec x, const Mat& controls, const ValueFunction* value) {
  double total = 0.0;
  for (Eigen::Index h = 0; h < controls.rows(); ++h) {
    const Vec u = controls.row(h).transpose();
    total += c.dt * running_cost(cost, env.encode(x), u);
    x += c.dt * env.dynamics(x, u);
    if (!x.allFinite()) return std::numeric_limits<double>::infinity();
  }
  if (c.terminal_value && value != nullptr) {
    total += EncodedValue(*value, env.encoding()).value(x, 0.0);
  }
  return std::isfinite(total) ? total : std::numeric_limits<double>::infinity();
}

}  // namespace

MppiStep mppi_update(const MppiConfig& c, const ControlAffineSystem& env, const Vec& x,
                     const Mat& nominal, std::mt19937_64& rng, const ValueFunction* value) {
  const int m = env.control_dim();
  validate(c, m);
  require(nominal.rows() == c.horizon && nominal.cols() == m, "mppi_update: nominal must be H x m");
  require(!c.terminal_value || value != nullptr, "mppi_update: terminal value needs a value function");

  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Mat> eps(std::size_t(c.samples), Mat::Zero(c.horizon, m));
  for (std::size_t i = 1; i < eps.size(); ++i) {
    for (int h = 0; h < c.horizon; ++h) {
      for (int j = 0; j < m; ++j) {
        const double sigma = c.noise_std.size() == 1 ? c.noise_std[0] : c.noise_std[std::size_t(j)];
        eps[i](h, j) = sigma * normal(rng);
      }
    }
  }

  const CostSpec cost = cost_spec(env);
  std::vector<double> costs(eps.size());
  parallel_for(eps.size(), c.workers, [&](std::size_t i) {
    try {
      costs[i] = sequence_cost(c, env, cost, x, nominal + eps[i], value);
    } catch (const NumericError&) {
      costs[i] = std::numeric_limits<double>::infinity();
    }
  });

  MppiStep out;
  out.updated = combine_samples(nominal, eps, costs, c.temperature);
  out.control = out.updated.row(0).transpose();
  out.shifted = Mat::Zero(c.horizon, m);
  if (c.horizon > 1) out.shifted.topRows(c.horizon - 1) = out.updated.bottomRows(c.horizon - 1);
  return out;
}

Mat warmstart_nominal(const ValueFunction& v, const ControlAffineSystem& env, const Vec& x,
                      int horizon, double dt) {
  require(horizon >= 1, "warmstart_nominal: horizon must be >= 1");
  const Trajectory traj = rollout(v, env, x, TimeGrid{horizon * dt, dt, horizon});
  Mat out(horizon, env.control_dim());
  for (int h = 0; h < horizon; ++h) out.row(h) = traj.controls[std::size_t(h)].transpose();
  return out;
}

MpcResult run_mpc(const ControlAffineSystem& env, const MppiConfig& c, const ValueFunction* value,
                  const Vec& x0, std::uint64_t seed) {
  validate(c, env.control_dim());
  require(!(c.warmstart || c.terminal_value) || value != nullptr,
          "run_mpc: warmstart and terminal value need a value function");
  require(x0.size() == env.state_dim(), "run_mpc: initial state has wrong dimension");

  std::mt19937_64 rng(seed);
  const CostSpec cost = cost_spec(env);
  const Vec goal = env.encode(env.goal());
  Mat nominal = Mat::Zero(c.horizon, env.control_dim());

  MpcResult result;
  result.horizon = c.horizon;
  Vec x = x0;
  result.states.push_back(x);
  while (result.steps < c.max_steps) {
    if ((env.encode(x) - goal).norm() < c.tolerance) {
      result.completed = true;
      break;
    }
    if (c.warmstart) nominal = warmstart_nominal(*value, env, x, c.horizon, c.dt);
    const MppiStep step = mppi_update(c, env, x, nominal, rng, value);
    result.cost += c.dt * running_cost(cost, env.encode(x), step.control);
    x += c.dt * env.dynamics(x, step.control);
    if (!x.allFinite()) throw NumericError("run_mpc: closed loop diverged");
    nominal = step.shifted;
    ++result.steps;
    result.controls.push_back(step.control);
    result.states.push_back(x);
  }
  if (!result.completed && (env.encode(x) - goal).norm() < c.tolerance) result.completed = true;
  return result;
}

}  // namespace hjbl
