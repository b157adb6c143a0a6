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

#include "hjbl/rollout.hpp"

#include <cmath>

#include "hjbl/encoded_value.hpp"
#include "hjbl/hjb.hpp"
#include "hjbl/parallel.hpp"

namespace hjbl {

std::string to_string(LossKind kind) {
  return kind == LossKind::kValue ? "value" : "lyapunov";
}

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "value") return LossKind::kValue;
  if (name == "lyapunov") return LossKind::kLyapunov;
  throw ContractError("unknown loss kind '" + name + "' (expected value or lyapunov)");
}

Trajectory rollout(const ValueFunction& v, const ControlAffineSystem& env, const Vec& x0,
                   const TimeGrid& grid) {
  require(x0.size() == env.state_dim(), "rollout: initial state has wrong dimension");
  require(x0.allFinite(), "rollout: initial state must be finite");
  require(grid.steps >= 1, "rollout: grid has no steps");
  require(v.state_dim() == env.state_dim(), "rollout: value function and environment disagree on n");

  const EncodedValue physical(v, env.encoding());
  const CostSpec cost = cost_spec(env);
  const int steps = grid.steps;

  Trajectory traj;
  traj.grid = grid;
  traj.states.reserve(std::size_t(steps) + 1);
  traj.controls.reserve(std::size_t(steps));
  traj.state_costs.reserve(std::size_t(steps));
  traj.control_costs.reserve(std::size_t(steps));
  traj.states.push_back(x0);

  Vec x = x0;
  for (int k = 0; k < steps; ++k) {
    const Vec grad_x = physical.input_derivatives(x, grid.time(k)).grad_x;
    Vec u = policy_from_gradient(env, x, grad_x);
    if (!u.allFinite()) {
      throw DivergedRollout(k, "rollout diverged: non-finite control at step " + std::to_string(k));
    }
    const Vec e = env.encode(x);
    traj.state_costs.push_back(e.dot(cost.Q * e));
    traj.control_costs.push_back(u.dot(cost.R * u));
    x += grid.dt * env.dynamics(x, u);
    if (!x.allFinite()) {
      throw DivergedRollout(k + 1, "rollout diverged: non-finite state at step " +
                                       std::to_string(k + 1));
    }
    traj.controls.push_back(std::move(u));
    traj.states.push_back(x);
  }
  return traj;
}

namespace {

bool integrand_has_control(const GradientOptions& options) {
  return options.loss == LossKind::kValue || options.lyapunov_control_penalty;
}

double inner_residual(const ValueFunction& v, const ControlAffineSystem& env,
                      const Trajectory& traj, const GradientOptions& options) {
  return options.loss == LossKind::kValue
             ? value_residual(v, env, traj)
             : lyapunov_inner(v, env, traj, options.lyapunov_control_penalty);
}

}  // namespace

TrajectoryGradient trajectory_gradient(const ValueFunction& v, const ControlAffineSystem& env,
                                       const Trajectory& traj, const GradientOptions& options) {
  const int steps = traj.grid.steps;
  require(steps >= 1 && traj.states.size() == std::size_t(steps) + 1 &&
              traj.controls.size() == std::size_t(steps),
          "trajectory_gradient: inconsistent trajectory");

  const EncodedValue physical(v, env.encoding());
  const StateEncoding& encoding = env.encoding();
  const Mat& q = env.Q();
  const Mat& r = env.R();
  const Eigen::LLT<Mat> r_llt(r);
  const double dt = traj.grid.dt;
  const bool with_control = integrand_has_control(options);

  TrajectoryGradient out;
  out.inner = inner_residual(v, env, traj, options);
  out.grad = Vec::Zero(v.param_count());
  const std::span<double> grad(out.grad.data(), std::size_t(out.grad.size()));

  const Vec& x_final = traj.states.back();
  Vec a = physical.input_derivatives(x_final, traj.grid.horizon).grad_x;
  physical.accumulate_param_gradient(x_final, traj.grid.horizon, 1.0, grad);
  physical.accumulate_param_gradient(traj.states.front(), 0.0, -1.0, grad);

  for (int k = steps - 1; k >= 0; --k) {
    const Vec& x = traj.states[std::size_t(k)];
    const Vec& u = traj.controls[std::size_t(k)];
    const double t = traj.grid.time(k);

    const DynamicsVjp vjp = env.dynamics_vjp(x, u, a);
    Vec u_bar = dt * vjp.u_part;
    if (with_control) u_bar += (2.0 * dt) * (r * u);

    const Vec e = encoding.encode(x);
    Vec a_prev = a + dt * vjp.x_part;
    a_prev += (2.0 * dt) * encoding.first_derivative(x).cwiseProduct(q * e);

    // u_bar' u = v_x . w with w = -1/2 g(x) R^-1 u_bar.
    const Vec s = r_llt.solve(u_bar);
    const Vec w = -0.5 * (env.input_matrix(x) * s);
    const Vec h_x = physical.accumulate_second_order(x, t, w, 1.0, grad);
    if (!options.drop_second_order) {
      a_prev += h_x;
      if (env.state_dependent_input()) {
        const Vec grad_x = physical.input_derivatives(x, t).grad_x;
        a_prev += env.input_matrix_vjp(x, -0.5 * s, grad_x);
      }
    }
    if (!a_prev.allFinite()) {
      throw NumericError("adjoint became non-finite at step " + std::to_string(k));
    }
    a = std::move(a_prev);
  }
  out.adjoint0 = std::move(a);
  return out;
}

LossGradient adjoint_gradient(const ValueFunction& v, const ControlAffineSystem& env,
                              std::span<const Vec> batch, const TimeGrid& grid,
                              const GradientOptions& options) {
  require(!batch.empty(), "adjoint_gradient: batch is empty");
  const std::size_t count = batch.size();
  const double inv_n = 1.0 / double(count);

  struct Slot {
    double inner = 0.0;
    double cost = 0.0;
    double coefficient = 0.0;
    Vec grad;
  };
  std::vector<Slot> slots(count);

  parallel_for(count, options.workers, [&](std::size_t i) {
    const Trajectory traj = rollout(v, env, batch[i], grid);
    Slot& slot = slots[i];
    slot.cost = traj.integrated_cost(true);
    slot.inner = inner_residual(v, env, traj, options);
    slot.coefficient = options.loss == LossKind::kValue ? 2.0 * slot.inner * inv_n
                                                        : (hinge(slot.inner).active ? inv_n : 0.0);
    if (slot.coefficient != 0.0) slot.grad = trajectory_gradient(v, env, traj, options).grad;
  });

  LossGradient out;
  out.grad = Vec::Zero(v.param_count());
  out.inner.reserve(count);
  for (const Slot& slot : slots) {
    out.inner.push_back(slot.inner);
    out.loss += options.loss == LossKind::kValue ? slot.inner * slot.inner
                                                 : hinge(slot.inner).value;
    out.mean_cost += slot.cost;
    if (slot.coefficient != 0.0) out.grad += slot.coefficient * slot.grad;
  }
  out.loss *= inv_n;
  out.mean_cost *= inv_n;
  if (!out.grad.allFinite()) {
    throw NumericError("adjoint_gradient: non-finite gradient (loss " +
                       std::to_string(out.loss) + ")");
  }
  return out;
}

double batch_loss(const ValueFunction& v, const ControlAffineSystem& env,
                  std::span<const Vec> batch, const TimeGrid& grid,
                  const GradientOptions& options) {
  require(!batch.empty(), "batch_loss: batch is empty");
  std::vector<double> terms(batch.size());
  parallel_for(batch.size(), options.workers, [&](std::size_t i) {
    const double inner = inner_residual(v, env, rollout(v, env, batch[i], grid), options);
    terms[i] = options.loss == LossKind::kValue ? inner * inner : hinge(inner).value;
  });
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum / double(batch.size());
}

double evaluate_cost(const ValueFunction& v, const ControlAffineSystem& env,
                     std::span<const Vec> batch, const TimeGrid& grid, int workers) {
  require(!batch.empty(), "evaluate_cost: batch is empty");
  std::vector<double> costs(batch.size());
  parallel_for(batch.size(), workers, [&](std::size_t i) {
    costs[i] = rollout(v, env, batch[i], grid).integrated_cost(true);
  });
  double sum = 0.0;
  for (double c : costs) sum += c;
  return sum / double(batch.size());
}

}  // namespace hjbl
