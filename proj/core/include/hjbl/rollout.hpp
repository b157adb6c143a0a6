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

#include <span>
#include <vector>

#include "hjbl/envs.hpp"
#include "hjbl/trajectory.hpp"
#include "hjbl/value_function.hpp"

namespace hjbl {

enum class LossKind { kValue, kLyapunov };

std::string to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& name);

// Closed-loop forward Euler under the HJB policy of v (given in encoded
// coordinates). Throws DivergedRollout on the first non-finite state.
Trajectory rollout(const ValueFunction& v, const ControlAffineSystem& env, const Vec& x0,
                   const TimeGrid& grid);

struct GradientOptions {
  LossKind loss = LossKind::kValue;
  // Adds u' R u to the Lyapunov integrand.
  bool lyapunov_control_penalty = false;
  // Drops the dependence of the policy on x in the reverse sweep, i.e. the
  // adjoint sees f_x with u held fixed. Gives a biased gradient; debug only.
  bool drop_second_order = false;
  int workers = 1;
};

// Reverse sweep over one trajectory.
struct TrajectoryGradient {
  double inner = 0.0;  // residual before squaring / hinging
  Vec grad;            // d inner / d theta
  Vec adjoint0;        // d/dx_0 of [v(x_K, T) + dt sum costs]
};

TrajectoryGradient trajectory_gradient(const ValueFunction& v, const ControlAffineSystem& env,
                                       const Trajectory& traj, const GradientOptions& options);

struct LossGradient {
  double loss = 0.0;
  Vec grad;
  std::vector<double> inner;  // per-trajectory residual before squaring / hinging
  double mean_cost = 0.0;     // full state + control cost, batch mean
};

// Mean squared value residual or mean Lyapunov hinge over the batch, and its
// exact gradient with respect to the parameters of v.
LossGradient adjoint_gradient(const ValueFunction& v, const ControlAffineSystem& env,
                              std::span<const Vec> batch, const TimeGrid& grid,
                              const GradientOptions& options);

// Loss only, from fresh rollouts (no reverse sweep).
double batch_loss(const ValueFunction& v, const ControlAffineSystem& env,
                  std::span<const Vec> batch, const TimeGrid& grid,
                  const GradientOptions& options);

// Batch mean of dt * sum (state + control cost), whatever the loss kind.
double evaluate_cost(const ValueFunction& v, const ControlAffineSystem& env,
                     std::span<const Vec> batch, const TimeGrid& grid, int workers = 1);

}  // namespace hjbl
