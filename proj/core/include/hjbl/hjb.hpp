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

#include "hjbl/envs.hpp"
#include "hjbl/trajectory.hpp"
#include "hjbl/value_function.hpp"

namespace hjbl {

struct CostSpec {
  Mat Q;
  Mat R;
};

CostSpec cost_spec(const ControlAffineSystem& env);

// All functions below take the value function in the environment's encoded
// coordinates (the network's own input space) and compose the encoding.

// u* = -1/2 R^-1 g(x)' v_x(x, t)'.
Vec policy(const ValueFunction& v, const ControlAffineSystem& env, const Vec& x, double t);

// Same, given the physical-coordinate gradient dv/dx.
Vec policy_from_gradient(const ControlAffineSystem& env, const Vec& x, const Vec& grad_x);

// x' Q x + u' R u; x is expected in encoded coordinates.
double running_cost(const CostSpec& cost, const Vec& x, const Vec& u);

// v(x_K, T) - v(x_0, 0) + dt * sum_k (state cost + control cost).
double value_residual(const ValueFunction& v, const ControlAffineSystem& env,
                      const Trajectory& traj);

// v(x_K, T) - v(x_0, 0) + dt * sum_k state cost (plus control cost if asked).
double lyapunov_inner(const ValueFunction& v, const ControlAffineSystem& env,
                      const Trajectory& traj, bool include_control = false);

struct HingeResidual {
  double value = 0.0;
  bool active = false;  // the gradient flows only when inner > 0
};

HingeResidual hinge(double inner);

HingeResidual lyapunov_residual(const ValueFunction& v, const ControlAffineSystem& env,
                                const Trajectory& traj, bool include_control = false);

}  // namespace hjbl
