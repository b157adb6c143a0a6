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

#include "hjbl/hjb.hpp"

#include <cmath>

#include "hjbl/encoded_value.hpp"

namespace hjbl {

CostSpec cost_spec(const ControlAffineSystem& env) { return {env.Q(), env.R()}; }

Vec policy_from_gradient(const ControlAffineSystem& env, const Vec& x, const Vec& grad_x) {
  require(grad_x.size() == env.state_dim(), "policy: gradient has wrong dimension");
  const Vec gtv = env.input_matrix(x).transpose() * grad_x;
  return -0.5 * env.R().llt().solve(gtv);
}

Vec policy(const ValueFunction& v, const ControlAffineSystem& env, const Vec& x, double t) {
  require(v.state_dim() == env.state_dim(), "policy: value function and environment disagree on n");
  const EncodedValue physical(v, env.encoding());
  return policy_from_gradient(env, x, physical.input_derivatives(x, t).grad_x);
}

double running_cost(const CostSpec& cost, const Vec& x, const Vec& u) {
  require(x.size() == cost.Q.rows() && u.size() == cost.R.rows(),
          "running_cost: dimension mismatch");
  return x.dot(cost.Q * x) + u.dot(cost.R * u);
}

namespace {

double endpoint_difference(const ValueFunction& v, const ControlAffineSystem& env,
                           const Trajectory& traj) {
  require(traj.grid.steps >= 1 && traj.states.size() == std::size_t(traj.grid.steps) + 1,
          "residual: trajectory is empty or inconsistent with its grid");
  const EncodedValue physical(v, env.encoding());
  return physical.value(traj.states.back(), traj.grid.horizon) -
         physical.value(traj.states.front(), 0.0);
}

}  // namespace

double value_residual(const ValueFunction& v, const ControlAffineSystem& env,
                      const Trajectory& traj) {
  return endpoint_difference(v, env, traj) + traj.integrated_cost(true);
}

double lyapunov_inner(const ValueFunction& v, const ControlAffineSystem& env,
                      const Trajectory& traj, bool include_control) {
  return endpoint_difference(v, env, traj) + traj.integrated_cost(include_control);
}

HingeResidual hinge(double inner) {
  if (inner > 0.0) return {inner, true};
  return {0.0, false};
}

HingeResidual lyapunov_residual(const ValueFunction& v, const ControlAffineSystem& env,
                                const Trajectory& traj, bool include_control) {
  return hinge(lyapunov_inner(v, env, traj, include_control));
}

}  // namespace hjbl
