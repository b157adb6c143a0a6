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

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <random>

#include "hjbl/envs.hpp"
#include "hjbl/hjb.hpp"
#include "hjbl/network.hpp"
#include "hjbl/quadratic_value.hpp"
#include "hjbl/rollout.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace hjbl {
namespace {

using testing_support::rel_err;
using testing_support::uniform_vec;
using testing_support::vec;

Mat di_a() { return (Mat(2, 2) << 0, 1, 0, 0).finished(); }
Mat di_b() { return (Mat(2, 1) << 0, 1).finished(); }

Mat di_care() {
  const auto env = make_env("di");
  return oracle::care(di_a(), di_b(), env->Q(), env->R());
}

ValueNetwork zero_gradient_net() {
  ValueNetwork net(NetworkKind::kFcn, {3, 4, 1});
  return net;  // all parameters zero: v and v_x vanish everywhere
}

// Ridders differences of the discrete batch loss over every (or every
// `stride`-th) parameter; returns the worst relative error beyond the oracle's
// own resolution.
double worst_fd_error(const ValueNetwork& net, const ControlAffineSystem& env,
                      const std::vector<Vec>& batch, const TimeGrid& grid,
                      const GradientOptions& options, int stride = 1) {
  const LossGradient lg = adjoint_gradient(net, env, batch, grid, options);
  const auto loss = std::function<double(const Vec&)>([&](const Vec& th) {
    return batch_loss(net.with_params(th), env, batch, grid, options);
  });
  double worst = 0.0;
  for (int i = 0; i < net.param_count(); i += stride) {
    const oracle::RiddersResult fd = oracle::resolved_difference(loss, net.params(), i);
    worst = std::max(worst, oracle::excess_rel_err(lg.grad(i), fd));
  }
  return worst;
}

TEST(Rollout, ZeroGradientNetDriftsFreely) {
  const auto env = make_env("di");
  const ValueNetwork net = zero_gradient_net();
  const Trajectory traj = rollout(net, *env, vec({1.0, 0.0}), TimeGrid::make(1.0, 0.01));
  ASSERT_EQ(traj.states.size(), 101u);
  for (const Vec& u : traj.controls) EXPECT_EQ(u, Vec::Zero(1));
  for (const Vec& x : traj.states) EXPECT_EQ(x, vec({1.0, 0.0}));
}

TEST(Rollout, AccumulatedCostIsRectangleSum) {
  const auto env = make_env("di");
  const QuadraticValue v(di_care());
  const TimeGrid grid = TimeGrid::make(1.0, 0.01);
  const Trajectory traj = rollout(v, *env, vec({0.7, -0.2}), grid);
  double sum = 0.0;
  for (int k = 0; k < grid.steps; ++k) sum += traj.state_costs[k] + traj.control_costs[k];
  EXPECT_EQ(traj.integrated_cost(true), grid.dt * sum);
}

TEST(Rollout, ForwardEulerRecursionExact) {
  const auto env = make_env("cartpole_swingup");
  const ValueNetwork net = ValueNetwork::initialized(NetworkKind::kFcn, {5, 16, 16, 1}, 3);
  const TimeGrid grid = TimeGrid::make(0.5, 0.02);
  const Trajectory traj = rollout(net, *env, vec({0.0, 3.1, 0.0, 0.0}), grid);
  for (int k = 0; k < grid.steps; ++k) {
    const Vec u = policy(net, *env, traj.states[k], grid.time(k));
    EXPECT_EQ(traj.controls[k], u);
    const Vec next = traj.states[k] + grid.dt * env->dynamics(traj.states[k], u);
    EXPECT_EQ(traj.states[k + 1], next);
  }
}

TEST(Rollout, RiccatiQuadraticContracts) {
  const auto env = make_env("di");
  const QuadraticValue v(di_care());
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const Vec x0 = uniform_vec(rng, 2, -1.0, 1.0);
    const Trajectory traj = rollout(v, *env, x0, TimeGrid::make(2.0, 0.01));
    EXPECT_LT(traj.states.back().norm(), x0.norm());
  }
}

TEST(Rollout, Deterministic) {
  const auto env = make_env("twolink");
  const ValueNetwork net = ValueNetwork::initialized(NetworkKind::kFcn, {5, 16, 16, 1}, 5);
  const TimeGrid grid = TimeGrid::make(0.5, 0.01);
  const Trajectory a = rollout(net, *env, vec({0.3, -0.4, 0.0, 0.0}), grid);
  const Trajectory b = rollout(net, *env, vec({0.3, -0.4, 0.0, 0.0}), grid);
  for (std::size_t k = 0; k < a.states.size(); ++k) EXPECT_EQ(a.states[k], b.states[k]);
}

TEST(Rollout, DivergenceReportsStep) {
  const auto env = make_env("di");
  const QuadraticValue v(Mat(Mat::Identity(2, 2) * 1e300));
  try {
    rollout(v, *env, vec({1.0, 1.0}), TimeGrid::make(1.0, 0.01));
    FAIL() << "expected divergence";
  } catch (const DivergedRollout& e) {
    EXPECT_GE(e.step(), 0);
    EXPECT_LE(e.step(), 100);
  }
}

TEST(TimeGrid, Invariants) {
  const TimeGrid g = TimeGrid::make(7.0, 0.01);
  EXPECT_EQ(g.steps, 700);
  EXPECT_NEAR(g.steps * g.dt, 7.0, 1e-9);
  EXPECT_EQ(TimeGrid::make(1.0, 0.008).steps, 125);
  EXPECT_THROW(TimeGrid::make(3.0, 0.08), ContractError);
  EXPECT_THROW(TimeGrid::make(0.0, 0.01), ContractError);
  EXPECT_THROW(TimeGrid::make(1.0, -0.01), ContractError);
}

TEST(AdjointGradient, ZeroResidualsGiveZeroGradient) {
  const auto env = make_env("di");
  ValueNetwork net(NetworkKind::kFcn, {3, 4, 1});
  Vec p = Vec::Zero(net.param_count());
  p(p.size() - 1) = 0.4;
  net.set_params(p);
  const std::vector<Vec> batch{Vec::Zero(2), Vec::Zero(2)};
  GradientOptions o;
  o.loss = LossKind::kValue;
  const LossGradient lg = adjoint_gradient(net, *env, batch, TimeGrid::make(0.5, 0.01), o);
  EXPECT_EQ(lg.loss, 0.0);
  EXPECT_EQ(lg.grad, Vec::Zero(net.param_count()));
}

TEST(AdjointGradient, DoubleIntegratorIcnnMatchesFiniteDifferences) {
  const auto env = make_env("di");
  const ValueNetwork net = ValueNetwork::initialized(NetworkKind::kIcnnPd, {3, 4, 4, 1}, 1);
  std::mt19937_64 rng(11);
  const std::vector<Vec> batch = env->sample_initial(rng, 4);
  const TimeGrid grid = TimeGrid::make(0.5, 0.01);
  for (LossKind kind : {LossKind::kValue, LossKind::kLyapunov}) {
    GradientOptions o;
    o.loss = kind;
    const LossGradient lg = adjoint_gradient(net, *env, batch, grid, o);
    if (kind == LossKind::kLyapunov) {
      for (double r : lg.inner) ASSERT_GT(std::abs(r), 1e-3) << "too close to the hinge";
    }
    EXPECT_LE(worst_fd_error(net, *env, batch, grid, o), kind == LossKind::kValue ? 1e-6 : 1e-5)
        << to_string(kind);
  }
}

// Twenty configurations across environments, loss kinds and network kinds.
class RandomAdjoint : public ::testing::TestWithParam<int> {};

TEST_P(RandomAdjoint, MatchesFiniteDifferences) {
  const int i = GetParam();
  const std::vector<std::string> envs{"di", "cartpole_balance", "cartpole_swingup", "twolink"};
  const std::string name = envs[std::size_t(i % 4)];
  const bool icnn = (i / 4) % 2 == 0;
  const LossKind kind = (i / 8) % 2 == 0 ? LossKind::kValue : LossKind::kLyapunov;
  const auto env = make_env(name);
  const int n = env->state_dim();
  const ValueNetwork init = ValueNetwork::initialized(
      icnn ? NetworkKind::kIcnnPd : NetworkKind::kFcn, {n + 1, 6, 5, 1}, 100 + i);
  // The random convex net makes the arm's explicit-Euler loop stiff.
  const bool stiff = icnn && name == "twolink";
  const ValueNetwork net = stiff ? init.with_params(0.3 * init.params()) : init;
  std::mt19937_64 rng(200 + i);
  const std::vector<Vec> batch = env->sample_initial(rng, 2 + i % 2);
  const double dt = stiff ? 5e-4 : name == "cartpole_balance" ? 0.008 : 0.01;
  const TimeGrid grid = TimeGrid::make(dt * (stiff ? 10 : 20), dt);
  GradientOptions o;
  o.loss = kind;
  o.lyapunov_control_penalty = i >= 16;
  const LossGradient lg = adjoint_gradient(net, *env, batch, grid, o);
  if (kind == LossKind::kLyapunov) {
    for (double r : lg.inner) {
      if (std::abs(r) < 1e-3) GTEST_SKIP() << "residual too close to the hinge boundary";
    }
  }
  EXPECT_LE(worst_fd_error(net, *env, batch, grid, o), 1e-6)
      << name << (icnn ? " icnn " : " fcn ") << to_string(kind);
}

INSTANTIATE_TEST_SUITE_P(Configs, RandomAdjoint, ::testing::Range(0, 20));

TEST(Adjoint, OracleFlagsInjectedError) {
  const auto env = make_env("di");
  const ValueNetwork net = ValueNetwork::initialized(NetworkKind::kFcn, {3, 6, 5, 1}, 9);
  std::mt19937_64 rng(9);
  const std::vector<Vec> batch = env->sample_initial(rng, 2);
  const TimeGrid grid = TimeGrid::make(0.2, 0.01);
  const GradientOptions o;
  const LossGradient lg = adjoint_gradient(net, *env, batch, grid, o);
  const auto loss = std::function<double(const Vec&)>([&](const Vec& th) {
    return batch_loss(net.with_params(th), *env, batch, grid, o);
  });
  Eigen::Index k = 0;
  lg.grad.cwiseAbs().maxCoeff(&k);
  const oracle::RiddersResult fd = oracle::resolved_difference(loss, net.params(), int(k));
  EXPECT_LE(oracle::excess_rel_err(lg.grad(k), fd), 1e-8);
  EXPECT_GT(oracle::excess_rel_err(lg.grad(k) * (1.0 + 1e-6), fd), 5e-7);
}

TEST(AdjointGradient, PermutationInvariant) {
  const auto env = make_env("di");
  const ValueNetwork net = ValueNetwork::initialized(NetworkKind::kIcnnPd, {3, 4, 4, 1}, 2);
  std::mt19937_64 rng(12);
  std::vector<Vec> batch = env->sample_initial(rng, 6);
  const TimeGrid grid = TimeGrid::make(0.5, 0.01);
  GradientOptions o;
  const LossGradient a = adjoint_gradient(net, *env, batch, grid, o);
  std::reverse(batch.begin(), batch.end());
  std::swap(batch[1], batch[4]);
  const LossGradient b = adjoint_gradient(net, *env, batch, grid, o);
  EXPECT_LE((a.grad - b.grad).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(a.loss, b.loss, 1e-12);
}

TEST(AdjointGradient, WorkerCountDoesNotChangeBits) {
  const auto env = make_env("twolink");
  const ValueNetwork net = ValueNetwork::initialized(NetworkKind::kFcn, {5, 16, 16, 1}, 3);
  std::mt19937_64 rng(13);
  const std::vector<Vec> batch = env->sample_initial(rng, 7);
  const TimeGrid grid = TimeGrid::make(0.3, 0.01);
  GradientOptions o;
  const LossGradient serial = adjoint_gradient(net, *env, batch, grid, o);
  o.workers = 3;
  const LossGradient parallel = adjoint_gradient(net, *env, batch, grid, o);
  EXPECT_EQ(serial.grad, parallel.grad);
  EXPECT_EQ(serial.loss, parallel.loss);
}

TEST(AdjointGradient, DroppingSecondOrderTermBiasesGradient) {
  const auto env = make_env("di");
  const ValueNetwork net = ValueNetwork::initialized(NetworkKind::kIcnnPd, {3, 4, 4, 1}, 4);
  std::mt19937_64 rng(14);
  const std::vector<Vec> batch = env->sample_initial(rng, 4);
  const TimeGrid grid = TimeGrid::make(0.5, 0.01);
  GradientOptions exact;
  GradientOptions literal;
  literal.drop_second_order = true;
  const Vec a = adjoint_gradient(net, *env, batch, grid, exact).grad;
  const Vec b = adjoint_gradient(net, *env, batch, grid, literal).grad;
  EXPECT_GT((a - b).norm(), 1e-6 * a.norm());
  EXPECT_LE(worst_fd_error(net, *env, batch, grid, exact), 1e-6);
}

TEST(AdjointGradient, ConvergesToContinuousAdjoint) {
  const auto env = make_env("di");
  const Mat p = di_care();
  const QuadraticValue v(p);
  const Mat k = env->R().inverse() * di_b().transpose() * p;
  const Vec x0 = vec({0.9, -0.4});
  const double horizon = 1.0;
  const Vec reference =
      oracle::continuous_adjoint_linear(di_a(), di_b(), k, env->Q(), env->R(), p, horizon, 1e-5, x0);
  GradientOptions o;
  std::vector<double> errors;
  for (double dt : {0.04, 0.02, 0.01, 0.005}) {
    const TimeGrid grid = TimeGrid::make(horizon, dt);
    const Trajectory traj = rollout(v, *env, x0, grid);
    const TrajectoryGradient tg = trajectory_gradient(v, *env, traj, o);
    errors.push_back((tg.adjoint0 - reference).norm());
  }
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double ratio = errors[i - 1] / errors[i];
    EXPECT_GT(ratio, 1.7) << "level " << i;
    EXPECT_LT(ratio, 2.3) << "level " << i;
  }
}

TEST(EvaluateCost, Examples) {
  const auto env = make_env("di");
  const ValueNetwork zero = zero_gradient_net();
  const std::vector<Vec> origin{Vec::Zero(2), Vec::Zero(2)};
  EXPECT_EQ(evaluate_cost(zero, *env, origin, TimeGrid::make(1.0, 0.01)), 0.0);

  Trajectory held;
  held.grid = TimeGrid::make(1.0, 0.01);
  for (int k = 0; k < held.grid.steps; ++k) {
    held.states.push_back(vec({1, 1}));
    held.controls.push_back(Vec::Zero(1));
    held.state_costs.push_back(running_cost(cost_spec(*env), vec({1, 1}), Vec::Zero(1)));
    held.control_costs.push_back(0.0);
  }
  held.states.push_back(vec({1, 1}));
  EXPECT_NEAR(held.integrated_cost(true), 1.0, 1e-12);
}

TEST(EvaluateCost, MeanOfTrajectoryCosts) {
  const auto env = make_env("twolink");
  const ValueNetwork net = ValueNetwork::initialized(NetworkKind::kFcn, {5, 8, 8, 1}, 6);
  std::mt19937_64 rng(15);
  const std::vector<Vec> batch = env->sample_initial(rng, 5);
  const TimeGrid grid = TimeGrid::make(0.5, 0.01);
  double sum = 0.0;
  for (const Vec& x0 : batch) sum += rollout(net, *env, x0, grid).integrated_cost(true);
  EXPECT_NEAR(evaluate_cost(net, *env, batch, grid), sum / 5.0, 1e-12);
  GradientOptions o;
  o.loss = LossKind::kLyapunov;
  EXPECT_NEAR(adjoint_gradient(net, *env, batch, grid, o).mean_cost, sum / 5.0, 1e-12);
}

TEST(AdjointGradient, ReportsCostRelativeToRollout) {
  const auto env = make_env("cartpole_swingup");
  const ValueNetwork net = ValueNetwork::initialized(NetworkKind::kFcn, {5, 128, 128, 1}, 7);
  std::mt19937_64 rng(16);
  const std::vector<Vec> batch = env->sample_initial(rng, 4);
  const TimeGrid grid = TimeGrid::make(1.6, 0.08);
  GradientOptions o;
  const auto t0 = std::chrono::steady_clock::now();
  for (const Vec& x0 : batch) rollout(net, *env, x0, grid);
  const auto t1 = std::chrono::steady_clock::now();
  adjoint_gradient(net, *env, batch, grid, o);
  const auto t2 = std::chrono::steady_clock::now();
  const double ratio = std::chrono::duration<double>(t2 - t1).count() /
                       std::max(1e-9, std::chrono::duration<double>(t1 - t0).count());
  RecordProperty("adjoint_to_rollout_ratio", std::to_string(ratio));
  std::cout << "adjoint/rollout runtime ratio: " << ratio << "\n";
  SUCCEED();
}

}  // namespace
}  // namespace hjbl
