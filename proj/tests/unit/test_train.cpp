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

#include <cmath>
#include <random>

#include "hjbl/envs.hpp"
#include "hjbl/hjb.hpp"
#include "hjbl/network.hpp"
#include "hjbl/quadratic_value.hpp"
#include "hjbl/train.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace hjbl {
namespace {

using testing_support::vec;

TEST(Losses, MeanOfSquares) {
  const std::vector<double> r{1.0, -1.0};
  EXPECT_DOUBLE_EQ(mean_of_squares(r), 1.0);
  const std::vector<double> zeros(5, 0.0);
  EXPECT_EQ(mean_of_squares(zeros), 0.0);
  EXPECT_THROW(mean_of_squares(std::vector<double>{}), ContractError);
}

TEST(Losses, MeanOfHinges) {
  EXPECT_DOUBLE_EQ(mean_of_hinges(std::vector<double>{-1.0, 3.0}), 1.5);
  EXPECT_EQ(mean_of_hinges(std::vector<double>{-1.0, -0.5, -7.0}), 0.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> inner(7);
    for (double& v : inner) v = normal(rng);
    EXPECT_GE(mean_of_hinges(inner), 0.0);
  }
}

TEST(Losses, ValueLossMatchesNaiveRecomputation) {
  const auto env = make_env("di");
  const ValueNetwork net = ValueNetwork::initialized(NetworkKind::kFcn, {3, 8, 8, 1}, 11);
  std::mt19937_64 rng(12);
  const std::vector<Vec> batch = env->sample_initial(rng, 6);
  const TimeGrid grid = TimeGrid::make(1.0, 0.01);

  double naive = 0.0;
  for (const Vec& x0 : batch) {
    const Trajectory traj = rollout(net, *env, x0, grid);
    double integral = 0.0;
    for (int k = 0; k < grid.steps; ++k) {
      const Vec& x = traj.states[std::size_t(k)];
      const Vec& u = traj.controls[std::size_t(k)];
      integral += grid.dt * (x.dot(env->Q() * x) + u.dot(env->R() * u));
    }
    const double r = net.value(traj.states.back(), grid.horizon) - net.value(x0, 0.0) + integral;
    naive += r * r;
  }
  naive /= double(batch.size());
  EXPECT_NEAR(value_loss(net, *env, batch, grid), naive, 1e-12 * std::max(1.0, naive));
  EXPECT_EQ(value_loss(net, *env, batch, grid, 3), value_loss(net, *env, batch, grid, 1));
}

TEST(Losses, LyapunovLossIsNonnegative) {
  const auto env = make_env("cartpole_balance");
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ValueNetwork net = ValueNetwork::initialized(NetworkKind::kIcnnPd, {5, 8, 8, 1}, seed);
    std::mt19937_64 rng(seed);
    const std::vector<Vec> batch = env->sample_initial(rng, 4);
    EXPECT_GE(lyapunov_loss(net, *env, batch, TimeGrid::make(0.4, 0.008)), 0.0);
  }
}

TEST(Adam, ZeroGradientLeavesParametersAndDecaysMoments) {
  const Vec p = vec({1.0, 2.0});
  EXPECT_EQ(adam_step(AdamState::zeros(2), p, Vec::Zero(2), 1e-3).params, p);
  AdamState s{vec({0.5, -0.2}), vec({0.04, 0.01}), 3};
  const AdamUpdate u = adam_step(s, p, Vec::Zero(2), 1e-3);
  EXPECT_DOUBLE_EQ(u.state.m(0), 0.9 * 0.5);
  EXPECT_DOUBLE_EQ(u.state.v(1), 0.999 * 0.01);
  EXPECT_EQ(u.state.step, 4);
}

TEST(Adam, FirstStepMovesBySignOfGradient) {
  const Vec g = vec({3.0, -0.01, 250.0, -7.5});
  const Vec p = vec({0.1, 0.2, 0.3, 0.4});
  const double lr = 1e-2;
  const AdamUpdate u = adam_step(AdamState::zeros(4), p, g, lr);
  for (int i = 0; i < 4; ++i) {
    // m_hat = g, v_hat = g^2: the step is lr * g / (|g| + eps).
    const double expected = p(i) - lr * g(i) / (std::abs(g(i)) + 1e-8);
    EXPECT_NEAR(u.params(i), expected, 1e-15);
    EXPECT_NEAR(u.params(i) - p(i), -lr * (g(i) > 0 ? 1.0 : -1.0), 1e-7);
  }
}

TEST(Adam, MatchesRecurrenceOverSeveralSteps) {
  std::mt19937_64 rng(5);
  const AdamHyper h{0.8, 0.95, 1e-6};
  AdamState s = AdamState::zeros(3);
  Vec p = vec({0.0, 1.0, -1.0});
  Vec m = Vec::Zero(3), v = Vec::Zero(3), q = p;
  for (int t = 1; t <= 6; ++t) {
    const Vec g = testing_support::uniform_vec(rng, 3, -2.0, 2.0);
    const AdamUpdate u = adam_step(s, p, g, 0.05, h);
    s = u.state;
    p = u.params;
    m = h.beta1 * m + (1 - h.beta1) * g;
    v = h.beta2 * v + (1 - h.beta2) * g.cwiseProduct(g);
    const Vec mh = m / (1 - std::pow(h.beta1, t));
    const Vec vh = v / (1 - std::pow(h.beta2, t));
    q = q.array() - 0.05 * mh.array() / (vh.array().sqrt() + h.eps);
    EXPECT_LE((p - q).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Adam, DeterministicAndRejectsNonFinite) {
  const Vec g = vec({0.3, -0.4});
  const AdamUpdate a = adam_step(AdamState::zeros(2), vec({1.0, 1.0}), g, 1e-3);
  const AdamUpdate b = adam_step(AdamState::zeros(2), vec({1.0, 1.0}), g, 1e-3);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.state.m, b.state.m);
  EXPECT_THROW(adam_step(AdamState::zeros(2), vec({1.0, 1.0}), vec({NAN, 0.0}), 1e-3),
               NumericError);
  EXPECT_THROW(adam_step(AdamState::zeros(2), vec({1.0, 1.0}), vec({0.0, INFINITY}), 1e-3),
               NumericError);
  EXPECT_THROW(adam_step(AdamState::zeros(3), vec({1.0, 1.0}), g, 1e-3), ContractError);
}

TEST(NormalizedCost, Examples) {
  const std::vector<double> c{4.0, 2.0, 1.0};
  EXPECT_EQ(normalized_cost(c), (std::vector<double>{1.0, 0.5, 0.25}));
  EXPECT_EQ(normalized_cost(std::vector<double>{3.0, 3.0, 3.0}),
            (std::vector<double>{1.0, 1.0, 1.0}));
  EXPECT_THROW(normalized_cost(std::vector<double>{0.0, 1.0}), NumericError);
  EXPECT_THROW(normalized_cost(std::vector<double>{}), NumericError);
}

TEST(TrainConfig, PresetsAndValidation) {
  EXPECT_EQ(train_preset("di_lyapunov").epochs, 65);
  EXPECT_EQ(train_preset("cp_balance_lyapunov").epochs, 30);
  EXPECT_EQ(train_preset("twolink_value").epochs, 50);
  EXPECT_EQ(train_preset("cp_swingup_value").epochs, 150);
  EXPECT_EQ(train_preset("cp_balance_lyapunov").initial_conditions, 100);
  EXPECT_DOUBLE_EQ(train_preset("di_lyapunov").horizon, 7.0);
  EXPECT_THROW(train_preset("nope"), ContractError);
  for (const auto& name : train_preset_names()) {
    EXPECT_NO_THROW(validate(train_preset(name))) << name;
  }
  TrainConfig c = train_preset("di_lyapunov");
  c.initial_conditions = 0;
  EXPECT_THROW(validate(c), ContractError);
  c = train_preset("di_lyapunov");
  c.epochs = 0;
  EXPECT_THROW(validate(c), ContractError);
  c = train_preset("di_lyapunov");
  c.learning_rate = 0.0;
  EXPECT_THROW(validate(c), ContractError);
}

TrainConfig short_di(std::uint64_t seed) {
  TrainConfig c = train_preset("di_lyapunov");
  c.seed = seed;
  c.epochs = 8;
  c.horizon = 2.0;
  return c;
}

TEST(Train, CurvesHaveExpectedShape) {
  const TrainResult r = train(short_di(0));
  ASSERT_FALSE(r.failed) << r.failure;
  EXPECT_EQ(r.loss.size(), 9u);
  EXPECT_EQ(r.mean_cost.size(), 9u);
  EXPECT_EQ(r.normalized_cost.size(), 9u);
  EXPECT_EQ(r.wall_ms.size(), 9u);
  EXPECT_EQ(r.normalized_cost.front(), 1.0);
  for (std::size_t e = 0; e < r.mean_cost.size(); ++e) {
    EXPECT_DOUBLE_EQ(r.normalized_cost[e], r.mean_cost[e] / r.mean_cost[0]);
  }
}

TEST(Train, BitIdenticalAcrossRunsAndWorkerCounts) {
  TrainConfig c = short_di(4);
  const TrainResult a = train(c);
  const TrainResult b = train(c);
  c.workers = 3;
  const TrainResult w = train(c);
  EXPECT_EQ(a.loss, b.loss);
  EXPECT_EQ(a.mean_cost, b.mean_cost);
  EXPECT_EQ(a.network.params(), b.network.params());
  EXPECT_EQ(a.loss, w.loss);
  EXPECT_EQ(a.network.params(), w.network.params());

  const TrainResult other = train(short_di(5));
  EXPECT_NE(a.loss, other.loss);
}

TEST(Train, IcnnConstraintsHoldEveryEpoch) {
  TrainConfig c = short_di(1);
  c.learning_rate = 5e-2;  // large steps push weights across zero
  int checked = 0;
  const TrainResult r = train(c, [&](int, const ValueNetwork& net) {
    for (const auto& layer : net.layers()) {
      if (!layer.nonnegative_w) continue;
      for (int k = 0; k < layer.in * layer.out; ++k) {
        ASSERT_GE(net.params()(Eigen::Index(layer.w_offset) + k), 0.0);
      }
    }
    ++checked;
  });
  ASSERT_FALSE(r.failed) << r.failure;
  EXPECT_EQ(checked, c.epochs + 1);
}

TEST(Train, NumericFailureKeepsPartialCurves) {
  const TrainResult r = train(short_di(2), [](int epoch, const ValueNetwork&) {
    if (epoch == 3) throw NumericError("injected");
  });
  EXPECT_TRUE(r.failed);
  EXPECT_NE(r.failure.find("injected"), std::string::npos);
  EXPECT_EQ(r.loss.size(), 4u);
  EXPECT_EQ(r.wall_ms.size(), 3u);
  EXPECT_EQ(r.normalized_cost.size(), 4u);
}

TEST(Train, RejectsMismatchedNetwork) {
  TrainConfig c = short_di(0);
  c.network = "cp_icnn";
  EXPECT_THROW(train(c), ContractError);
}

TEST(Train, DoubleIntegratorLossDecreasesForEverySeed) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    TrainConfig c = train_preset("di_lyapunov");
    c.seed = seed;
    const TrainResult r = train(c);
    ASSERT_FALSE(r.failed) << r.failure;
    EXPECT_LT(r.loss.back(), r.loss.front()) << "seed " << seed;
  }
}

TEST(LyapunovDescent, RiccatiQuadraticDecreasesEveryStep) {
  const auto env = make_env("di");
  const Mat a = (Mat(2, 2) << 0, 1, 0, 0).finished();
  const Mat b = (Mat(2, 1) << 0, 1).finished();
  const QuadraticValue v(oracle::care(a, b, env->Q(), env->R()));
  const std::vector<Vec> batch = held_out_initial(*env, 0, 20);
  const DescentStats s = lyapunov_descent(v, *env, batch, TimeGrid::make(7.0, 0.01));
  EXPECT_EQ(s.steps, 20 * 700);
  EXPECT_EQ(s.violations, 0);
}

TEST(LyapunovDescent, GrowingFunctionViolates) {
  const auto env = make_env("di");
  const QuadraticValue v([](double t) { return Mat(Mat::Identity(2, 2) * (1.0 + t)); },
                         [](double) { return Mat(Mat::Identity(2, 2)); });
  const std::vector<Vec> batch{vec({1.0, 0.0})};
  const DescentStats s = lyapunov_descent(v, *env, batch, TimeGrid::make(1.0, 0.01), 0.0);
  EXPECT_GT(s.violation_fraction(), 0.5);
}

TEST(HeldOut, DisjointFromTrainingStream) {
  const auto env = make_env("di");
  std::mt19937_64 rng(0 ^ 0x9E3779B97F4A7C15ULL);
  const std::vector<Vec> train_batch = env->sample_initial(rng, 20);
  const std::vector<Vec> held = held_out_initial(*env, 0, 20);
  for (const Vec& x : held) {
    for (const Vec& y : train_batch) EXPECT_NE(x, y);
  }
  EXPECT_EQ(held, held_out_initial(*env, 0, 20));
}

}  // namespace
}  // namespace hjbl
