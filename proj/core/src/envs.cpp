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

#include "hjbl/envs.hpp"

#include <numbers>

namespace hjbl {
namespace {

Mat diag(std::initializer_list<double> values) {
  Vec d(Eigen::Index(values.size()));
  Eigen::Index i = 0;
  for (double v : values) d(i++) = v;
  return d.asDiagonal();
}

Vec vec(std::initializer_list<double> values) {
  Vec v(Eigen::Index(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

void check_cost_matrices(const Mat& q, const Mat& r, int n, int m) {
  require(q.rows() == n && q.cols() == n, "Q must be n x n");
  require(r.rows() == m && r.cols() == m, "R must be m x m");
  require((q - q.transpose()).cwiseAbs().maxCoeff() <= 1e-12, "Q must be symmetric");
  require((r - r.transpose()).cwiseAbs().maxCoeff() <= 1e-12, "R must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> eig(q);
  require(eig.eigenvalues().minCoeff() >= -1e-12, "Q must be positive semidefinite");
  Eigen::LLT<Mat> llt(r);
  require(llt.info() == Eigen::Success, "R must be positive definite");
}

void apply_overrides(std::map<std::string, double*> fields,
                     const std::map<std::string, double>& overrides, const std::string& env) {
  for (const auto& [key, value] : overrides) {
    auto it = fields.find(key);
    if (it == fields.end()) {
      throw ContractError("environment '" + env + "' has no parameter '" + key + "'");
    }
    *it->second = value;
  }
}

}  // namespace

ControlAffineSystem::ControlAffineSystem(std::string name, int n, int m, Mat q, Mat r,
                                         Vec goal, StateEncoding encoding,
                                         InitialRegion region)
    : name_(std::move(name)),
      n_(n),
      m_(m),
      q_(std::move(q)),
      r_(std::move(r)),
      goal_(std::move(goal)),
      encoding_(std::move(encoding)) {
  check_cost_matrices(q_, r_, n_, m_);
  require(goal_.size() == n_, "goal has wrong dimension");
  set_initial_region(std::move(region));
}

void ControlAffineSystem::set_costs(Mat q, Mat r) {
  check_cost_matrices(q, r, n_, m_);
  q_ = std::move(q);
  r_ = std::move(r);
}

void ControlAffineSystem::set_initial_region(InitialRegion region) {
  require(region.lower.size() == n_ && region.upper.size() == n_,
          "initial region has wrong dimension");
  require((region.lower.array() <= region.upper.array()).all(),
          "initial region lower bound exceeds upper bound");
  region_ = std::move(region);
}

void ControlAffineSystem::check(const Vec& x, const Vec& u) const {
  require(x.size() == n_, name_ + ": state has dimension " + std::to_string(x.size()) +
                              ", expected " + std::to_string(n_));
  require(u.size() == m_, name_ + ": control has dimension " + std::to_string(u.size()) +
                              ", expected " + std::to_string(m_));
  if (!x.allFinite() || !u.allFinite()) {
    throw NumericError(name_ + ": non-finite state or control");
  }
}

Vec ControlAffineSystem::dynamics(const Vec& x, const Vec& u) const {
  check(x, u);
  Vec out(n_);
  evaluate(x.data(), u.data(), out.data());
  return out;
}

Mat ControlAffineSystem::input_matrix(const Vec& x) const {
  check(x, Vec::Zero(m_));
  std::vector<Dual> xd(x.data(), x.data() + n_), ud(m_), out(n_);
  Mat g(n_, m_);
  for (int j = 0; j < m_; ++j) {
    for (int k = 0; k < m_; ++k) ud[k] = Dual(0.0, k == j ? 1.0 : 0.0);
    evaluate(xd.data(), ud.data(), out.data());
    for (int i = 0; i < n_; ++i) g(i, j) = out[i].d;
  }
  return g;
}

DynamicsVjp ControlAffineSystem::dynamics_vjp(const Vec& x, const Vec& u, const Vec& a) const {
  check(x, u);
  require(a.size() == n_, name_ + ": adjoint has wrong dimension");
  std::vector<Dual> xd(n_), ud(u.data(), u.data() + m_), out(n_);
  DynamicsVjp r;
  r.x_part.resize(n_);
  for (int j = 0; j < n_; ++j) {
    for (int k = 0; k < n_; ++k) xd[k] = Dual(x(k), k == j ? 1.0 : 0.0);
    evaluate(xd.data(), ud.data(), out.data());
    double acc = 0.0;
    for (int i = 0; i < n_; ++i) acc += a(i) * out[i].d;
    r.x_part(j) = acc;
  }
  r.u_part = input_matrix(x).transpose() * a;
  return r;
}

Vec ControlAffineSystem::input_matrix_vjp(const Vec& x, const Vec& s, const Vec& a) const {
  if (!state_dependent_input()) return Vec::Zero(n_);
  return dynamics_vjp(x, s, a).x_part - dynamics_vjp(x, Vec::Zero(m_), a).x_part;
}

std::vector<Vec> ControlAffineSystem::sample_initial(std::mt19937_64& rng, int count) const {
  require(count >= 1, "sample_initial: count must be at least 1");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vec> out;
  out.reserve(std::size_t(count));
  for (int k = 0; k < count; ++k) {
    Vec x(n_);
    for (int i = 0; i < n_; ++i) {
      x(i) = region_.lower(i) + (region_.upper(i) - region_.lower(i)) * unit(rng);
    }
    out.push_back(std::move(x));
  }
  return out;
}

DoubleIntegrator::DoubleIntegrator()
    : ControlAffineSystem("di", 2, 1, diag({1.0, 0.0}), diag({0.1}), Vec::Zero(2), {},
                          {vec({-1.0, -1.0}), vec({1.0, 1.0})}) {}

namespace {

InitialRegion cartpole_region(Cartpole::Task task) {
  if (task == Cartpole::Task::kBalance) {
    return {vec({-0.2, -0.15, -0.1, -0.1}), vec({0.2, 0.15, 0.1, 0.1})};
  }
  const double pi = std::numbers::pi;
  return {vec({-0.05, pi - 0.05, -0.05, -0.05}), vec({0.05, pi + 0.05, 0.05, 0.05})};
}

}  // namespace

Cartpole::Cartpole(Task task, CartpoleParameters params)
    : ControlAffineSystem(
          task == Task::kBalance ? "cartpole_balance" : "cartpole_swingup", 4, 1,
          task == Task::kBalance ? diag({0.5, 1.0, 0.01, 0.01}) : diag({1.0, 1.0, 0.1, 0.1}),
          diag({0.1}), Vec::Zero(4), StateEncoding{{1}}, cartpole_region(task)),
      params_(params) {
  require(params_.cart_mass > 0 && params_.pole_mass > 0 && params_.pole_length > 0,
          "cartpole masses and length must be positive");
}

std::map<std::string, double> Cartpole::physical_parameters() const {
  return {{"cart_mass", params_.cart_mass},
          {"pole_mass", params_.pole_mass},
          {"pole_length", params_.pole_length},
          {"gravity", params_.gravity}};
}

TwoLinkArm::TwoLinkArm(TwoLinkParameters params)
    : ControlAffineSystem("twolink", 4, 2, diag({1.0, 1.0, 0.1, 0.1}), diag({0.15, 0.15}),
                          Vec::Zero(4), {},
                          {vec({-std::numbers::pi / 2, -std::numbers::pi / 2, 0.0, 0.0}),
                           vec({std::numbers::pi / 2, std::numbers::pi / 2, 0.0, 0.0})}),
      params_(params) {
  require(params_.i1 > 0 && params_.i2 > 0 && params_.m2 > 0, "two-link inertias must be positive");
}

std::map<std::string, double> TwoLinkArm::physical_parameters() const {
  const auto& p = params_;
  return {{"m1", p.m1}, {"m2", p.m2}, {"l1", p.l1}, {"l2", p.l2},   {"s1", p.s1},
          {"s2", p.s2}, {"i1", p.i1}, {"i2", p.i2}, {"b11", p.b11}, {"b12", p.b12},
          {"b21", p.b21}, {"b22", p.b22}};
}

double TwoLinkArm::kinetic_energy(const Vec& x) const {
  const auto& p = params_;
  const double a1 = p.i1 + p.i2 + p.m2 * p.l1 * p.l1;
  const double a2 = p.m2 * p.l1 * p.s2;
  const double a3 = p.i2;
  const double c2 = std::cos(x(1));
  Eigen::Matrix2d m;
  m << a1 + 2 * a2 * c2, a3 + a2 * c2, a3 + a2 * c2, a3;
  const Eigen::Vector2d qd(x(2), x(3));
  return 0.5 * qd.dot(m * qd);
}

std::unique_ptr<ControlAffineSystem> make_env(const std::string& name,
                                              const std::map<std::string, double>& overrides) {
  if (name == "di") {
    apply_overrides({}, overrides, name);
    return std::make_unique<DoubleIntegrator>();
  }
  if (name == "cartpole_balance" || name == "cartpole_swingup") {
    CartpoleParameters p;
    apply_overrides({{"cart_mass", &p.cart_mass},
                     {"pole_mass", &p.pole_mass},
                     {"pole_length", &p.pole_length},
                     {"gravity", &p.gravity}},
                    overrides, name);
    return std::make_unique<Cartpole>(
        name == "cartpole_balance" ? Cartpole::Task::kBalance : Cartpole::Task::kSwingup, p);
  }
  if (name == "twolink") {
    TwoLinkParameters p;
    apply_overrides({{"m1", &p.m1}, {"m2", &p.m2}, {"l1", &p.l1}, {"l2", &p.l2},
                     {"s1", &p.s1}, {"s2", &p.s2}, {"i1", &p.i1}, {"i2", &p.i2},
                     {"b11", &p.b11}, {"b12", &p.b12}, {"b21", &p.b21}, {"b22", &p.b22}},
                    overrides, name);
    return std::make_unique<TwoLinkArm>(p);
  }
  throw ContractError("unknown environment '" + name + "'");
}

std::vector<std::string> env_names() {
  return {"di", "cartpole_balance", "cartpole_swingup", "twolink"};
}

}  // namespace hjbl
