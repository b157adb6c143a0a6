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

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "hjbl/common.hpp"
#include "hjbl/dual.hpp"
#include "hjbl/encoded_value.hpp"

namespace hjbl {

// Axis-aligned box sampled uniformly.
struct InitialRegion {
  Vec lower;
  Vec upper;
};

struct DynamicsVjp {
  Vec x_part;  // a' d(f + g u)/dx, u held fixed
  Vec u_part;  // a' g(x)
};

// x_dot = f(x) + g(x) u. Concrete systems provide the dynamics as a template
// over the scalar type; Jacobian contractions are exact via dual numbers.
class ControlAffineSystem {
 public:
  virtual ~ControlAffineSystem() = default;

  const std::string& name() const { return name_; }
  int state_dim() const { return n_; }
  int control_dim() const { return m_; }
  const Mat& Q() const { return q_; }
  const Mat& R() const { return r_; }
  const Vec& goal() const { return goal_; }
  const StateEncoding& encoding() const { return encoding_; }
  const InitialRegion& initial_region() const { return region_; }
  void set_initial_region(InitialRegion region);
  // Replaces Q and R; throws unless Q is symmetric PSD and R symmetric PD.
  void set_costs(Mat q, Mat r);

  // Physical parameters by name (masses kg, lengths m, gravity m/s^2, ...).
  virtual std::map<std::string, double> physical_parameters() const { return {}; }

  Vec dynamics(const Vec& x, const Vec& u) const;
  Mat input_matrix(const Vec& x) const;
  DynamicsVjp dynamics_vjp(const Vec& x, const Vec& u, const Vec& a) const;
  // d/dx (a' g(x) s) with a and s held fixed.
  Vec input_matrix_vjp(const Vec& x, const Vec& s, const Vec& a) const;
  // False when g is constant, letting callers skip input_matrix_vjp.
  virtual bool state_dependent_input() const { return true; }

  Vec encode(const Vec& raw) const { return encoding_.encode(raw); }
  std::vector<Vec> sample_initial(std::mt19937_64& rng, int count) const;

 protected:
  ControlAffineSystem(std::string name, int n, int m, Mat q, Mat r, Vec goal,
                      StateEncoding encoding, InitialRegion region);

  virtual void evaluate(const double* x, const double* u, double* x_dot) const = 0;
  virtual void evaluate(const Dual* x, const Dual* u, Dual* x_dot) const = 0;

 private:
  void check(const Vec& x, const Vec& u) const;

  std::string name_;
  int n_;
  int m_;
  Mat q_;
  Mat r_;
  Vec goal_;
  StateEncoding encoding_;
  InitialRegion region_;
};

// x = [position, velocity], u = [acceleration].
class DoubleIntegrator final : public ControlAffineSystem {
 public:
  DoubleIntegrator();
  bool state_dependent_input() const override { return false; }

 protected:
  void evaluate(const double* x, const double* u, double* x_dot) const override { eval(x, u, x_dot); }
  void evaluate(const Dual* x, const Dual* u, Dual* x_dot) const override { eval(x, u, x_dot); }

 private:
  template <class S>
  void eval(const S* x, const S* u, S* x_dot) const {
    x_dot[0] = x[1];
    x_dot[1] = u[0];
  }
};

struct CartpoleParameters {
  double cart_mass = 1.0;   // kg
  double pole_mass = 0.1;   // kg
  double pole_length = 0.5; // m, pivot to point mass
  double gravity = 9.81;    // m/s^2
};

// x = [cart position, pole angle (0 = upright), cart velocity, pole rate],
// u = [horizontal force on the cart]. Point-mass pole.
class Cartpole final : public ControlAffineSystem {
 public:
  enum class Task { kBalance, kSwingup };

  Cartpole(Task task, CartpoleParameters params = {});
  const CartpoleParameters& parameters() const { return params_; }
  std::map<std::string, double> physical_parameters() const override;

 protected:
  void evaluate(const double* x, const double* u, double* x_dot) const override { eval(x, u, x_dot); }
  void evaluate(const Dual* x, const Dual* u, Dual* x_dot) const override { eval(x, u, x_dot); }

 private:
  template <class S>
  void eval(const S* x, const S* u, S* x_dot) const {
    using std::cos;
    using std::sin;
    const double mc = params_.cart_mass, mp = params_.pole_mass;
    const double l = params_.pole_length, g = params_.gravity;
    const S s = sin(x[1]);
    const S c = cos(x[1]);
    const S denom = S(mc) + S(mp) * s * s;
    x_dot[0] = x[2];
    x_dot[1] = x[3];
    x_dot[2] = (u[0] - S(mp) * s * (S(l) * x[3] * x[3] - S(g) * c)) / denom;
    x_dot[3] = (u[0] * c - S(mp * l) * x[3] * x[3] * c * s + S((mc + mp) * g) * s) /
               (S(l) * denom);
  }

  CartpoleParameters params_;
};

struct TwoLinkParameters {
  double m1 = 1.4, m2 = 1.0;     // kg
  double l1 = 0.30, l2 = 0.33;   // m
  double s1 = 0.11, s2 = 0.16;   // m, joint to centre of mass
  double i1 = 0.025, i2 = 0.045; // kg m^2
  double b11 = 0.05, b12 = 0.025, b21 = 0.025, b22 = 0.05;  // joint friction
};

// Planar arm in the horizontal plane: x = [q1, q2, q1_dot, q2_dot],
// u = joint torques. M(q) q_ddot + C(q, q_dot) + B q_dot = u.
class TwoLinkArm final : public ControlAffineSystem {
 public:
  explicit TwoLinkArm(TwoLinkParameters params = {});
  const TwoLinkParameters& parameters() const { return params_; }
  std::map<std::string, double> physical_parameters() const override;

  double kinetic_energy(const Vec& x) const;

 protected:
  void evaluate(const double* x, const double* u, double* x_dot) const override { eval(x, u, x_dot); }
  void evaluate(const Dual* x, const Dual* u, Dual* x_dot) const override { eval(x, u, x_dot); }

 private:
  template <class S>
  void eval(const S* x, const S* u, S* x_dot) const {
    using std::cos;
    using std::sin;
    const auto& p = params_;
    const double a1 = p.i1 + p.i2 + p.m2 * p.l1 * p.l1;
    const double a2 = p.m2 * p.l1 * p.s2;
    const double a3 = p.i2;
    const S c2 = cos(x[1]);
    const S s2 = sin(x[1]);
    const S m11 = S(a1) + S(2.0 * a2) * c2;
    const S m12 = S(a3) + S(a2) * c2;
    const S m22 = S(a3);
    const S cor1 = -S(a2) * s2 * x[3] * (S(2.0) * x[2] + x[3]);
    const S cor2 = S(a2) * s2 * x[2] * x[2];
    const S r1 = u[0] - cor1 - S(p.b11) * x[2] - S(p.b12) * x[3];
    const S r2 = u[1] - cor2 - S(p.b21) * x[2] - S(p.b22) * x[3];
    const S det = m11 * m22 - m12 * m12;
    x_dot[0] = x[2];
    x_dot[1] = x[3];
    x_dot[2] = (m22 * r1 - m12 * r2) / det;
    x_dot[3] = (m11 * r2 - m12 * r1) / det;
  }

  TwoLinkParameters params_;
};

// Presets: "di", "cartpole_balance", "cartpole_swingup", "twolink".
// Overrides replace physical parameters by name; unknown names are rejected.
std::unique_ptr<ControlAffineSystem> make_env(
    const std::string& name, const std::map<std::string, double>& overrides = {});

std::vector<std::string> env_names();

}  // namespace hjbl
