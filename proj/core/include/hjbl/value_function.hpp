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

#include <cmath>
#include <span>

#include "hjbl/common.hpp"

namespace hjbl {

struct InputDerivatives {
  double value = 0.0;
  Vec grad_x;         // dv/dx
  double grad_t = 0;  // dv/dt
};

struct SecondOrder {
  Vec h_x;      // d/dx (v_x . w)
  Vec h_theta;  // d/dtheta (v_x . w)
};

// Scalar time-varying function v(x, t; theta) with the derivatives the
// closed-loop adjoint needs. Implementations are immutable during evaluation
// and safe to call from several threads.
class ValueFunction {
 public:
  virtual ~ValueFunction() = default;

  virtual int state_dim() const = 0;
  virtual int param_count() const = 0;

  virtual double value(const Vec& x, double t) const = 0;
  virtual InputDerivatives input_derivatives(const Vec& x, double t) const = 0;

  // out += scale * dv/dtheta
  virtual void accumulate_param_gradient(const Vec& x, double t, double scale,
                                         std::span<double> out) const = 0;

  // Returns d/dx (v_x . w); h_theta += scale * d/dtheta (v_x . w).
  virtual Vec accumulate_second_order(const Vec& x, double t, const Vec& w,
                                      double scale,
                                      std::span<double> h_theta) const = 0;

  Vec param_gradient(const Vec& x, double t) const {
    Vec g = Vec::Zero(param_count());
    accumulate_param_gradient(x, t, 1.0, {g.data(), size_t(g.size())});
    return g;
  }

  SecondOrder second_order_vjp(const Vec& x, double t, const Vec& w) const {
    SecondOrder r;
    r.h_theta = Vec::Zero(param_count());
    r.h_x = accumulate_second_order(x, t, w, 1.0,
                                    {r.h_theta.data(), size_t(r.h_theta.size())});
    return r;
  }

 protected:
  void check_input(const Vec& x, double t) const {
    require(x.size() == state_dim(),
            "value function: state has dimension " + std::to_string(x.size()) +
                ", expected " + std::to_string(state_dim()));
    require(std::isfinite(t), "value function: time must be finite");
  }
};

}  // namespace hjbl
