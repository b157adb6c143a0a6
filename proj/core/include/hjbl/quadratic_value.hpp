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

#include <functional>

#include "hjbl/value_function.hpp"

namespace hjbl {

// Diagnostic v(x, t) = x' P(t) x with no trainable parameters, e.g. a
// Riccati solution. If no derivative of P is given it is taken as zero.
class QuadraticValue final : public ValueFunction {
 public:
  using MatrixOfTime = std::function<Mat(double)>;

  explicit QuadraticValue(Mat p);
  QuadraticValue(MatrixOfTime p, MatrixOfTime p_dot = {});

  int state_dim() const override { return dim_; }
  int param_count() const override { return 0; }

  double value(const Vec& x, double t) const override;
  InputDerivatives input_derivatives(const Vec& x, double t) const override;
  void accumulate_param_gradient(const Vec&, double, double, std::span<double>) const override {}
  Vec accumulate_second_order(const Vec& x, double t, const Vec& w, double scale,
                              std::span<double> h_theta) const override;

 private:
  MatrixOfTime p_;
  MatrixOfTime p_dot_;
  int dim_;
};

}  // namespace hjbl
