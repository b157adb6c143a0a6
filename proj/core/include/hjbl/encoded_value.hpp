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

#include <vector>

#include "hjbl/value_function.hpp"

namespace hjbl {

// Elementwise state encoding: selected revolute coordinates q are replaced
// by cos(q) - 1, everything else passes through.
struct StateEncoding {
  std::vector<int> cosine_indices;

  bool identity() const { return cosine_indices.empty(); }
  Vec encode(const Vec& raw) const;
  Vec first_derivative(const Vec& raw) const;   // diagonal of the Jacobian
  Vec second_derivative(const Vec& raw) const;  // diagonal second derivative
};

// v(x, t) = inner(encode(x), t), differentiated in physical coordinates.
// Holds a reference; the inner function must outlive the adapter.
class EncodedValue final : public ValueFunction {
 public:
  EncodedValue(const ValueFunction& inner, StateEncoding encoding);

  int state_dim() const override { return inner_.state_dim(); }
  int param_count() const override { return inner_.param_count(); }

  double value(const Vec& x, double t) const override;
  InputDerivatives input_derivatives(const Vec& x, double t) const override;
  void accumulate_param_gradient(const Vec& x, double t, double scale,
                                 std::span<double> out) const override;
  Vec accumulate_second_order(const Vec& x, double t, const Vec& w, double scale,
                              std::span<double> h_theta) const override;

  const ValueFunction& inner() const { return inner_; }

 private:
  const ValueFunction& inner_;
  StateEncoding encoding_;
};

}  // namespace hjbl
