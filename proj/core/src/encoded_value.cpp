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

#include "hjbl/encoded_value.hpp"

#include <cmath>

namespace hjbl {

Vec StateEncoding::encode(const Vec& raw) const {
  Vec e = raw;
  for (int i : cosine_indices) e(i) = std::cos(raw(i)) - 1.0;
  return e;
}

Vec StateEncoding::first_derivative(const Vec& raw) const {
  Vec d = Vec::Ones(raw.size());
  for (int i : cosine_indices) d(i) = -std::sin(raw(i));
  return d;
}

Vec StateEncoding::second_derivative(const Vec& raw) const {
  Vec d = Vec::Zero(raw.size());
  for (int i : cosine_indices) d(i) = -std::cos(raw(i));
  return d;
}

EncodedValue::EncodedValue(const ValueFunction& inner, StateEncoding encoding)
    : inner_(inner), encoding_(std::move(encoding)) {
  for (int i : encoding_.cosine_indices) {
    require(i >= 0 && i < inner_.state_dim(), "encoding index out of range");
  }
}

double EncodedValue::value(const Vec& x, double t) const {
  check_input(x, t);
  return inner_.value(encoding_.encode(x), t);
}

InputDerivatives EncodedValue::input_derivatives(const Vec& x, double t) const {
  check_input(x, t);
  if (encoding_.identity()) return inner_.input_derivatives(x, t);
  InputDerivatives r = inner_.input_derivatives(encoding_.encode(x), t);
  r.grad_x = r.grad_x.cwiseProduct(encoding_.first_derivative(x));
  return r;
}

void EncodedValue::accumulate_param_gradient(const Vec& x, double t, double scale,
                                             std::span<double> out) const {
  check_input(x, t);
  inner_.accumulate_param_gradient(encoding_.encode(x), t, scale, out);
}

Vec EncodedValue::accumulate_second_order(const Vec& x, double t, const Vec& w,
                                          double scale, std::span<double> h_theta) const {
  check_input(x, t);
  if (encoding_.identity()) return inner_.accumulate_second_order(x, t, w, scale, h_theta);
  const Vec e = encoding_.encode(x);
  const Vec d1 = encoding_.first_derivative(x);
  const Vec d2 = encoding_.second_derivative(x);
  const Vec h = inner_.accumulate_second_order(e, t, d1.cwiseProduct(w), scale, h_theta);
  const Vec inner_grad = inner_.input_derivatives(e, t).grad_x;
  return d1.cwiseProduct(h) + d2.cwiseProduct(w).cwiseProduct(inner_grad);
}

}  // namespace hjbl
