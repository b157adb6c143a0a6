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

#include "hjbl/quadratic_value.hpp"

namespace hjbl {

QuadraticValue::QuadraticValue(Mat p)
    : QuadraticValue(MatrixOfTime([p](double) { return p; })) {}

QuadraticValue::QuadraticValue(MatrixOfTime p, MatrixOfTime p_dot)
    : p_(std::move(p)), p_dot_(std::move(p_dot)) {
  const Mat p0 = p_(0.0);
  require(p0.rows() == p0.cols() && p0.rows() > 0, "quadratic value needs a square matrix");
  dim_ = int(p0.rows());
}

double QuadraticValue::value(const Vec& x, double t) const {
  check_input(x, t);
  return x.dot(p_(t) * x);
}

InputDerivatives QuadraticValue::input_derivatives(const Vec& x, double t) const {
  check_input(x, t);
  const Mat p = p_(t);
  InputDerivatives out;
  out.value = x.dot(p * x);
  out.grad_x = (p + p.transpose()) * x;
  out.grad_t = p_dot_ ? x.dot(p_dot_(t) * x) : 0.0;
  return out;
}

Vec QuadraticValue::accumulate_second_order(const Vec& x, double t, const Vec& w, double,
                                            std::span<double>) const {
  check_input(x, t);
  require(w.size() == dim_, "second_order_vjp: direction has wrong dimension");
  const Mat p = p_(t);
  return (p + p.transpose()) * w;
}

}  // namespace hjbl
