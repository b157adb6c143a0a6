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

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <random>

#include <Eigen/Dense>

namespace testing_support {

inline Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(Eigen::Index(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

// |value - reference| / max(|reference|, floor). The floor keeps coordinates
// whose true value is at rounding level from dominating the comparison.
inline double rel_err(double value, double reference, double floor = 1e-12) {
  return std::abs(value - reference) / std::max(std::abs(reference), floor);
}

inline double max_rel_err(const Eigen::VectorXd& value, const Eigen::VectorXd& reference,
                          double floor) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < value.size(); ++i) {
    worst = std::max(worst, rel_err(value(i), reference(i), floor));
  }
  return worst;
}

inline Eigen::VectorXd uniform_vec(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace testing_support
