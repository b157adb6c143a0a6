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

#include "hjbl/common.hpp"

namespace hjbl {

// Fixed integration grid: K steps of dt seconds covering [0, T].
struct TimeGrid {
  double horizon = 0.0;  // T, seconds
  double dt = 0.0;       // seconds
  int steps = 0;         // K

  // Throws unless T is an integer multiple of dt (within 1e-9) and K >= 1.
  static TimeGrid make(double horizon, double dt);

  double time(int k) const { return k * dt; }
};

// Forward-Euler closed-loop trajectory. Costs are evaluated in encoded
// coordinates: state_costs[k] = e_k' Q e_k, control_costs[k] = u_k' R u_k.
struct Trajectory {
  TimeGrid grid;
  std::vector<Vec> states;    // K + 1
  std::vector<Vec> controls;  // K
  std::vector<double> state_costs;
  std::vector<double> control_costs;

  // dt * sum of the recorded integrand (left rectangle rule).
  double integrated_cost(bool include_control = true) const;
};

}  // namespace hjbl
