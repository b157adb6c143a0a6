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

#include "hjbl/trajectory.hpp"

#include <cmath>
#include <string>

namespace hjbl {

double Trajectory::integrated_cost(bool include_control) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < state_costs.size(); ++k) {
    sum += state_costs[k] + (include_control ? control_costs[k] : 0.0);
  }
  return grid.dt * sum;
}

TimeGrid TimeGrid::make(double horizon, double dt) {
  require(std::isfinite(horizon) && horizon > 0.0, "time grid: horizon must be positive");
  require(std::isfinite(dt) && dt > 0.0, "time grid: dt must be positive");
  const double k = std::round(horizon / dt);
  require(k >= 1.0, "time grid: needs at least one step");
  require(std::abs(k * dt - horizon) <= 1e-9,
          "time grid: horizon " + std::to_string(horizon) + " is not a multiple of dt " +
              std::to_string(dt));
  return {horizon, dt, int(k)};
}

}  // namespace hjbl
