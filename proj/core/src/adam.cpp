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

#include "hjbl/adam.hpp"

#include <cmath>

namespace hjbl {

AdamUpdate adam_step(const AdamState& state, const Vec& params, const Vec& grads, double lr,
                     const AdamHyper& hyper) {
  require(params.size() == grads.size() && state.m.size() == params.size() &&
              state.v.size() == params.size(),
          "adam_step: shapes disagree");
  require(lr > 0.0, "adam_step: learning rate must be positive");
  if (!grads.allFinite()) throw NumericError("adam_step: non-finite gradient");

  AdamUpdate out;
  out.state.step = state.step + 1;
  out.state.m = hyper.beta1 * state.m + (1.0 - hyper.beta1) * grads;
  out.state.v = hyper.beta2 * state.v + (1.0 - hyper.beta2) * grads.cwiseAbs2();
  const double c1 = 1.0 - std::pow(hyper.beta1, double(out.state.step));
  const double c2 = 1.0 - std::pow(hyper.beta2, double(out.state.step));
  out.params = params.array() - lr * (out.state.m.array() / c1) /
                                    ((out.state.v.array() / c2).sqrt() + hyper.eps);
  return out;
}

}  // namespace hjbl
