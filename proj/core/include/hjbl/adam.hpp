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

#include "hjbl/common.hpp"

namespace hjbl {

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  Vec m;
  Vec v;
  long step = 0;

  static AdamState zeros(Eigen::Index size) { return {Vec::Zero(size), Vec::Zero(size), 0}; }
};

struct AdamUpdate {
  AdamState state;
  Vec params;
};

// One bias-corrected Adam step. Throws NumericError on non-finite gradients.
AdamUpdate adam_step(const AdamState& state, const Vec& params, const Vec& grads, double lr,
                     const AdamHyper& hyper = {});

}  // namespace hjbl
