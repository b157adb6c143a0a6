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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hjbl/value_function.hpp"

namespace hjbl {

enum class NetworkKind { kFcn, kIcnnPd };

std::string to_string(NetworkKind kind);
NetworkKind network_kind_from_string(const std::string& name);

// Softplus multilayer network over the input [x; t].
//
// kFcn:    plain fully connected network, linear output.
// kIcnnPd: input convex network F(y) with nonnegative weights on the z-path
//          and input passthrough on every layer, wrapped as
//
//            v(x, t) = F(x, t) - F(0, t) - F_x(0, t) x + eps |x|^2
//
//          F is convex in x, so the bracket is nonnegative and vanishes at
//          x = 0. This gives v(0, t) = 0 and v >= eps |x|^2.
class ValueNetwork final : public ValueFunction {
 public:
  struct Layer {
    int in = 0;   // width of the previous hidden layer (0 for the first ICNN layer)
    int out = 0;
    bool has_w = false;  // z-path weight, out x in, row major
    bool has_a = false;  // input passthrough, out x (n + 1), row major
    bool nonnegative_w = false;
    std::size_t w_offset = 0;
    std::size_t a_offset = 0;
    std::size_t b_offset = 0;
  };

  ValueNetwork(NetworkKind kind, std::vector<int> layer_widths,
               double epsilon = 0.1);

  // Uniform fan-in initialisation followed by projection for ICNNs.
  static ValueNetwork initialized(NetworkKind kind, std::vector<int> layer_widths,
                                  std::uint64_t seed, double epsilon = 0.1);

  NetworkKind kind() const { return kind_; }
  const std::vector<int>& layer_widths() const { return widths_; }
  const std::vector<Layer>& layers() const { return layers_; }
  double epsilon() const { return epsilon_; }
  const std::string& activation() const { return activation_; }

  const Vec& params() const { return params_; }
  void set_params(const Vec& params);
  ValueNetwork with_params(const Vec& params) const;

  int state_dim() const override { return widths_.front() - 1; }
  int param_count() const override { return int(params_.size()); }

  double value(const Vec& x, double t) const override;
  InputDerivatives input_derivatives(const Vec& x, double t) const override;
  void accumulate_param_gradient(const Vec& x, double t, double scale,
                                 std::span<double> out) const override;
  Vec accumulate_second_order(const Vec& x, double t, const Vec& w, double scale,
                              std::span<double> h_theta) const override;

  // Clamps z-path weights at zero. Returns false (and leaves parameters
  // untouched) for networks without a nonnegative path.
  bool project_icnn();

  // Raw network F(y) without the positive-definite wrapper.
  double raw_value(const Vec& y) const;

 private:
  struct Sink {
    std::span<double> out;
    double scale = 0.0;
    bool active() const { return !out.empty(); }
  };
  struct RawResult {
    double value = 0.0;
    Vec grad_y;
    Vec hess_dir_y;  // H_yy d, empty without a direction
  };

  // One forward/backward sweep at y. With a direction d the backward sweep
  // also carries tangents, yielding H_yy d and d/dtheta (F_y . d).
  RawResult raw_pass(const Vec& y, const Vec* direction, Sink grad_sink,
                     Sink dir_sink) const;

  Vec augment(const Vec& x, double t) const;

  NetworkKind kind_;
  std::vector<int> widths_;
  std::vector<Layer> layers_;
  double epsilon_;
  std::string activation_ = "softplus";
  Vec params_;
};

// Named architectures used by the experiment presets.
struct NetworkPreset {
  NetworkKind kind;
  std::vector<int> layer_widths;
};

NetworkPreset network_preset(const std::string& name);

}  // namespace hjbl
