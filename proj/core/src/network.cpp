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

#include "hjbl/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace hjbl {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstRowMap = Eigen::Map<const RowMat>;
using RowMap = Eigen::Map<RowMat>;

double softplus(double s) {
  return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
}

double sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

}  // namespace

std::string to_string(NetworkKind kind) {
  return kind == NetworkKind::kFcn ? "fcn" : "icnn-pd";
}

NetworkKind network_kind_from_string(const std::string& name) {
  if (name == "fcn") return NetworkKind::kFcn;
  if (name == "icnn-pd" || name == "icnn") return NetworkKind::kIcnnPd;
  throw ContractError("unknown network kind '" + name + "'");
}

ValueNetwork::ValueNetwork(NetworkKind kind, std::vector<int> layer_widths,
                           double epsilon)
    : kind_(kind), widths_(std::move(layer_widths)), epsilon_(epsilon) {
  require(widths_.size() >= 2, "network needs at least an input and an output width");
  require(std::all_of(widths_.begin(), widths_.end(), [](int w) { return w > 0; }),
          "layer widths must be positive");
  require(widths_.front() >= 2, "input width must be state dimension + 1");
  require(widths_.back() == 1, "output width must be 1");
  if (kind_ == NetworkKind::kIcnnPd) {
    require(epsilon_ > 0.0, "icnn-pd epsilon must be positive");
  }

  const int d0 = widths_.front();
  std::size_t offset = 0;
  for (std::size_t i = 0; i + 1 < widths_.size(); ++i) {
    Layer layer;
    layer.out = widths_[i + 1];
    if (kind_ == NetworkKind::kFcn) {
      layer.in = widths_[i];
      layer.has_w = true;
    } else {
      layer.in = i == 0 ? 0 : widths_[i];
      layer.has_w = i > 0;
      layer.has_a = true;
      layer.nonnegative_w = i > 0;
    }
    if (layer.has_w) {
      layer.w_offset = offset;
      offset += std::size_t(layer.out) * layer.in;
    }
    if (layer.has_a) {
      layer.a_offset = offset;
      offset += std::size_t(layer.out) * d0;
    }
    layer.b_offset = offset;
    offset += layer.out;
    layers_.push_back(layer);
  }
  params_ = Vec::Zero(Eigen::Index(offset));
}

ValueNetwork ValueNetwork::initialized(NetworkKind kind, std::vector<int> layer_widths,
                                       std::uint64_t seed, double epsilon) {
  ValueNetwork net(kind, std::move(layer_widths), epsilon);
  std::mt19937_64 rng(seed);
  const int d0 = net.widths_.front();
  for (const Layer& layer : net.layers_) {
    const int fan_in = (layer.has_w ? layer.in : 0) + (layer.has_a ? d0 : 0);
    std::uniform_real_distribution<double> dist(-1.0 / std::sqrt(double(fan_in)),
                                                1.0 / std::sqrt(double(fan_in)));
    auto fill = [&](std::size_t offset, std::size_t count) {
      for (std::size_t k = 0; k < count; ++k) net.params_[Eigen::Index(offset + k)] = dist(rng);
    };
    if (layer.has_w) fill(layer.w_offset, std::size_t(layer.out) * layer.in);
    if (layer.has_a) fill(layer.a_offset, std::size_t(layer.out) * d0);
    fill(layer.b_offset, std::size_t(layer.out));
  }
  net.project_icnn();
  return net;
}

void ValueNetwork::set_params(const Vec& params) {
  require(params.size() == params_.size(), "parameter vector has wrong length");
  params_ = params;
}

ValueNetwork ValueNetwork::with_params(const Vec& params) const {
  ValueNetwork copy = *this;
  copy.set_params(params);
  return copy;
}

bool ValueNetwork::project_icnn() {
  if (kind_ != NetworkKind::kIcnnPd) return false;
  for (const Layer& layer : layers_) {
    if (!layer.nonnegative_w) continue;
    auto w = params_.segment(Eigen::Index(layer.w_offset), Eigen::Index(layer.out) * layer.in);
    w = w.cwiseMax(0.0);
  }
  return true;
}

Vec ValueNetwork::augment(const Vec& x, double t) const {
  check_input(x, t);
  Vec y(x.size() + 1);
  y.head(x.size()) = x;
  y(x.size()) = t;
  return y;
}

double ValueNetwork::raw_value(const Vec& y) const {
  require(y.size() == widths_.front(), "raw input has wrong dimension");
  const int d0 = widths_.front();
  Vec z = y;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& l = layers_[i];
    Vec s = params_.segment(Eigen::Index(l.b_offset), l.out);
    if (l.has_w) s.noalias() += ConstRowMap(params_.data() + l.w_offset, l.out, l.in) * z;
    if (l.has_a) s.noalias() += ConstRowMap(params_.data() + l.a_offset, l.out, d0) * y;
    if (i + 1 == layers_.size()) return s(0);
    z = s.unaryExpr(&softplus);
  }
  return 0.0;
}

ValueNetwork::RawResult ValueNetwork::raw_pass(const Vec& y, const Vec* direction,
                                               Sink grad_sink, Sink dir_sink) const {
  const int d0 = widths_.front();
  const std::size_t count = layers_.size();
  const bool tangent = direction != nullptr;

  // inputs[i] feeds layer i; pre[i] are hidden pre-activations.
  std::vector<Vec> inputs(count), inputs_dot(count), pre(count), pre_dot(count);
  inputs[0] = y;
  if (tangent) inputs_dot[0] = *direction;

  RawResult result;
  for (std::size_t i = 0; i < count; ++i) {
    const Layer& l = layers_[i];
    Vec s = params_.segment(Eigen::Index(l.b_offset), l.out);
    Vec sd;
    if (tangent) sd = Vec::Zero(l.out);
    if (l.has_w) {
      ConstRowMap w(params_.data() + l.w_offset, l.out, l.in);
      s.noalias() += w * inputs[i];
      if (tangent) sd.noalias() += w * inputs_dot[i];
    }
    if (l.has_a) {
      ConstRowMap a(params_.data() + l.a_offset, l.out, d0);
      s.noalias() += a * y;
      if (tangent) sd.noalias() += a * (*direction);
    }
    if (i + 1 == count) {
      result.value = s(0);
      break;
    }
    inputs[i + 1] = s.unaryExpr(&softplus);
    if (tangent) inputs_dot[i + 1] = s.unaryExpr(&sigmoid).cwiseProduct(sd);
    pre[i] = std::move(s);
    if (tangent) pre_dot[i] = std::move(sd);
  }

  result.grad_y = Vec::Zero(d0);
  if (tangent) result.hess_dir_y = Vec::Zero(d0);

  // Adjoint (and its tangent) of the current layer's output.
  Vec grad_out = Vec::Ones(1);
  Vec grad_out_dot = Vec::Zero(1);
  for (std::size_t ii = count; ii-- > 0;) {
    const Layer& l = layers_[ii];
    Vec delta, delta_dot;
    if (ii + 1 == count) {
      delta = grad_out;
      if (tangent) delta_dot = grad_out_dot;
    } else {
      const Vec sig = pre[ii].unaryExpr(&sigmoid);
      delta = sig.cwiseProduct(grad_out);
      if (tangent) {
        const Vec dsig = sig.cwiseProduct(Vec::Ones(sig.size()) - sig);
        delta_dot = dsig.cwiseProduct(pre_dot[ii]).cwiseProduct(grad_out) +
                    sig.cwiseProduct(grad_out_dot);
      }
    }

    if (grad_sink.active()) {
      double* out = grad_sink.out.data();
      const double c = grad_sink.scale;
      if (l.has_w) RowMap(out + l.w_offset, l.out, l.in).noalias() += c * delta * inputs[ii].transpose();
      if (l.has_a) RowMap(out + l.a_offset, l.out, d0).noalias() += c * delta * y.transpose();
      Eigen::Map<Vec>(out + l.b_offset, l.out) += c * delta;
    }
    if (dir_sink.active() && tangent) {
      double* out = dir_sink.out.data();
      const double c = dir_sink.scale;
      if (l.has_w) {
        RowMap gw(out + l.w_offset, l.out, l.in);
        gw.noalias() += c * delta_dot * inputs[ii].transpose();
        gw.noalias() += c * delta * inputs_dot[ii].transpose();
      }
      if (l.has_a) {
        RowMap ga(out + l.a_offset, l.out, d0);
        ga.noalias() += c * delta_dot * y.transpose();
        ga.noalias() += c * delta * direction->transpose();
      }
      Eigen::Map<Vec>(out + l.b_offset, l.out) += c * delta_dot;
    }

    if (l.has_a) {
      ConstRowMap a(params_.data() + l.a_offset, l.out, d0);
      result.grad_y.noalias() += a.transpose() * delta;
      if (tangent) result.hess_dir_y.noalias() += a.transpose() * delta_dot;
    }
    if (l.has_w) {
      ConstRowMap w(params_.data() + l.w_offset, l.out, l.in);
      Vec g = w.transpose() * delta;
      Vec gd;
      if (tangent) gd = w.transpose() * delta_dot;
      if (ii == 0) {
        // z_0 is the raw input y.
        result.grad_y += g;
        if (tangent) result.hess_dir_y += gd;
      } else {
        grad_out = std::move(g);
        if (tangent) grad_out_dot = std::move(gd);
      }
    }
  }
  return result;
}

double ValueNetwork::value(const Vec& x, double t) const {
  const Vec y = augment(x, t);
  if (kind_ == NetworkKind::kFcn) return raw_value(y);
  Vec y0 = Vec::Zero(y.size());
  y0(x.size()) = t;
  const RawResult r0 = raw_pass(y0, nullptr, {}, {});
  const int n = int(x.size());
  return raw_value(y) - r0.value - r0.grad_y.head(n).dot(x) + epsilon_ * x.squaredNorm();
}

InputDerivatives ValueNetwork::input_derivatives(const Vec& x, double t) const {
  const Vec y = augment(x, t);
  const int n = int(x.size());
  const RawResult r = raw_pass(y, nullptr, {}, {});
  InputDerivatives out;
  if (kind_ == NetworkKind::kFcn) {
    out.value = r.value;
    out.grad_x = r.grad_y.head(n);
    out.grad_t = r.grad_y(n);
    return out;
  }
  Vec y0 = Vec::Zero(y.size());
  y0(n) = t;
  Vec dir = Vec::Zero(y.size());
  dir.head(n) = x;
  const RawResult r0 = raw_pass(y0, &dir, {}, {});
  out.value = r.value - r0.value - r0.grad_y.head(n).dot(x) + epsilon_ * x.squaredNorm();
  out.grad_x = r.grad_y.head(n) - r0.grad_y.head(n) + 2.0 * epsilon_ * x;
  out.grad_t = r.grad_y(n) - r0.grad_y(n) - r0.hess_dir_y(n);
  return out;
}

void ValueNetwork::accumulate_param_gradient(const Vec& x, double t, double scale,
                                             std::span<double> out) const {
  require(out.size() == std::size_t(params_.size()), "gradient buffer has wrong length");
  const Vec y = augment(x, t);
  raw_pass(y, nullptr, {out, scale}, {});
  if (kind_ == NetworkKind::kFcn) return;
  const int n = int(x.size());
  Vec y0 = Vec::Zero(y.size());
  y0(n) = t;
  Vec dir = Vec::Zero(y.size());
  dir.head(n) = x;
  raw_pass(y0, &dir, {out, -scale}, {out, -scale});
}

Vec ValueNetwork::accumulate_second_order(const Vec& x, double t, const Vec& w,
                                          double scale, std::span<double> h_theta) const {
  const Vec y = augment(x, t);
  const int n = int(x.size());
  require(w.size() == n, "second_order_vjp: direction has wrong dimension");
  require(h_theta.empty() || h_theta.size() == std::size_t(params_.size()),
          "second_order_vjp: buffer has wrong length");
  Vec dir = Vec::Zero(y.size());
  dir.head(n) = w;
  const RawResult r = raw_pass(y, &dir, {}, {h_theta, scale});
  if (kind_ == NetworkKind::kFcn) return r.hess_dir_y.head(n);
  Vec y0 = Vec::Zero(y.size());
  y0(n) = t;
  if (!h_theta.empty()) raw_pass(y0, &dir, {}, {h_theta, -scale});
  return r.hess_dir_y.head(n) + 2.0 * epsilon_ * w;
}

NetworkPreset network_preset(const std::string& name) {
  static const std::map<std::string, NetworkPreset> named = {
      {"di_icnn", {NetworkKind::kIcnnPd, {3, 4, 4, 1}}},
      {"di_fcn", {NetworkKind::kFcn, {3, 32, 32, 1}}},
      {"di_value_icnn", {NetworkKind::kIcnnPd, {3, 8, 8, 1}}},
      {"cp_icnn", {NetworkKind::kIcnnPd, {5, 200, 500, 1}}},
      {"swingup_fcn", {NetworkKind::kFcn, {5, 128, 128, 1}}},
      {"twolink_fcn", {NetworkKind::kFcn, {5, 128, 128, 1}}},
  };
  if (auto it = named.find(name); it != named.end()) return it->second;

  // "<kind>:<w0>-<w1>-...", e.g. "icnn-pd:3-4-4-1".
  const auto colon = name.find(':');
  if (colon == std::string::npos) throw ContractError("unknown network preset '" + name + "'");
  NetworkPreset preset{network_kind_from_string(name.substr(0, colon)), {}};
  std::stringstream widths(name.substr(colon + 1));
  std::string token;
  while (std::getline(widths, token, '-')) {
    try {
      preset.layer_widths.push_back(std::stoi(token));
    } catch (const std::exception&) {
      throw ContractError("bad layer width '" + token + "' in '" + name + "'");
    }
  }
  return preset;
}

}  // namespace hjbl
