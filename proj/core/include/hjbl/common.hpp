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

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hjbl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Caller violated a documented precondition (dimension mismatch, bad shape).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite values or a degenerate numeric situation.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A closed-loop rollout produced a non-finite state.
class DivergedRollout : public NumericError {
 public:
  DivergedRollout(int step, const std::string& what)
      : NumericError(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

// Malformed checkpoint, config or CSV document.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string field, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractError(message);
}

inline bool all_finite(const Vec& v) { return v.allFinite(); }

}  // namespace hjbl
