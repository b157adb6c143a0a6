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
#include <filesystem>
#include <string>

#include "hjbl/network.hpp"

namespace hjbl {

struct CheckpointMetadata {
  std::string env;
  std::uint64_t seed = 0;
  int epoch = 0;
};

struct Checkpoint {
  ValueNetwork network;
  CheckpointMetadata metadata;
};

// JSON document {format, kind, layer_widths, activation, epsilon, params,
// metadata {env, seed, epoch}}. Parameters round-trip bit-exactly.
std::string checkpoint_to_string(const ValueNetwork& net, const CheckpointMetadata& meta);
// Throws ParseError naming the offending field; never returns a partial net.
Checkpoint checkpoint_from_string(const std::string& text);

void save_checkpoint(const ValueNetwork& net, const CheckpointMetadata& meta,
                     const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace hjbl
