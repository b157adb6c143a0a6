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

#include "hjbl/checkpoint.hpp"

#include <optional>

#include <nlohmann/json.hpp>

#include "hjbl/csv.hpp"

namespace hjbl {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "hjbl-checkpoint-v1";

const json& field(const json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) {
    throw ParseError(name, std::string("checkpoint: missing field '") + name + "'");
  }
  return doc.at(name);
}

template <class T>
T typed(const json& doc, const char* name) {
  try {
    return field(doc, name).get<T>();
  } catch (const json::exception&) {
    throw ParseError(name, std::string("checkpoint: field '") + name + "' has the wrong type");
  }
}

}  // namespace

std::string checkpoint_to_string(const ValueNetwork& net, const CheckpointMetadata& meta) {
  json doc;
  doc["format"] = kFormat;
  doc["kind"] = to_string(net.kind());
  doc["layer_widths"] = net.layer_widths();
  doc["activation"] = net.activation();
  doc["epsilon"] = net.epsilon();
  doc["params"] = std::vector<double>(net.params().data(), net.params().data() + net.params().size());
  doc["metadata"] = {{"env", meta.env}, {"seed", meta.seed}, {"epoch", meta.epoch}};
  return doc.dump(1) + "\n";
}

Checkpoint checkpoint_from_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("document", std::string("checkpoint: malformed document: ") + e.what());
  }
  if (typed<std::string>(doc, "format") != kFormat) {
    throw ParseError("format", "checkpoint: unsupported format");
  }
  NetworkKind kind;
  try {
    kind = network_kind_from_string(typed<std::string>(doc, "kind"));
  } catch (const ContractError& e) {
    throw ParseError("kind", std::string("checkpoint: ") + e.what());
  }
  if (typed<std::string>(doc, "activation") != "softplus") {
    throw ParseError("activation", "checkpoint: unsupported activation");
  }
  const auto widths = typed<std::vector<int>>(doc, "layer_widths");
  const auto epsilon = typed<double>(doc, "epsilon");
  const auto params = typed<std::vector<double>>(doc, "params");

  const json& meta_doc = field(doc, "metadata");
  CheckpointMetadata meta;
  meta.env = typed<std::string>(meta_doc, "env");
  meta.seed = typed<std::uint64_t>(meta_doc, "seed");
  meta.epoch = typed<int>(meta_doc, "epoch");

  std::optional<ValueNetwork> net;
  try {
    net.emplace(kind, widths, epsilon);
  } catch (const ContractError& e) {
    throw ParseError("layer_widths", std::string("checkpoint: ") + e.what());
  }
  if (params.size() != std::size_t(net->param_count())) {
    throw ParseError("params", "checkpoint: expected " + std::to_string(net->param_count()) +
                                   " parameters, found " + std::to_string(params.size()));
  }
  net->set_params(Eigen::Map<const Vec>(params.data(), Eigen::Index(params.size())));
  return {std::move(*net), meta};
}

void save_checkpoint(const ValueNetwork& net, const CheckpointMetadata& meta,
                     const std::filesystem::path& path) {
  write_text_file(path, checkpoint_to_string(net, meta));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return checkpoint_from_string(read_text_file(path));
}

}  // namespace hjbl
