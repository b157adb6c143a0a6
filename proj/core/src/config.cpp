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

#include "hjbl/config.hpp"

#include <nlohmann/json.hpp>

namespace hjbl {
namespace {

using nlohmann::json;

json to_json(const ExperimentConfig& c) {
  const TrainConfig& t = c.train;
  json env_params = json::object();
  for (const auto& [k, v] : t.env_params) env_params[k] = v;
  return {
      {"command", c.command},
      {"preset", c.preset},
      {"checkpoint", c.checkpoint},
      {"seeds", c.seeds},
      {"out", c.out},
      {"parallel_seeds", c.parallel_seeds},
      {"record_wall_time", c.record_wall_time},
      {"inputs", c.inputs},
      {"train",
       {{"env", t.env},
        {"loss", to_string(t.loss)},
        {"network", t.network},
        {"initial_conditions", t.initial_conditions},
        {"horizon", t.horizon},
        {"dt", t.dt},
        {"epochs", t.epochs},
        {"learning_rate", t.learning_rate},
        {"adam_beta1", t.adam.beta1},
        {"adam_beta2", t.adam.beta2},
        {"adam_eps", t.adam.eps},
        {"epsilon", t.epsilon},
        {"resample", t.resample},
        {"lyapunov_control_penalty", t.lyapunov_control_penalty},
        {"drop_second_order", t.drop_second_order},
        {"workers", t.workers},
        {"env_params", env_params}}},
      {"mppi",
       {{"samples", c.mppi.samples},
        {"horizon_ms", c.mppi.horizon_ms},
        {"vanilla_horizon_ms", c.mppi.vanilla_horizon_ms},
        {"dt", c.mppi.dt},
        {"temperature", c.mppi.temperature},
        {"noise_std", c.mppi.noise_std},
        {"warmstart", c.mppi.warmstart},
        {"terminal_value", c.mppi.terminal_value},
        {"max_steps", c.mppi.max_steps},
        {"tolerance", c.mppi.tolerance},
        {"initial_conditions", c.mppi.initial_conditions},
        {"compare", c.mppi.compare}}},
      {"levelset",
       {{"time", c.levelset.time},
        {"bounds", c.levelset.bounds},
        {"resolution", c.levelset.resolution},
        {"levels", c.levelset.levels},
        {"slice", c.levelset.slice},
        {"trajectories", c.levelset.trajectories}}},
  };
}

template <class T>
T get(const json& doc, const std::string& section, const char* key) {
  const std::string path = section.empty() ? key : section + "." + key;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(path, "config: field '" + path + "' is missing or has the wrong type");
  }
}

ExperimentConfig from_json(const json& doc) {
  ExperimentConfig c;
  c.command = get<std::string>(doc, "", "command");
  c.preset = get<std::string>(doc, "", "preset");
  c.checkpoint = get<std::string>(doc, "", "checkpoint");
  c.seeds = get<std::vector<std::uint64_t>>(doc, "", "seeds");
  c.out = get<std::string>(doc, "", "out");
  c.parallel_seeds = get<bool>(doc, "", "parallel_seeds");
  c.record_wall_time = get<bool>(doc, "", "record_wall_time");
  c.inputs = get<std::vector<std::string>>(doc, "", "inputs");

  const json& t = doc.at("train");
  TrainConfig& tc = c.train;
  tc.env = get<std::string>(t, "train", "env");
  try {
    tc.loss = loss_kind_from_string(get<std::string>(t, "train", "loss"));
  } catch (const ContractError& e) {
    throw ParseError("train.loss", std::string("config: ") + e.what());
  }
  tc.network = get<std::string>(t, "train", "network");
  tc.initial_conditions = get<int>(t, "train", "initial_conditions");
  tc.horizon = get<double>(t, "train", "horizon");
  tc.dt = get<double>(t, "train", "dt");
  tc.epochs = get<int>(t, "train", "epochs");
  tc.learning_rate = get<double>(t, "train", "learning_rate");
  tc.adam.beta1 = get<double>(t, "train", "adam_beta1");
  tc.adam.beta2 = get<double>(t, "train", "adam_beta2");
  tc.adam.eps = get<double>(t, "train", "adam_eps");
  tc.epsilon = get<double>(t, "train", "epsilon");
  tc.resample = get<bool>(t, "train", "resample");
  tc.lyapunov_control_penalty = get<bool>(t, "train", "lyapunov_control_penalty");
  tc.drop_second_order = get<bool>(t, "train", "drop_second_order");
  tc.workers = get<int>(t, "train", "workers");
  tc.env_params = get<std::map<std::string, double>>(t, "train", "env_params");
  if (!c.seeds.empty()) tc.seed = c.seeds.front();

  const json& m = doc.at("mppi");
  c.mppi.samples = get<int>(m, "mppi", "samples");
  c.mppi.horizon_ms = get<double>(m, "mppi", "horizon_ms");
  c.mppi.vanilla_horizon_ms = get<double>(m, "mppi", "vanilla_horizon_ms");
  c.mppi.dt = get<double>(m, "mppi", "dt");
  c.mppi.temperature = get<double>(m, "mppi", "temperature");
  c.mppi.noise_std = get<std::vector<double>>(m, "mppi", "noise_std");
  c.mppi.warmstart = get<bool>(m, "mppi", "warmstart");
  c.mppi.terminal_value = get<bool>(m, "mppi", "terminal_value");
  c.mppi.max_steps = get<int>(m, "mppi", "max_steps");
  c.mppi.tolerance = get<double>(m, "mppi", "tolerance");
  c.mppi.initial_conditions = get<int>(m, "mppi", "initial_conditions");
  c.mppi.compare = get<bool>(m, "mppi", "compare");

  const json& l = doc.at("levelset");
  c.levelset.time = get<double>(l, "levelset", "time");
  c.levelset.bounds = get<std::vector<double>>(l, "levelset", "bounds");
  c.levelset.resolution = get<int>(l, "levelset", "resolution");
  c.levelset.levels = get<int>(l, "levelset", "levels");
  c.levelset.slice = get<std::vector<int>>(l, "levelset", "slice");
  c.levelset.trajectories = get<int>(l, "levelset", "trajectories");
  return c;
}

bool compatible(const json& current, const json& value) {
  if (current.is_number_integer() || current.is_number_unsigned()) {
    return value.is_number_integer() || value.is_number_unsigned();
  }
  if (current.is_number_float()) return value.is_number();
  if (current.is_boolean()) return value.is_boolean();
  if (current.is_string()) return value.is_string();
  if (current.is_array()) return value.is_array();
  if (current.is_object()) return value.is_object();
  return false;
}

void strict_merge(json& target, const json& input, const std::string& path) {
  if (!input.is_object()) throw ParseError(path.empty() ? "document" : path, "config: expected an object");
  for (auto it = input.begin(); it != input.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!target.contains(it.key())) throw ParseError(key, "config: unknown key '" + key + "'");
    json& slot = target[it.key()];
    if (key == "train.env_params") {
      if (!it->is_object()) throw ParseError(key, "config: '" + key + "' must be an object");
      for (auto p = it->begin(); p != it->end(); ++p) {
        if (!p->is_number()) {
          throw ParseError(key + "." + p.key(), "config: environment parameters must be numbers");
        }
        slot[p.key()] = *p;
      }
      continue;
    }
    if (slot.is_object()) {
      strict_merge(slot, *it, key);
      continue;
    }
    if (!compatible(slot, *it)) throw ParseError(key, "config: '" + key + "' has the wrong type");
    slot = *it;
  }
}

ExperimentConfig parse_checked(const json& doc) {
  ExperimentConfig c = from_json(doc);
  for (const auto& name : env_names()) {
    if (name == c.train.env) return c;
  }
  throw ParseError("train.env", "config: unknown environment '" + c.train.env + "'");
}

}  // namespace

MppiConfig MpcSettings::arm(bool warm, double default_dt, int workers) const {
  MppiConfig c;
  c.samples = samples;
  c.dt = dt > 0.0 ? dt : default_dt;
  c.horizon = horizon_steps(warm ? horizon_ms : vanilla_horizon_ms, c.dt);
  c.temperature = temperature;
  c.noise_std = noise_std;
  c.warmstart = warm;
  c.terminal_value = warm && terminal_value;
  c.max_steps = max_steps;
  c.tolerance = tolerance;
  c.workers = workers;
  return c;
}

LevelsetSpec LevelsetSettings::spec(const TrainConfig& train, std::uint64_t seed) const {
  require(bounds.size() == 4, "levelset: bounds needs 4 entries");
  require(slice.empty() || slice.size() == 2, "levelset: slice needs 2 entries");
  LevelsetSpec s;
  s.time = time;
  s.x_min = bounds[0];
  s.x_max = bounds[1];
  s.y_min = bounds[2];
  s.y_max = bounds[3];
  s.resolution = resolution;
  s.levels = levels;
  if (!slice.empty()) s.slice = std::array<int, 2>{slice[0], slice[1]};
  s.trajectories = trajectories;
  s.horizon = train.horizon;
  s.dt = train.dt;
  s.seed = seed;
  return s;
}

std::string config_to_string(const ExperimentConfig& config) {
  return to_json(config).dump(2) + "\n";
}

ExperimentConfig merged(const ExperimentConfig& config, const std::string& document) {
  json input;
  try {
    input = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError("document", std::string("config: malformed document: ") + e.what());
  }
  json target = to_json(config);
  strict_merge(target, input, "");
  return parse_checked(target);
}

ExperimentConfig config_from_string(const std::string& text) {
  return merged(ExperimentConfig{}, text);
}

ExperimentConfig with_preset(ExperimentConfig config, const std::string& preset) {
  try {
    config.train = train_preset(preset);
  } catch (const ContractError& e) {
    throw ParseError("preset", e.what());
  }
  config.preset = preset;
  if (!config.seeds.empty()) config.train.seed = config.seeds.front();
  return config;
}

ExperimentConfig with_overrides(const ExperimentConfig& config,
                                const std::vector<std::string>& assignments) {
  json target = to_json(config);
  for (const std::string& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ParseError(a, "override '" + a + "' is not of the form key=value");
    }
    const std::string key = a.substr(0, eq);
    const std::string raw = a.substr(eq + 1);

    json* slot = &target;
    std::string::size_type start = 0;
    std::vector<std::string> parts;
    while (true) {
      const auto dot = key.find('.', start);
      parts.push_back(key.substr(start, dot - start));
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const bool env_param = i + 1 == parts.size() && i > 0 && parts[i - 1] == "env_params";
      if (!slot->is_object() || (!slot->contains(parts[i]) && !env_param)) {
        throw ParseError(key, "override: unknown key '" + key + "'");
      }
      slot = &(*slot)[parts[i]];
    }

    json value;
    try {
      value = json::parse(raw);
    } catch (const json::parse_error&) {
      value = raw;
    }
    if (slot->is_string() && !value.is_string()) value = raw;
    if (slot->is_null()) {
      if (!value.is_number()) throw ParseError(key, "override: '" + key + "' must be a number");
    } else if (!compatible(*slot, value)) {
      throw ParseError(key, "override: '" + key + "' has the wrong type");
    }
    *slot = value;
  }
  return parse_checked(target);
}

bool equivalent(const ExperimentConfig& a, const ExperimentConfig& b) {
  return to_json(a) == to_json(b);
}

}  // namespace hjbl
