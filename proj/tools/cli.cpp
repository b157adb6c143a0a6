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

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hjbl/checkpoint.hpp"
#include "hjbl/config.hpp"
#include "hjbl/csv.hpp"
#include "hjbl/levelset.hpp"
#include "hjbl/mppi.hpp"
#include "hjbl/parallel.hpp"
#include "hjbl/plots.hpp"
#include "hjbl/train.hpp"

namespace hjbl::cli {
namespace {

namespace fs = std::filesystem;

// Initial conditions of the MPC comparison are shared by every seed; seeds
// vary only the MPPI sampling noise.
constexpr std::uint64_t kMpcInitialStream = 0x4D505043ULL;

struct Flags {
  std::string preset;
  std::string env;
  std::string mode;
  std::string out;
  std::string config;
  std::string checkpoint;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> sets;
  std::vector<std::string> inputs;
  bool compare = false;
  bool parallel_seeds = false;
  bool record_wall_time = false;
  bool verbose = false;
};

// Usage problems detected after argument parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string default_preset(const std::string& env, const std::string& mode,
                           const std::string& command) {
  const bool value = mode == "value" || (mode.empty() && command == "mpc");
  if (env == "di") return value ? "di_value" : "di_lyapunov";
  if (env == "cartpole_balance") return "cp_balance_lyapunov";
  if (env == "cartpole_swingup") return "cp_swingup_value";
  if (env == "twolink") return "twolink_value";
  throw UsageError("unknown environment '" + env + "'");
}

ExperimentConfig build_config(const std::string& command, const Flags& f) {
  std::optional<std::string> document;
  if (!f.config.empty()) {
    if (!fs::exists(f.config)) throw UsageError("config file '" + f.config + "' does not exist");
    document = read_text_file(f.config);
  }
  ExperimentConfig probe;
  if (document) probe = merged(probe, *document);

  std::string preset = f.preset;
  if (preset.empty() && !probe.preset.empty()) preset = probe.preset;
  if (preset.empty() && !f.env.empty()) preset = default_preset(f.env, f.mode, command);

  ExperimentConfig c;
  if (!preset.empty()) c = with_preset(c, preset);
  if (document) c = merged(c, *document);

  if (!f.env.empty()) c.train.env = f.env;
  if (!f.mode.empty()) {
    try {
      c.train.loss = loss_kind_from_string(f.mode);
    } catch (const ContractError& e) {
      throw UsageError(e.what());
    }
  }
  if (!f.seeds.empty()) c.seeds = f.seeds;
  if (!f.out.empty()) c.out = f.out;
  if (!f.checkpoint.empty()) c.checkpoint = f.checkpoint;
  if (!f.inputs.empty()) c.inputs = f.inputs;
  if (f.compare) c.mppi.compare = true;
  if (f.parallel_seeds) c.parallel_seeds = true;
  if (f.record_wall_time) c.record_wall_time = true;
  c.command = command;
  c = with_overrides(c, f.sets);
  c.command = command;
  if (!c.seeds.empty()) c.train.seed = c.seeds.front();
  return c;
}

void check_config(const ExperimentConfig& c) {
  if (c.seeds.empty()) throw UsageError("at least one seed is required");
  if (std::set<std::uint64_t>(c.seeds.begin(), c.seeds.end()).size() != c.seeds.size()) {
    throw UsageError("seeds must be distinct");
  }
  if (c.out.empty()) throw UsageError("an output directory is required");
  validate(c.train);
  const auto env = make_env(c.train.env, c.train.env_params);
  const NetworkPreset net = network_preset(c.train.network);
  if (net.layer_widths.front() != env->state_dim() + 1) {
    throw UsageError("network '" + c.train.network + "' does not fit environment '" +
                     c.train.env + "'");
  }
  if (!c.checkpoint.empty() && !fs::exists(c.checkpoint)) {
    throw UsageError("checkpoint '" + c.checkpoint + "' does not exist");
  }
  if (c.command == "eval" && c.checkpoint.empty()) throw UsageError("eval needs --checkpoint");
  if (c.command == "mpc") {
    if (c.mppi.initial_conditions < 1) throw UsageError("mppi.initial_conditions must be >= 1");
    validate(c.mppi.arm(true, c.train.dt, 1), env->control_dim());
    validate(c.mppi.arm(false, c.train.dt, 1), env->control_dim());
  }
  if (c.command == "plot") {
    if (c.inputs.empty()) throw UsageError("plot needs at least one input directory");
    for (const auto& in : c.inputs) {
      if (!fs::is_directory(in)) throw UsageError("input '" + in + "' is not a directory");
    }
  }
  if (c.command == "levelset") {
    const LevelsetSpec spec = c.levelset.spec(c.train, c.seeds.front());
    if (env->state_dim() > 2 && !spec.slice) {
      throw UsageError("levelset on a " + std::to_string(env->state_dim()) +
                       "-dimensional state needs levelset.slice");
    }
    require(spec.resolution >= 3, "levelset: resolution must be >= 3");
  }
}

// Output directory that remembers every file written into it.
class RunDir {
 public:
  explicit RunDir(fs::path root) : root_(std::move(root)) {}

  const fs::path& root() const { return root_; }

  void write(const std::string& rel, const std::string& content) {
    write_text_file(root_ / rel, content);
    add(rel);
  }
  void add(const std::string& rel) {
    const std::lock_guard<std::mutex> lock(mutex_);
    files_.insert(rel);
  }
  void write_manifest() {
    std::string text;
    for (const auto& f : files_) text += f + "\n";
    text += "manifest.txt\n";
    write_text_file(root_ / "manifest.txt", text);
  }

 private:
  fs::path root_;
  std::set<std::string> files_;
  std::mutex mutex_;
};

std::string join(const std::string& prefix, const std::string& name) {
  return prefix.empty() ? name : prefix + "/" + name;
}

CsvTable curves_csv(const TrainResult& r, bool wall_time) {
  CsvTable t;
  t.header = {"epoch", "loss", "mean_cost", "normalized_cost", "wall_ms"};
  for (std::size_t e = 0; e < r.loss.size(); ++e) {
    const std::string norm = e < r.normalized_cost.size() ? format_number(r.normalized_cost[e]) : "nan";
    const double wall = wall_time && e < r.wall_ms.size() ? r.wall_ms[e] : 0.0;
    t.rows.push_back({std::to_string(e), format_number(r.loss[e]), format_number(r.mean_cost[e]),
                      norm, format_number(wall)});
  }
  return t;
}

CsvTable timing_csv(const TrainResult& r) {
  CsvTable t;
  t.header = {"epoch", "wall_ms"};
  for (std::size_t e = 0; e < r.wall_ms.size(); ++e) {
    t.rows.push_back({std::to_string(e), format_number(r.wall_ms[e])});
  }
  return t;
}

struct SeedRun {
  TrainResult result;
  std::string dir;
};

// Trains one seed and writes its artifacts under `prefix`.
SeedRun train_seed(const ExperimentConfig& c, std::uint64_t seed, const std::string& prefix,
                   RunDir& run, std::ostream& out, bool verbose) {
  TrainConfig tc = c.train;
  tc.seed = seed;
  EpochCallback cb;
  if (verbose) {
    cb = [&out, seed](int epoch, const ValueNetwork&) {
      out << "seed " << seed << " epoch " << epoch << "\n";
    };
  }
  SeedRun s{train(tc, cb), prefix};
  const TrainResult& r = s.result;
  run.write(join(prefix, "curves.csv"), to_csv(curves_csv(r, c.record_wall_time)));
  run.write(join(prefix, "timing.csv"), to_csv(timing_csv(r)));
  const int epoch = r.loss.empty() ? 0 : int(r.loss.size()) - 1;
  run.write(join(prefix, "checkpoint.json"),
            checkpoint_to_string(r.network, {tc.env, seed, epoch}));
  if (r.failed) run.write(join(prefix, "failure.txt"), r.failure + "\n");
  return s;
}

int report_training(const std::vector<SeedRun>& runs, std::ostream& out, std::ostream& err) {
  bool failed = false;
  for (const auto& s : runs) {
    const TrainResult& r = s.result;
    if (r.failed) {
      failed = true;
      err << "seed " << r.seed << ": numeric failure after " << r.loss.size()
          << " evaluated epochs: " << r.failure << "\n";
      continue;
    }
    out << "seed " << r.seed << ": loss " << format_number(r.loss.front()) << " -> "
        << format_number(r.loss.back()) << ", normalized cost "
        << format_number(r.normalized_cost.back()) << " after " << r.loss.size() - 1
        << " epochs\n";
  }
  return failed ? kNumeric : kOk;
}

std::vector<SeedRun> train_all(const ExperimentConfig& c, RunDir& run, std::ostream& out,
                               bool verbose) {
  const bool nested = c.seeds.size() > 1;
  std::vector<SeedRun> runs(c.seeds.size());
  const int workers = c.parallel_seeds ? int(c.seeds.size()) : 1;
  parallel_for(c.seeds.size(), workers, [&](std::size_t i) {
    const std::string prefix = nested ? "seed_" + std::to_string(c.seeds[i]) : "";
    runs[i] = train_seed(c, c.seeds[i], prefix, run, out, verbose && workers == 1);
  });
  if (nested) {
    std::vector<SeedCurve> curves;
    for (const auto& s : runs) {
      if (!s.result.failed) curves.push_back({s.result.seed, s.result.normalized_cost});
    }
    if (!curves.empty()) {
      for (const auto& f : export_curves(curves, run.root())) run.add(f);
    }
  }
  return runs;
}

int cmd_train(const ExperimentConfig& c, RunDir& run, std::ostream& out, std::ostream& err,
              bool verbose) {
  const auto runs = train_all(c, run, out, verbose);
  return report_training(runs, out, err);
}

// Value function for eval / mpc / levelset: the checkpoint when given,
// otherwise a freshly trained network written under train/.
struct LoadedValue {
  ValueNetwork network{NetworkKind::kFcn, {2, 1}};
  std::string env;
  int status = kOk;
};

LoadedValue obtain_value(const ExperimentConfig& c, RunDir& run, std::ostream& out,
                         std::ostream& err, bool verbose) {
  LoadedValue v;
  if (!c.checkpoint.empty()) {
    Checkpoint cp = load_checkpoint(c.checkpoint);
    v.network = std::move(cp.network);
    v.env = cp.metadata.env.empty() ? c.train.env : cp.metadata.env;
    return v;
  }
  out << "no checkpoint given; training preset for '" << c.train.env << "'\n";
  std::vector<SeedRun> runs{train_seed(c, c.seeds.front(), "train", run, out, verbose)};
  v.status = report_training(runs, out, err);
  v.network = runs.front().result.network;
  v.env = c.train.env;
  return v;
}

int cmd_eval(const ExperimentConfig& c, RunDir& run, std::ostream& out, std::ostream&) {
  const Checkpoint cp = load_checkpoint(c.checkpoint);
  const std::string env_name = cp.metadata.env.empty() ? c.train.env : cp.metadata.env;
  const auto env = make_env(env_name, c.train.env_params);
  require(cp.network.state_dim() == env->state_dim(),
          "eval: checkpoint does not match environment '" + env_name + "'");
  const TimeGrid grid = TimeGrid::make(c.train.horizon, c.train.dt);
  GradientOptions options = gradient_options(c.train);

  CsvTable t;
  t.header = {"env", "seed", "loss_kind", "loss", "mean_cost", "descent_violation_fraction"};
  for (std::uint64_t seed : c.seeds) {
    const auto batch = held_out_initial(*env, seed, c.train.initial_conditions);
    const double loss = batch_loss(cp.network, *env, batch, grid, options);
    const double cost = evaluate_cost(cp.network, *env, batch, grid, c.train.workers);
    const DescentStats d = lyapunov_descent(cp.network, *env, batch, grid);
    t.rows.push_back({env_name, std::to_string(seed), to_string(c.train.loss), format_number(loss),
                      format_number(cost), format_number(d.violation_fraction())});
    out << "seed " << seed << ": loss " << format_number(loss) << ", mean cost "
        << format_number(cost) << ", descent violations " << d.violations << "/" << d.steps
        << "\n";
  }
  run.write("eval.csv", to_csv(t));
  return kOk;
}

int cmd_mpc(const ExperimentConfig& c, RunDir& run, std::ostream& out, std::ostream& err,
            bool verbose) {
  std::vector<bool> arms;
  if (c.mppi.compare) {
    arms = {true, false};
  } else {
    arms = {c.mppi.warmstart};
  }
  const bool needs_value =
      c.mppi.compare || c.mppi.warmstart || c.mppi.terminal_value;

  std::optional<LoadedValue> value;
  std::string env_name = c.train.env;
  if (needs_value) {
    value = obtain_value(c, run, out, err, verbose);
    if (value->status != kOk) return value->status;
    env_name = value->env;
  }
  const auto env = make_env(env_name, c.train.env_params);
  if (value) {
    require(value->network.state_dim() == env->state_dim(),
            "mpc: value function does not match environment '" + env_name + "'");
  }
  const auto initial = held_out_initial(*env, kMpcInitialStream, c.mppi.initial_conditions);

  CsvTable runs;
  runs.header = {"env", "warmstart", "horizon_ms", "samples", "seed", "steps", "cost"};
  CsvTable summary;
  summary.header = {"env", "warmstart", "horizon_ms", "horizon_steps", "samples",
                    "runs", "completed", "mean_steps", "mean_cost"};
  for (const bool warm : arms) {
    const MppiConfig cfg = c.mppi.arm(warm, c.train.dt, c.train.workers);
    const double horizon_ms = warm ? c.mppi.horizon_ms : c.mppi.vanilla_horizon_ms;
    const ValueFunction* v = value ? &value->network : nullptr;
    const ValueFunction* used = (warm || cfg.terminal_value) ? v : nullptr;
    double total_cost = 0.0, total_steps = 0.0;
    int completed = 0, count = 0;
    for (std::uint64_t seed : c.seeds) {
      for (std::size_t i = 0; i < initial.size(); ++i) {
        const std::uint64_t run_seed = seed * 0x100000001B3ULL + i;
        const MpcResult r = run_mpc(*env, cfg, used, initial[i], run_seed);
        runs.rows.push_back({env_name, warm ? "1" : "0", format_number(horizon_ms),
                             std::to_string(cfg.samples), std::to_string(seed),
                             std::to_string(r.steps), format_number(r.cost)});
        total_cost += r.cost;
        total_steps += r.steps;
        completed += r.completed ? 1 : 0;
        ++count;
      }
    }
    summary.rows.push_back({env_name, warm ? "1" : "0", format_number(horizon_ms),
                            std::to_string(cfg.horizon), std::to_string(cfg.samples),
                            std::to_string(count), std::to_string(completed),
                            format_number(total_steps / count), format_number(total_cost / count)});
    out << (warm ? "MPPI+value" : "MPPI") << " H=" << cfg.horizon << " (" << horizon_ms
        << " ms): mean cost " << format_number(total_cost / count) << ", mean steps "
        << format_number(total_steps / count) << ", completed " << completed << "/" << count
        << "\n";
  }
  run.write("mpc_runs.csv", to_csv(runs));
  run.write("mpc_summary.csv", to_csv(summary));
  return kOk;
}

int cmd_levelset(const ExperimentConfig& c, RunDir& run, std::ostream& out, std::ostream& err,
                 bool verbose) {
  const LoadedValue value = obtain_value(c, run, out, err, verbose);
  if (value.status != kOk) return value.status;
  const auto env = make_env(value.env, c.train.env_params);
  const LevelsetSpec spec = c.levelset.spec(c.train, c.seeds.front());
  for (const auto& f : export_levelset(value.network, *env, spec, run.root())) run.add(f);
  out << "level sets written to " << run.root().string() << "\n";
  return kOk;
}

std::optional<std::uint64_t> checkpoint_seed(const fs::path& dir) {
  const fs::path cp = dir / "checkpoint.json";
  if (!fs::exists(cp)) return std::nullopt;
  return load_checkpoint(cp).metadata.seed;
}

int cmd_plot(const ExperimentConfig& c, RunDir& run, std::ostream& out, std::ostream&) {
  std::vector<fs::path> dirs;
  for (const auto& in : c.inputs) {
    if (fs::exists(fs::path(in) / "curves.csv")) {
      dirs.emplace_back(in);
      continue;
    }
    std::vector<fs::path> nested;
    for (const auto& entry : fs::directory_iterator(in)) {
      if (entry.is_directory() && fs::exists(entry.path() / "curves.csv")) {
        nested.push_back(entry.path());
      }
    }
    std::sort(nested.begin(), nested.end());
    if (nested.empty()) throw UsageError("no curves.csv found under '" + in + "'");
    dirs.insert(dirs.end(), nested.begin(), nested.end());
  }
  std::vector<SeedCurve> curves;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const CsvTable t = parse_csv(read_text_file(dirs[i] / "curves.csv"));
    const int col = t.column("normalized_cost");
    SeedCurve curve;
    curve.seed = checkpoint_seed(dirs[i]).value_or(i);
    for (const auto& row : t.rows) curve.values.push_back(std::stod(row.at(col)));
    curves.push_back(std::move(curve));
  }
  for (const auto& f : export_curves(curves, run.root())) run.add(f);
  out << "plotted " << curves.size() << " curves\n";
  return kOk;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--preset", f.preset, "Training preset")
      ->check(CLI::IsMember(train_preset_names()));
  sub->add_option("--env", f.env, "Environment")->check(CLI::IsMember(env_names()));
  sub->add_option("--mode", f.mode, "Loss kind")->check(CLI::IsMember({"value", "lyapunov"}));
  sub->add_option("--seed", f.seeds, "Seed (repeatable)");
  sub->add_option("--out", f.out, "Output directory");
  sub->add_option("--set", f.sets, "Override key=value (repeatable)");
  sub->add_option("--config", f.config, "Experiment config file (JSON)");
  sub->add_option("--checkpoint", f.checkpoint, "Network checkpoint");
  sub->add_flag("--parallel-seeds", f.parallel_seeds, "Run seeds concurrently");
  sub->add_flag("--record-wall-time", f.record_wall_time,
                "Write measured epoch times into curves.csv");
  sub->add_flag("-v,--verbose", f.verbose, "Per-epoch progress");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn HJB value and Lyapunov functions; warmstart MPPI", "hjbl"};
  app.require_subcommand(1, 1);
  Flags flags;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"train", "Train a value or Lyapunov function"},
      {"eval", "Evaluate a checkpoint on held-out initial conditions"},
      {"mpc", "Run MPPI, optionally warmstarted by a learned value function"},
      {"plot", "Plot normalized training curves"},
      {"levelset", "Export level sets of a value function"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, flags);
    if (std::string(name) == "mpc") {
      sub->add_flag("--compare", flags.compare, "Run warmstarted and vanilla arms");
    }
    if (std::string(name) == "plot") {
      sub->add_option("inputs", flags.inputs, "Run directories holding curves.csv");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run 'hjbl --help' for usage\n";
    return kUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  ExperimentConfig config;
  try {
    config = build_config(command, flags);
    check_config(config);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << " (field: " << e.field() << ")\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  RunDir run(config.out);
  int status = kOk;
  try {
    run.write("config.json", config_to_string(config));
    if (command == "train") {
      status = cmd_train(config, run, out, err, flags.verbose);
    } else if (command == "eval") {
      status = cmd_eval(config, run, out, err);
    } else if (command == "mpc") {
      status = cmd_mpc(config, run, out, err, flags.verbose);
    } else if (command == "levelset") {
      status = cmd_levelset(config, run, out, err, flags.verbose);
    } else {
      status = cmd_plot(config, run, out, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    status = kUsage;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    status = kNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    status = kFailure;
  }
  try {
    run.write_manifest();
  } catch (const std::exception& e) {
    err << "error: could not write manifest: " << e.what() << "\n";
    if (status == kOk) status = kFailure;
  }
  return status;
}

}  // namespace hjbl::cli
