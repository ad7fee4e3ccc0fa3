// Copyright 2026 The uavee Authors.
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

// Command-line experiment runner over the uavee C API.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uavee/uavee.h"

namespace {

struct ConfigDeleter {
  void operator()(uavee_config* c) const { uavee_config_destroy(c); }
};
struct ExperimentDeleter {
  void operator()(uavee_experiment* e) const { uavee_experiment_destroy(e); }
};
using ConfigPtr = std::unique_ptr<uavee_config, ConfigDeleter>;
using ExperimentPtr = std::unique_ptr<uavee_experiment, ExperimentDeleter>;

struct CommonOptions {
  std::string config_path;
  std::vector<std::uint64_t> seeds = {1};
  int episodes = -1;  // config value when negative
  std::string out;
  std::vector<std::string> overrides;
  bool quiet = false;
};

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void Check(uavee_status status, const std::string& what) {
  if (status != UAVEE_OK) {
    throw CliError(what + ": " + uavee_status_name(status) + ": " + uavee_last_error());
  }
}

std::string OutputDir(const CommonOptions& opts) {
  if (!opts.out.empty()) return opts.out;
  if (const char* env = std::getenv("UAVEE_OUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return "results";
}

ConfigPtr LoadConfig(const CommonOptions& opts) {
  uavee_config* raw = nullptr;
  if (opts.config_path.empty()) {
    Check(uavee_config_create(&raw), "creating config");
  } else {
    Check(uavee_config_load(opts.config_path.c_str(), &raw), "loading " + opts.config_path);
  }
  ConfigPtr config(raw);
  for (const std::string& kv : opts.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw CliError("--set expects key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    Check(uavee_config_set(config.get(), key.c_str(), kv.substr(eq + 1).c_str()),
          "setting " + key);
  }
  return config;
}

int ConfigInt(const uavee_config* config, const char* key) {
  char buf[64];
  size_t needed = 0;
  Check(uavee_config_get(config, key, buf, sizeof buf, &needed), std::string("reading ") + key);
  return std::atoi(buf);
}

void PrintRow(const uavee_metrics_row* row, void* user) {
  const int every = *static_cast<const int*>(user);
  if ((row->episode + 1) % every != 0) return;
  std::fprintf(stderr, "[%s] uavs=%d seed=%llu episode=%d norm_ee=%.4f norm_energy=%.4f\n",
               uavee_policy_name(row->policy), row->fleet_size,
               static_cast<unsigned long long>(row->seed), row->episode + 1, row->norm_ee,
               row->norm_energy);
}

// Runs every policy over every fleet size and writes the result files.
int RunAndWrite(const CommonOptions& opts, const std::vector<uavee_policy>& policies,
                const std::vector<int>& fleets_in) {
  ConfigPtr config = LoadConfig(opts);
  std::vector<std::int32_t> fleets(fleets_in.begin(), fleets_in.end());
  if (fleets.empty()) fleets.push_back(ConfigInt(config.get(), "uav_count"));
  const int episodes = opts.episodes >= 0 ? opts.episodes : ConfigInt(config.get(), "episodes");
  if (opts.episodes >= 1) {
    Check(uavee_config_set(config.get(), "episodes", std::to_string(episodes).c_str()),
          "setting episodes");
  }

  uavee_experiment* raw = nullptr;
  Check(uavee_experiment_create(config.get(), &raw), "creating experiment");
  ExperimentPtr experiment(raw);
  int every = 10;
  if (!opts.quiet) {
    Check(uavee_experiment_set_callback(experiment.get(), PrintRow, &every),
          "installing progress callback");
  }
  for (uavee_policy policy : policies) {
    Check(uavee_experiment_run(experiment.get(), policy, fleets.data(), fleets.size(),
                               opts.seeds.data(), opts.seeds.size(), episodes),
          std::string("running ") + uavee_policy_name(policy));
  }

  const std::filesystem::path dir = OutputDir(opts);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw CliError("cannot create " + dir.string() + ": " + ec.message());
  const std::string metrics = (dir / "metrics.csv").string();
  const std::string aggregate = (dir / "aggregate.csv").string();
  const std::string manifest = (dir / "manifest.txt").string();
  Check(uavee_experiment_write(experiment.get(), metrics.c_str(), aggregate.c_str(),
                               manifest.c_str(), dir.string().c_str()),
        "writing results");
  size_t checkpoints = 0;
  for (uavee_policy policy : policies) {
    if (policy != UAVEE_POLICY_DDQN) continue;
    const std::filesystem::path ckpt = dir / "checkpoints";
    std::filesystem::create_directories(ckpt, ec);
    if (ec) throw CliError("cannot create " + ckpt.string() + ": " + ec.message());
    Check(uavee_experiment_save_checkpoints(experiment.get(), ckpt.string().c_str(),
                                            &checkpoints),
          "saving checkpoints");
  }
  if (!opts.quiet) {
    std::fprintf(stderr, "wrote %zu rows to %s", uavee_experiment_row_count(experiment.get()),
                 dir.string().c_str());
    if (checkpoints > 0) std::fprintf(stderr, " (%zu checkpoints)", checkpoints);
    std::fprintf(stderr, "\n");
  }
  return 0;
}

std::vector<int> ParseRange(const std::string& range, int step) {
  const auto dots = range.find("..");
  if (step < 1) throw CliError("--step must be positive");
  int lo = 0, hi = 0;
  try {
    if (dots == std::string::npos) {
      lo = hi = std::stoi(range);
    } else {
      lo = std::stoi(range.substr(0, dots));
      hi = std::stoi(range.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw CliError("--uavs expects N or A..B, got '" + range + "'");
  }
  if (lo < 1 || hi < lo) throw CliError("--uavs range '" + range + "' is empty or invalid");
  std::vector<int> out;
  for (int u = lo; u <= hi; u += step) out.push_back(u);
  return out;
}

void PrintCheck(const char* name, int passed, const char* detail, void*) {
  std::printf("%s %s: %s\n", passed ? "PASS" : "FAIL", name, detail);
}

void AddCommon(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "key=value config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seeds, "master seed(s); comma separated or repeated")
      ->delimiter(',');
  cmd->add_option("--episodes", opts.episodes, "episodes per (fleet size, seed)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", opts.out,
                  "output directory (default $UAVEE_OUT_DIR, else ./results)");
  cmd->add_option("--set", opts.overrides, "override one config key, key=value");
  cmd->add_flag("--quiet", opts.quiet, "no progress output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-efficient fixed-wing UAV orbit control: simulator and trainer"};
  app.set_version_flag("--version", std::string(uavee_version()));
  app.require_subcommand(1);

  CommonOptions opts;
  std::vector<int> fleets;
  std::string uavs_range = "2..20";
  int step = 2;
  std::string policy_name = "min-radius";
  std::string sweep_policy = "ddqn";

  CLI::App* train = app.add_subcommand("train", "train DDQN agents and record metrics");
  AddCommon(train, opts);
  train->add_option("--uavs", fleets, "fleet size(s); default from config")->delimiter(',');

  CLI::App* baseline = app.add_subcommand("baseline", "run a heuristic policy");
  AddCommon(baseline, opts);
  baseline->add_option("--policy", policy_name, "heuristic policy")
      ->check(CLI::IsMember({"min-radius", "hover", "random-walk", "energy-saving"}));
  baseline->add_option("--uavs", fleets, "fleet size(s); default from config")
      ->delimiter(',');

  CLI::App* sweep = app.add_subcommand("sweep", "run a policy over a range of fleet sizes");
  AddCommon(sweep, opts);
  sweep->add_option("--uavs", uavs_range, "fleet size range A..B")->capture_default_str();
  sweep->add_option("--step", step, "fleet size increment")->capture_default_str();
  sweep->add_option("--policy", sweep_policy, "policy, or 'all' for every policy")
      ->check(CLI::IsMember(
          {"all", "ddqn", "min-radius", "hover", "random-walk", "energy-saving"}))
      ->capture_default_str();

  CLI::App* verify = app.add_subcommand("verify", "run the numeric oracle suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return RunAndWrite(opts, {UAVEE_POLICY_DDQN}, fleets);
    if (*baseline) {
      uavee_policy p;
      Check(uavee_policy_from_name(policy_name.c_str(), &p), "policy");
      return RunAndWrite(opts, {p}, fleets);
    }
    if (*sweep) {
      std::vector<uavee_policy> policies;
      if (sweep_policy == "all") {
        policies = {UAVEE_POLICY_MIN_RADIUS, UAVEE_POLICY_HOVER, UAVEE_POLICY_RANDOM_WALK,
                    UAVEE_POLICY_ENERGY_SAVING, UAVEE_POLICY_DDQN};
      } else {
        uavee_policy p;
        Check(uavee_policy_from_name(sweep_policy.c_str(), &p), "policy");
        policies = {p};
      }
      return RunAndWrite(opts, policies, ParseRange(uavs_range, step));
    }
    if (*verify) {
      int failures = 0;
      Check(uavee_verify(PrintCheck, nullptr, &failures), "verify");
      std::printf("%d check(s) failed\n", failures);
      return failures == 0 ? 0 : 1;
    }
  } catch (const CliError& e) {
    std::fprintf(stderr, "uavee: %s\n", e.what());
    return 1;
  }
  return 0;
}
