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

#include "uavee/uavee.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <filesystem>
#include <new>
#include <string>
#include <vector>

#include "uavee/config.h"
#include "uavee/error.h"
#include "uavee/harness.h"
#include "uavee/policies.h"
#include "uavee/report.h"
#include "uavee/verify.h"

#ifndef UAVEE_VERSION
#define UAVEE_VERSION "0.0.0"
#endif

struct uavee_config {
  uavee::ScenarioConfig value;
};

struct uavee_experiment {
  uavee::ScenarioConfig config;
  std::vector<uavee::MetricsRow> rows;
  std::vector<uavee::TrainedCell> trained;
  std::vector<std::string> policies;
  std::vector<int> fleet_sizes;
  std::vector<std::uint64_t> seeds;
  int episodes = 0;
  uavee_row_callback callback = nullptr;
  void* user_data = nullptr;
};

namespace {

thread_local std::string g_last_error;

uavee_status StatusFor(uavee::ErrorKind kind) {
  using uavee::ErrorKind;
  switch (kind) {
    case ErrorKind::kInvalidArgument: return UAVEE_ERR_INVALID_ARGUMENT;
    case ErrorKind::kParse: return UAVEE_ERR_PARSE;
    case ErrorKind::kOutOfRange: return UAVEE_ERR_OUT_OF_RANGE;
    case ErrorKind::kDomain: return UAVEE_ERR_DOMAIN;
    case ErrorKind::kNumeric: return UAVEE_ERR_NUMERIC;
    case ErrorKind::kIo: return UAVEE_ERR_IO;
    case ErrorKind::kInternal: return UAVEE_ERR_INTERNAL;
  }
  return UAVEE_ERR_INTERNAL;
}

uavee_status SetError(uavee_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
uavee_status Guard(F&& body) {
  try {
    return body();
  } catch (const uavee::Error& e) {
    return SetError(StatusFor(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return SetError(UAVEE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return SetError(UAVEE_ERR_INTERNAL, e.what());
  } catch (...) {
    return SetError(UAVEE_ERR_INTERNAL, "unknown error");
  }
}

uavee_status NullArgument(const char* what) {
  return SetError(UAVEE_ERR_INVALID_ARGUMENT, std::string(what) + " must not be NULL");
}

uavee_status CopyOut(const std::string& text, char* buf, size_t cap, size_t* needed) {
  if (needed != nullptr) *needed = text.size();
  if (buf == nullptr || cap < text.size() + 1) {
    return SetError(UAVEE_ERR_BUFFER_TOO_SMALL,
                    "buffer of " + std::to_string(cap) + " bytes too small for " +
                        std::to_string(text.size() + 1));
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return UAVEE_OK;
}

uavee::PolicyKind ToKind(uavee_policy policy) {
  switch (policy) {
    case UAVEE_POLICY_MIN_RADIUS: return uavee::PolicyKind::kMinRadius;
    case UAVEE_POLICY_HOVER: return uavee::PolicyKind::kHover;
    case UAVEE_POLICY_RANDOM_WALK: return uavee::PolicyKind::kRandomWalk;
    case UAVEE_POLICY_ENERGY_SAVING: return uavee::PolicyKind::kEnergySaving;
    case UAVEE_POLICY_DDQN: return uavee::PolicyKind::kDdqn;
  }
  uavee::Fail(uavee::ErrorKind::kInvalidArgument, "unknown policy value");
}

uavee_policy FromKind(uavee::PolicyKind kind) {
  switch (kind) {
    case uavee::PolicyKind::kMinRadius: return UAVEE_POLICY_MIN_RADIUS;
    case uavee::PolicyKind::kHover: return UAVEE_POLICY_HOVER;
    case uavee::PolicyKind::kRandomWalk: return UAVEE_POLICY_RANDOM_WALK;
    case uavee::PolicyKind::kEnergySaving: return UAVEE_POLICY_ENERGY_SAVING;
    case uavee::PolicyKind::kDdqn: return UAVEE_POLICY_DDQN;
  }
  return UAVEE_POLICY_MIN_RADIUS;
}

uavee_metrics_row ToC(const uavee::MetricsRow& r) {
  uavee_metrics_row out{};
  out.fleet_size = r.fleet_size;
  out.episode = r.episode;
  out.policy = FromKind(uavee::ParsePolicyKind(r.policy));
  out.seed = r.seed;
  out.total_throughput_bits = r.total_throughput_bits;
  out.total_energy_j = r.total_energy_j;
  out.ee_bits_per_j = r.ee_bits_per_j;
  out.norm_ee = r.norm_ee;
  out.norm_throughput = r.norm_throughput;
  out.norm_energy = r.norm_energy;
  return out;
}

template <typename T>
void AppendUnique(std::vector<T>& into, const T& value) {
  if (std::find(into.begin(), into.end(), value) == into.end()) into.push_back(value);
}

}  // namespace

extern "C" {

const char* uavee_version(void) { return UAVEE_VERSION; }

const char* uavee_last_error(void) { return g_last_error.c_str(); }

const char* uavee_status_name(uavee_status status) {
  switch (status) {
    case UAVEE_OK: return "ok";
    case UAVEE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case UAVEE_ERR_PARSE: return "parse error";
    case UAVEE_ERR_OUT_OF_RANGE: return "out of range";
    case UAVEE_ERR_DOMAIN: return "domain error";
    case UAVEE_ERR_NUMERIC: return "numeric fault";
    case UAVEE_ERR_IO: return "i/o error";
    case UAVEE_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case UAVEE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* uavee_policy_name(uavee_policy policy) {
  switch (policy) {
    case UAVEE_POLICY_MIN_RADIUS:
    case UAVEE_POLICY_HOVER:
    case UAVEE_POLICY_RANDOM_WALK:
    case UAVEE_POLICY_ENERGY_SAVING:
    case UAVEE_POLICY_DDQN:
      return uavee::PolicyName(ToKind(policy));
  }
  return nullptr;
}

uavee_status uavee_policy_from_name(const char* name, uavee_policy* out) {
  if (name == nullptr) return NullArgument("name");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    *out = FromKind(uavee::ParsePolicyKind(name));
    return UAVEE_OK;
  });
}

uavee_status uavee_config_create(uavee_config** out) {
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    *out = new uavee_config{};
    return UAVEE_OK;
  });
}

uavee_status uavee_config_load(const char* path, uavee_config** out) {
  if (path == nullptr) return NullArgument("path");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    *out = new uavee_config{uavee::LoadConfig(path)};
    return UAVEE_OK;
  });
}

uavee_status uavee_config_parse(const char* text, uavee_config** out) {
  if (text == nullptr) return NullArgument("text");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    *out = new uavee_config{uavee::ParseConfig(text)};
    return UAVEE_OK;
  });
}

uavee_status uavee_config_clone(const uavee_config* config, uavee_config** out) {
  if (config == nullptr) return NullArgument("config");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    *out = new uavee_config{config->value};
    return UAVEE_OK;
  });
}

void uavee_config_destroy(uavee_config* config) { delete config; }

uavee_status uavee_config_set(uavee_config* config, const char* key, const char* value) {
  if (config == nullptr) return NullArgument("config");
  if (key == nullptr) return NullArgument("key");
  if (value == nullptr) return NullArgument("value");
  return Guard([&] {
    uavee::ScenarioConfig updated = config->value;
    uavee::SetConfigValue(updated, key, value);
    updated.Validate();
    config->value = updated;
    return UAVEE_OK;
  });
}

uavee_status uavee_config_get(const uavee_config* config, const char* key, char* buf,
                              size_t cap, size_t* needed) {
  if (config == nullptr) return NullArgument("config");
  if (key == nullptr) return NullArgument("key");
  return Guard([&] {
    return CopyOut(uavee::GetConfigValue(config->value, key), buf, cap, needed);
  });
}

uavee_status uavee_config_serialize(const uavee_config* config, char* buf, size_t cap,
                                    size_t* needed) {
  if (config == nullptr) return NullArgument("config");
  return Guard([&] {
    return CopyOut(uavee::SerializeConfig(config->value), buf, cap, needed);
  });
}

uavee_status uavee_experiment_create(const uavee_config* config,
                                     uavee_experiment** out) {
  if (config == nullptr) return NullArgument("config");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    config->value.Validate();
    auto* e = new uavee_experiment{};
    e->config = config->value;
    *out = e;
    return UAVEE_OK;
  });
}

void uavee_experiment_destroy(uavee_experiment* experiment) { delete experiment; }

uavee_status uavee_experiment_set_callback(uavee_experiment* experiment,
                                           uavee_row_callback callback,
                                           void* user_data) {
  if (experiment == nullptr) return NullArgument("experiment");
  experiment->callback = callback;
  experiment->user_data = user_data;
  return UAVEE_OK;
}

uavee_status uavee_experiment_run(uavee_experiment* experiment, uavee_policy policy,
                                  const int32_t* fleet_sizes, size_t n_fleets,
                                  const uint64_t* seeds, size_t n_seeds,
                                  int32_t episodes) {
  if (experiment == nullptr) return NullArgument("experiment");
  if (fleet_sizes == nullptr && n_fleets > 0) return NullArgument("fleet_sizes");
  if (seeds == nullptr && n_seeds > 0) return NullArgument("seeds");
  return Guard([&] {
    const uavee::PolicyKind kind = ToKind(policy);
    const std::vector<int> fleets(fleet_sizes, fleet_sizes + n_fleets);
    const std::vector<std::uint64_t> seed_list(seeds, seeds + n_seeds);
    uavee::RowCallback on_row;
    if (experiment->callback != nullptr) {
      on_row = [experiment](const uavee::MetricsRow& row) {
        const uavee_metrics_row c = ToC(row);
        experiment->callback(&c, experiment->user_data);
      };
    }
    std::vector<uavee::TrainedCell> trained;
    auto rows = uavee::RunExperiment(experiment->config, kind, fleets, seed_list,
                                     episodes, on_row, &trained);
    experiment->rows.insert(experiment->rows.end(), rows.begin(), rows.end());
    experiment->trained.insert(experiment->trained.end(), trained.begin(),
                               trained.end());
    AppendUnique(experiment->policies, std::string(uavee::PolicyName(kind)));
    for (int f : fleets) AppendUnique(experiment->fleet_sizes, f);
    for (std::uint64_t s : seed_list) AppendUnique(experiment->seeds, s);
    experiment->episodes = std::max(experiment->episodes, static_cast<int>(episodes));
    return UAVEE_OK;
  });
}

size_t uavee_experiment_row_count(const uavee_experiment* experiment) {
  return experiment == nullptr ? 0 : experiment->rows.size();
}

uavee_status uavee_experiment_row(const uavee_experiment* experiment, size_t index,
                                  uavee_metrics_row* out) {
  if (experiment == nullptr) return NullArgument("experiment");
  if (out == nullptr) return NullArgument("out");
  if (index >= experiment->rows.size()) {
    return SetError(UAVEE_ERR_OUT_OF_RANGE,
                    "row index " + std::to_string(index) + " out of range");
  }
  return Guard([&] {
    *out = ToC(experiment->rows[index]);
    return UAVEE_OK;
  });
}

uavee_status uavee_experiment_write(const uavee_experiment* experiment,
                                    const char* metrics_path, const char* aggregate_path,
                                    const char* manifest_path, const char* output_dir) {
  if (experiment == nullptr) return NullArgument("experiment");
  return Guard([&] {
    if (metrics_path != nullptr) uavee::WriteMetrics(experiment->rows, metrics_path);
    if (aggregate_path != nullptr) {
      uavee::WriteAggregate(
          uavee::Aggregate(experiment->rows, experiment->config.aggregate_skip),
          aggregate_path);
    }
    if (manifest_path != nullptr) {
      uavee::RunManifest m;
      m.config = experiment->config;
      m.seeds = experiment->seeds;
      for (const auto& p : experiment->policies) {
        m.policy += (m.policy.empty() ? "" : ",") + p;
      }
      m.fleet_sizes = experiment->fleet_sizes;
      m.episodes = experiment->episodes;
      m.output_dir = output_dir != nullptr ? output_dir : "";
      m.version = UAVEE_VERSION;
      uavee::WriteManifest(m, manifest_path);
    }
    return UAVEE_OK;
  });
}

uavee_status uavee_experiment_save_checkpoints(const uavee_experiment* experiment,
                                               const char* dir, size_t* files_written) {
  if (experiment == nullptr) return NullArgument("experiment");
  if (dir == nullptr) return NullArgument("dir");
  return Guard([&] {
    size_t written = 0;
    for (const auto& cell : experiment->trained) {
      for (std::size_t k = 0; k < cell.agents->distinct(); ++k) {
        const std::filesystem::path path =
            std::filesystem::path(dir) /
            ("qnet_f" + std::to_string(cell.fleet_size) + "_s" +
             std::to_string(cell.seed) + "_a" + std::to_string(k) + ".bin");
        uavee::SaveCheckpointFile(cell.agents->Distinct(k).online(), path.string());
        ++written;
      }
    }
    if (files_written != nullptr) *files_written = written;
    return UAVEE_OK;
  });
}

uavee_status uavee_verify(uavee_check_callback callback, void* user_data,
                          int* failures) {
  return Guard([&] {
    int failed = 0;
    for (const auto& check : uavee::RunVerification()) {
      if (!check.passed) ++failed;
      if (callback != nullptr) {
        callback(check.name.c_str(), check.passed ? 1 : 0, check.detail.c_str(),
                 user_data);
      }
    }
    if (failures != nullptr) *failures = failed;
    return UAVEE_OK;
  });
}

}  // extern "C"
