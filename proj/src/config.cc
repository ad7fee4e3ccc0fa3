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

#include "uavee/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <variant>

#include "uavee/error.h"

namespace uavee {
namespace {

template <typename E>
struct EnumName {
  E value;
  const char* name;
};

constexpr EnumName<OptimizerKind> kOptimizerNames[] = {
    {OptimizerKind::kSgd, "sgd"},
    {OptimizerKind::kMomentum, "momentum"},
    {OptimizerKind::kAdam, "adam"}};
constexpr EnumName<DecisionOrder> kOrderNames[] = {
    {DecisionOrder::kAscending, "ascending"},
    {DecisionOrder::kRandom, "random"}};
constexpr EnumName<HeadActivation> kHeadNames[] = {
    {HeadActivation::kRelu, "relu"}, {HeadActivation::kLinear, "linear"}};
constexpr EnumName<RewardScaling> kRewardNames[] = {
    {RewardScaling::kNone, "none"},
    {RewardScaling::kEpisodeReference, "episode_reference"}};

using DoubleField = double ScenarioConfig::*;
using IntField = int ScenarioConfig::*;
using BoolField = bool ScenarioConfig::*;
using EnumField =
    std::variant<OptimizerKind ScenarioConfig::*, DecisionOrder ScenarioConfig::*,
                 HeadActivation ScenarioConfig::*, RewardScaling ScenarioConfig::*>;
using Field = std::variant<DoubleField, IntField, BoolField, EnumField>;

struct Entry {
  const char* key;
  Field field;
};

const std::vector<Entry>& Entries() {
  static const std::vector<Entry> entries = {
      {"carrier_frequency_hz", &ScenarioConfig::carrier_frequency_hz},
      {"pathloss_exponent", &ScenarioConfig::pathloss_exponent},
      {"tx_power_w", &ScenarioConfig::tx_power_w},
      {"beamwidth_deg", &ScenarioConfig::beamwidth_deg},
      {"nearfield_db", &ScenarioConfig::nearfield_db},
      {"noise_power_w", &ScenarioConfig::noise_power_w},
      {"bandwidth_hz", &ScenarioConfig::bandwidth_hz},
      {"uav_mass_kg", &ScenarioConfig::uav_mass_kg},
      {"c1", &ScenarioConfig::c1},
      {"c2", &ScenarioConfig::c2},
      {"gravity", &ScenarioConfig::gravity},
      {"air_density", &ScenarioConfig::air_density},
      {"rotor_area_m2", &ScenarioConfig::rotor_area_m2},
      {"user_density_km2", &ScenarioConfig::user_density_km2},
      {"uav_density_km2", &ScenarioConfig::uav_density_km2},
      {"h_min", &ScenarioConfig::h_min},
      {"h_max", &ScenarioConfig::h_max},
      {"r_min", &ScenarioConfig::r_min},
      {"r_max", &ScenarioConfig::r_max},
      {"h_inc", &ScenarioConfig::h_inc},
      {"r_inc", &ScenarioConfig::r_inc},
      {"h_init", &ScenarioConfig::h_init},
      {"timestep_s", &ScenarioConfig::timestep_s},
      {"steps_per_episode", &ScenarioConfig::steps_per_episode},
      {"episodes", &ScenarioConfig::episodes},
      {"uav_count", &ScenarioConfig::uav_count},
      {"aggregate_skip", &ScenarioConfig::aggregate_skip},
      {"discount", &ScenarioConfig::discount},
      {"learning_rate", &ScenarioConfig::learning_rate},
      {"epsilon_start", &ScenarioConfig::epsilon_start},
      {"epsilon_decay", &ScenarioConfig::epsilon_decay},
      {"epsilon_min", &ScenarioConfig::epsilon_min},
      {"replay_capacity", &ScenarioConfig::replay_capacity},
      {"batch_size", &ScenarioConfig::batch_size},
      {"target_update_steps", &ScenarioConfig::target_update_steps},
      {"train_every", &ScenarioConfig::train_every},
      {"double_q", &ScenarioConfig::double_q},
      {"share_weights", &ScenarioConfig::share_weights},
      {"optimizer", EnumField{&ScenarioConfig::optimizer}},
      {"momentum", &ScenarioConfig::momentum},
      {"head_activation", EnumField{&ScenarioConfig::head_activation}},
      {"reward_scaling", EnumField{&ScenarioConfig::reward_scaling}},
      {"decision_order", EnumField{&ScenarioConfig::decision_order}},
  };
  return entries;
}

const Entry& FindEntry(std::string_view key) {
  for (const Entry& e : Entries()) {
    if (key == e.key) return e;
  }
  Fail(ErrorKind::kParse, "unknown config key '" + std::string(key) + "'");
}

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double ParseDouble(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    Fail(ErrorKind::kParse, "config key '" + std::string(key) +
                                "': expected a finite number, got '" +
                                std::string(text) + "'");
  }
  return value;
}

int ParseInt(std::string_view key, std::string_view text) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    Fail(ErrorKind::kParse, "config key '" + std::string(key) +
                                "': expected an integer, got '" +
                                std::string(text) + "'");
  }
  return value;
}

bool ParseBool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  Fail(ErrorKind::kParse, "config key '" + std::string(key) +
                              "': expected true/false, got '" +
                              std::string(text) + "'");
}

template <typename E, std::size_t N>
E ParseEnum(std::string_view key, std::string_view text,
            const EnumName<E> (&names)[N]) {
  for (const auto& n : names) {
    if (text == n.name) return n.value;
  }
  std::string allowed;
  for (const auto& n : names) {
    if (!allowed.empty()) allowed += "|";
    allowed += n.name;
  }
  Fail(ErrorKind::kParse, "config key '" + std::string(key) + "': expected " +
                              allowed + ", got '" + std::string(text) + "'");
}

template <typename E, std::size_t N>
const char* EnumToName(E value, const EnumName<E> (&names)[N]) {
  for (const auto& n : names) {
    if (n.value == value) return n.name;
  }
  return "?";
}

struct EnumSetter {
  ScenarioConfig& config;
  std::string_view key;
  std::string_view text;
  void operator()(OptimizerKind ScenarioConfig::*f) const {
    config.*f = ParseEnum(key, text, kOptimizerNames);
  }
  void operator()(DecisionOrder ScenarioConfig::*f) const {
    config.*f = ParseEnum(key, text, kOrderNames);
  }
  void operator()(HeadActivation ScenarioConfig::*f) const {
    config.*f = ParseEnum(key, text, kHeadNames);
  }
  void operator()(RewardScaling ScenarioConfig::*f) const {
    config.*f = ParseEnum(key, text, kRewardNames);
  }
};

struct EnumGetter {
  const ScenarioConfig& config;
  std::string operator()(OptimizerKind ScenarioConfig::*f) const {
    return EnumToName(config.*f, kOptimizerNames);
  }
  std::string operator()(DecisionOrder ScenarioConfig::*f) const {
    return EnumToName(config.*f, kOrderNames);
  }
  std::string operator()(HeadActivation ScenarioConfig::*f) const {
    return EnumToName(config.*f, kHeadNames);
  }
  std::string operator()(RewardScaling ScenarioConfig::*f) const {
    return EnumToName(config.*f, kRewardNames);
  }
};

void Require(bool ok, const char* key, const std::string& rule) {
  if (!ok) {
    Fail(ErrorKind::kOutOfRange,
         std::string("config key '") + key + "' out of range: " + rule);
  }
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) Fail(ErrorKind::kInternal, "to_chars failed");
  return std::string(buf, ptr);
}

void SetConfigValue(ScenarioConfig& config, std::string_view key,
                    std::string_view value) {
  const Entry& entry = FindEntry(key);
  value = Trim(value);
  std::visit(
      [&](const auto& field) {
        using T = std::decay_t<decltype(field)>;
        if constexpr (std::is_same_v<T, DoubleField>) {
          config.*field = ParseDouble(key, value);
        } else if constexpr (std::is_same_v<T, IntField>) {
          config.*field = ParseInt(key, value);
        } else if constexpr (std::is_same_v<T, BoolField>) {
          config.*field = ParseBool(key, value);
        } else {
          std::visit(EnumSetter{config, key, value}, field);
        }
      },
      entry.field);
}

std::string GetConfigValue(const ScenarioConfig& config, std::string_view key) {
  const Entry& entry = FindEntry(key);
  return std::visit(
      [&](const auto& field) -> std::string {
        using T = std::decay_t<decltype(field)>;
        if constexpr (std::is_same_v<T, DoubleField>) {
          return FormatDouble(config.*field);
        } else if constexpr (std::is_same_v<T, IntField>) {
          return std::to_string(config.*field);
        } else if constexpr (std::is_same_v<T, BoolField>) {
          return config.*field ? "true" : "false";
        } else {
          return std::visit(EnumGetter{config}, field);
        }
      },
      entry.field);
}

ScenarioConfig ParseConfig(std::string_view text) {
  ScenarioConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      Fail(ErrorKind::kParse, "config line " + std::to_string(line_no) +
                                  ": expected key=value");
    }
    SetConfigValue(config, Trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  config.Validate();
  return config;
}

ScenarioConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str());
}

std::string SerializeConfig(const ScenarioConfig& config) {
  std::string out;
  for (const Entry& e : Entries()) {
    out += e.key;
    out += '=';
    out += GetConfigValue(config, e.key);
    out += '\n';
  }
  return out;
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  for (const Entry& e : Entries()) keys.emplace_back(e.key);
  return keys;
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  return SerializeConfig(a) == SerializeConfig(b);
}

double ScenarioConfig::beamwidth_rad() const {
  return beamwidth_deg * std::numbers::pi / 180.0;
}

void ScenarioConfig::Validate() const {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  Require(positive(carrier_frequency_hz), "carrier_frequency_hz", "must be > 0");
  Require(positive(pathloss_exponent), "pathloss_exponent", "must be > 0");
  Require(positive(tx_power_w), "tx_power_w", "must be > 0");
  Require(positive(beamwidth_deg) && beamwidth_deg < 180.0, "beamwidth_deg",
          "must lie in (0, 180)");
  Require(std::isfinite(nearfield_db), "nearfield_db", "must be finite");
  Require(positive(noise_power_w), "noise_power_w", "must be > 0");
  Require(positive(bandwidth_hz), "bandwidth_hz", "must be > 0");
  Require(positive(uav_mass_kg), "uav_mass_kg", "must be > 0");
  Require(positive(c1), "c1", "must be > 0");
  Require(positive(c2), "c2", "must be > 0");
  Require(positive(gravity), "gravity", "must be > 0");
  Require(positive(air_density), "air_density", "must be > 0");
  Require(positive(rotor_area_m2), "rotor_area_m2", "must be > 0");
  Require(std::isfinite(user_density_km2) && user_density_km2 >= 0.0,
          "user_density_km2", "must be >= 0");
  Require(positive(uav_density_km2), "uav_density_km2", "must be > 0");
  Require(positive(h_min), "h_min", "must be > 0");
  Require(positive(h_max) && h_min < h_max, "h_max", "must exceed h_min");
  Require(positive(r_min), "r_min", "must be > 0");
  Require(positive(r_max) && r_min < r_max, "r_min",
          "must be below r_max");
  Require(positive(h_inc), "h_inc", "must be > 0");
  Require(positive(r_inc), "r_inc", "must be > 0");
  Require(h_init >= h_min && h_init <= h_max, "h_init",
          "must lie in [h_min, h_max]");
  Require(positive(timestep_s), "timestep_s", "must be > 0");
  Require(steps_per_episode >= 1, "steps_per_episode", "must be >= 1");
  Require(episodes >= 1, "episodes", "must be >= 1");
  Require(uav_count >= 1, "uav_count", "must be >= 1");
  Require(aggregate_skip >= 0, "aggregate_skip", "must be >= 0");
  Require(discount >= 0.0 && discount < 1.0, "discount", "must lie in [0, 1)");
  Require(positive(learning_rate), "learning_rate", "must be > 0");
  Require(epsilon_start >= 0.0 && epsilon_start <= 1.0, "epsilon_start",
          "must lie in [0, 1]");
  Require(epsilon_decay > 0.0 && epsilon_decay <= 1.0, "epsilon_decay",
          "must lie in (0, 1]");
  Require(epsilon_min >= 0.0 && epsilon_min <= epsilon_start, "epsilon_min",
          "must lie in [0, epsilon_start]");
  Require(batch_size >= 1, "batch_size", "must be >= 1");
  Require(replay_capacity >= batch_size, "replay_capacity",
          "must be >= batch_size");
  Require(target_update_steps >= 0, "target_update_steps", "must be >= 0");
  Require(train_every >= 1, "train_every", "must be >= 1");
  Require(momentum >= 0.0 && momentum < 1.0, "momentum", "must lie in [0, 1)");
}

}  // namespace uavee
