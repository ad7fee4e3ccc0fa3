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

#ifndef UAVEE_CONFIG_H_
#define UAVEE_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace uavee {

enum class OptimizerKind { kSgd, kMomentum, kAdam };
enum class DecisionOrder { kAscending, kRandom };
enum class HeadActivation { kRelu, kLinear };
enum class RewardScaling { kNone, kEpisodeReference };

// All physical, learning and experiment constants of a scenario. Defaults
// describe the reference scenario; docs/config.md lists every key and marks
// the stand-in values.
struct ScenarioConfig {
  // Radio.
  double carrier_frequency_hz = 2e9;
  double pathloss_exponent = 2.1;
  double tx_power_w = 1.0;
  double beamwidth_deg = 30.0;
  double nearfield_db = -38.4;
  double noise_power_w = 8e-13;
  double bandwidth_hz = 1e6;

  // Airframe.
  double uav_mass_kg = 10.0;
  double c1 = 9.26e-4;
  double c2 = 2250.0;
  double gravity = 9.81;
  double air_density = 1.225;
  double rotor_area_m2 = 0.5;

  // Deployment.
  double user_density_km2 = 10.0;
  double uav_density_km2 = 0.2;
  double h_min = 20.0;
  double h_max = 300.0;
  double r_min = 50.0;
  double r_max = 1000.0;
  double h_inc = 5.0;
  double r_inc = 10.0;
  double h_init = 100.0;
  double timestep_s = 2.0;
  int steps_per_episode = 250;
  int episodes = 500;
  int uav_count = 10;
  int aggregate_skip = 100;

  // Learning.
  double discount = 0.1;
  double learning_rate = 5e-5;
  double epsilon_start = 1.0;
  double epsilon_decay = 0.99995;
  double epsilon_min = 0.001;
  int replay_capacity = 5000;
  int batch_size = 1000;
  int target_update_steps = 200;  // 0 disables the frozen target network
  int train_every = 1;
  bool double_q = false;
  bool share_weights = false;
  OptimizerKind optimizer = OptimizerKind::kSgd;
  double momentum = 0.9;
  HeadActivation head_activation = HeadActivation::kRelu;
  RewardScaling reward_scaling = RewardScaling::kEpisodeReference;
  DecisionOrder decision_order = DecisionOrder::kAscending;

  // Half-power beamwidth in radians, the unit every radio routine expects.
  double beamwidth_rad() const;

  // Throws Error(kOutOfRange) naming the first offending key.
  void Validate() const;
};

// Parses the flat `key = value` format. Blank lines and `#` comments are
// ignored, unknown keys are rejected and missing keys keep their defaults.
ScenarioConfig ParseConfig(std::string_view text);
ScenarioConfig LoadConfig(const std::string& path);

// Applies one textual assignment without validating the whole config.
void SetConfigValue(ScenarioConfig& config, std::string_view key,
                    std::string_view value);
std::string GetConfigValue(const ScenarioConfig& config, std::string_view key);

// Canonical serialization: every key in declaration order, doubles printed
// with shortest round-trip precision. ParseConfig(Serialize(c)) == c.
std::string SerializeConfig(const ScenarioConfig& config);
std::vector<std::string> ConfigKeys();

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

std::string FormatDouble(double value);

}  // namespace uavee

#endif  // UAVEE_CONFIG_H_
