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

#ifndef UAVEE_HARNESS_H_
#define UAVEE_HARNESS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uavee/agent.h"
#include "uavee/config.h"
#include "uavee/energy.h"
#include "uavee/environment.h"
#include "uavee/policies.h"
#include "uavee/radio.h"
#include "uavee/rng.h"

namespace uavee {

// Per-UAV delivered bits and consumed energy over one timestep.
struct StepSnapshot {
  std::vector<double> throughput_bits;
  std::vector<double> energy_j;
};

// sum of throughput over sum of energy across `self` and its neighbours.
double LocalEnergyEfficiency(std::size_t self, std::span<const std::size_t> neighbors,
                             const StepSnapshot& snapshot);

// Change of the neighbourhood energy efficiency between two snapshots.
double ComputeReward(std::size_t self, std::span<const std::size_t> neighbors,
                     const StepSnapshot& before, const StepSnapshot& after);

struct EpisodeMetrics {
  std::size_t fleet_size = 0;
  // [timestep][uav]
  std::vector<std::vector<double>> throughput_bits;
  std::vector<std::vector<double>> energy_j;
  // [timestep][uav], the orbit flown during that step.
  std::vector<std::vector<double>> radius_m;
  std::vector<std::vector<double>> height_m;
  double total_throughput_bits = 0.0;
  double total_energy_j = 0.0;
  double ee_bits_per_j = 0.0;
};

// Record of one decision, for inspection by tests and tools.
struct DecisionRecord {
  int timestep = 0;
  std::size_t uav = 0;
  Observation observation;
  Action action = Action::kNoOp;
};

// Steps one episode. Snapshot 1 is the initial deployment; each call to
// RunTimestep lets every UAV decide in turn, applies all actions at once,
// advances the orbits and measures the next snapshot.
class EpisodeEngine {
 public:
  // `agents` is required for PolicyKind::kDdqn and ignored otherwise. It
  // must outlive the engine.
  EpisodeEngine(const ScenarioConfig& config, const World& world, PolicyKind policy,
                AgentPool* agents, Rng& rng);

  void RunTimestep();
  // Applies the given actions instead of asking the policy. No learning.
  void RunScriptedTimestep(std::span<const Action> actions);

  int timestep() const { return timestep_; }
  const std::vector<UavState>& uavs() const { return uavs_; }
  const StepSnapshot& snapshot() const { return snapshot_; }
  void set_record_decisions(bool on) { record_decisions_ = on; }
  const std::vector<DecisionRecord>& decisions() const { return decisions_; }

  // Runs the remaining timesteps, closes the pending transitions and
  // returns the episode totals.
  EpisodeMetrics Run();
  EpisodeMetrics Finish();

 private:
  bool IsHover() const { return policy_ == PolicyKind::kHover; }
  StepSnapshot Measure() const;
  void Record(const StepSnapshot& snapshot);
  const std::vector<std::size_t>& DecisionOrder();
  Action DecidePolicy(std::size_t i, std::span<const std::optional<Action>> chosen);
  void Apply(std::span<const Action> actions);
  void Advance(std::span<const Action> actions);
  void CheckConstraints() const;
  Features Encode(std::size_t i, const Observation& obs);

  const ScenarioConfig& config_;
  const World& world_;
  PolicyKind policy_;
  AgentPool* agents_;
  Rng& rng_;
  RadioParams radio_;
  EnergyParams energy_;
  std::optional<EnergySavingPolicy> energy_saving_;

  std::vector<UavState> uavs_;
  std::vector<std::size_t> order_;
  int timestep_ = 1;
  StepSnapshot snapshot_;
  std::vector<double> uav_ee_;
  std::vector<double> ee_delta_;
  std::vector<Action> prev_actions_;
  std::vector<StateStack> stacks_;
  std::vector<double> reward_reference_;
  struct Pending {
    StackVector state{};
    Action action = Action::kNoOp;
    double reward = 0.0;
  };
  std::vector<std::optional<Pending>> pending_;
  bool record_decisions_ = false;
  std::vector<DecisionRecord> decisions_;
  EpisodeMetrics metrics_;
  bool finished_ = false;
};

EpisodeMetrics RunEpisode(const ScenarioConfig& config, const World& world,
                          PolicyKind policy, AgentPool* agents, Rng& rng);

struct MetricsRow {
  int fleet_size = 0;
  int episode = 0;
  std::string policy;
  std::uint64_t seed = 0;
  double total_throughput_bits = 0.0;
  double total_energy_j = 0.0;
  double ee_bits_per_j = 0.0;
  double norm_ee = 0.0;
  double norm_throughput = 0.0;
  double norm_energy = 0.0;
};

struct AggregateRow {
  int fleet_size = 0;
  std::string policy;
  int rows = 0;
  double mean_ee_bits_per_j = 0.0;
  double mean_norm_ee = 0.0;
  double mean_norm_throughput = 0.0;
  double mean_norm_energy = 0.0;
};

// Trained agents of one (fleet size, seed) cell, kept after a run.
struct TrainedCell {
  int fleet_size = 0;
  std::uint64_t seed = 0;
  std::shared_ptr<AgentPool> agents;
};

using RowCallback = std::function<void(const MetricsRow&)>;

// For every fleet size and seed, runs `episodes` fresh worlds under the
// policy and under the min-radius baseline on the same world, emitting one
// normalised row per episode. Learning agents persist across the episodes
// of a cell.
std::vector<MetricsRow> RunExperiment(const ScenarioConfig& config, PolicyKind policy,
                                      std::span<const int> fleet_sizes,
                                      std::span<const std::uint64_t> seeds,
                                      int episodes, const RowCallback& on_row = {},
                                      std::vector<TrainedCell>* trained = nullptr);

// The world of episode `episode` of a (seed, fleet size) cell.
World MakeEpisodeWorld(const ScenarioConfig& config, int fleet_size,
                       std::uint64_t seed, int episode);

// Per (fleet size, policy) means over episodes >= skip (all episodes when
// a cell has no more than `skip`).
std::vector<AggregateRow> Aggregate(std::span<const MetricsRow> rows, int skip);

}  // namespace uavee

#endif  // UAVEE_HARNESS_H_
