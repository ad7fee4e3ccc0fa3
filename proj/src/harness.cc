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

#include "uavee/harness.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include "uavee/energy.h"
#include "uavee/error.h"

namespace uavee {
namespace {

constexpr double kConstraintSlack = 1e-9;
// Learning rewards are expressed in percent of the neighbourhood energy
// efficiency at the start of the episode.
constexpr double kRewardPercent = 100.0;

std::vector<double> PerUavEfficiency(const StepSnapshot& s) {
  std::vector<double> ee(s.energy_j.size());
  for (std::size_t i = 0; i < ee.size(); ++i) {
    ee[i] = UavEnergyEfficiency(s.throughput_bits[i], s.energy_j[i]);
  }
  return ee;
}

}  // namespace

double LocalEnergyEfficiency(std::size_t self, std::span<const std::size_t> neighbors,
                             const StepSnapshot& snapshot) {
  double bits = snapshot.throughput_bits.at(self);
  double joules = snapshot.energy_j.at(self);
  for (std::size_t k : neighbors) {
    bits += snapshot.throughput_bits.at(k);
    joules += snapshot.energy_j.at(k);
  }
  if (!(joules > 0.0)) {
    Fail(ErrorKind::kDomain, "neighbourhood energy must be > 0 for a reward");
  }
  return bits / joules;
}

double ComputeReward(std::size_t self, std::span<const std::size_t> neighbors,
                     const StepSnapshot& before, const StepSnapshot& after) {
  return LocalEnergyEfficiency(self, neighbors, after) -
         LocalEnergyEfficiency(self, neighbors, before);
}

EpisodeEngine::EpisodeEngine(const ScenarioConfig& config, const World& world,
                             PolicyKind policy, AgentPool* agents, Rng& rng)
    : config_(config),
      world_(world),
      policy_(policy),
      agents_(agents),
      rng_(rng),
      radio_(RadioParams::FromConfig(config)),
      energy_(EnergyParams::FromConfig(config)),
      uavs_(world.initial_uavs) {
  const std::size_t n = uavs_.size();
  if (n == 0 || world.neighbors.size() != n) {
    Fail(ErrorKind::kInvalidArgument, "world has no UAVs or no neighbour table");
  }
  if (policy_ == PolicyKind::kDdqn &&
      (agents_ == nullptr || agents_->fleet_size() != n)) {
    Fail(ErrorKind::kInvalidArgument, "learning policy needs one agent slot per UAV");
  }
  if (IsHover()) {
    for (UavState& u : uavs_) {
      u.radius_m = 0.0;
      u.velocity_mps = 0.0;
    }
  }
  if (policy_ == PolicyKind::kEnergySaving) {
    energy_saving_.emplace(world.centers, config);
  }
  metrics_.fleet_size = n;
  CheckConstraints();
  snapshot_ = Measure();
  Record(snapshot_);

  uav_ee_ = PerUavEfficiency(snapshot_);
  ee_delta_.assign(n, 0.0);
  prev_actions_.assign(n, Action::kNoOp);
  stacks_.resize(n);
  pending_.resize(n);
  reward_reference_.assign(n, 1.0);
  if (config_.reward_scaling == RewardScaling::kEpisodeReference) {
    for (std::size_t i = 0; i < n; ++i) {
      const double ref = LocalEnergyEfficiency(i, world_.neighbors[i], snapshot_);
      reward_reference_[i] = ref > 0.0 ? ref / kRewardPercent : 1.0;
    }
  }
}

StepSnapshot EpisodeEngine::Measure() const {
  StepSnapshot s;
  s.throughput_bits =
      ServedThroughput(world_.users.positions, uavs_, radio_, config_.timestep_s);
  s.energy_j.reserve(uavs_.size());
  for (const UavState& u : uavs_) {
    s.energy_j.push_back(IsHover() ? HoverEnergy(config_.timestep_s, energy_)
                                   : FixedWingEnergy(u.radius_m, u.velocity_mps,
                                                     config_.timestep_s, energy_));
  }
  return s;
}

void EpisodeEngine::Record(const StepSnapshot& snapshot) {
  metrics_.throughput_bits.push_back(snapshot.throughput_bits);
  metrics_.energy_j.push_back(snapshot.energy_j);
  std::vector<double> radius(uavs_.size());
  std::vector<double> height(uavs_.size());
  for (std::size_t i = 0; i < uavs_.size(); ++i) {
    radius[i] = uavs_[i].radius_m;
    height[i] = uavs_[i].height_m;
  }
  metrics_.radius_m.push_back(std::move(radius));
  metrics_.height_m.push_back(std::move(height));
}

void EpisodeEngine::CheckConstraints() const {
  for (const UavState& u : uavs_) {
    const bool height_ok = u.height_m >= config_.h_min - kConstraintSlack &&
                           u.height_m <= config_.h_max + kConstraintSlack;
    const bool radius_ok = IsHover() || (u.radius_m >= config_.r_min - kConstraintSlack &&
                                         u.radius_m <= config_.r_max + kConstraintSlack);
    if (!height_ok || !radius_ok) {
      Fail(ErrorKind::kInternal,
           "UAV " + std::to_string(u.index) + " left the orbit bounds (r=" +
               std::to_string(u.radius_m) + ", h=" + std::to_string(u.height_m) + ")");
    }
  }
}

// Fixed for the whole episode; drawn on first use when randomised.
const std::vector<std::size_t>& EpisodeEngine::DecisionOrder() {
  if (order_.empty()) {
    order_.resize(uavs_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    if (config_.decision_order == DecisionOrder::kRandom) {
      std::shuffle(order_.begin(), order_.end(), rng_);
    }
  }
  return order_;
}

Features EpisodeEngine::Encode(std::size_t i, const Observation& obs) {
  AbsMaxTracker& tracker = agents_->For(i).ee_delta_tracker();
  tracker.Update(obs.ee_delta);
  FeatureScales scales;
  scales.r_max = config_.r_max;
  scales.h_max = config_.h_max;
  scales.area_diagonal_m = world_.AreaDiagonal();
  scales.ee_delta_abs_max = tracker.value();
  return EncodeObservation(obs, scales);
}

Action EpisodeEngine::DecidePolicy(std::size_t i,
                                   std::span<const std::optional<Action>> chosen) {
  switch (policy_) {
    case PolicyKind::kMinRadius: return MinRadiusAction(uavs_[i]);
    case PolicyKind::kHover: return HoverAction(uavs_[i]);
    case PolicyKind::kRandomWalk: return RandomWalkAction(uavs_[i], config_, rng_);
    case PolicyKind::kEnergySaving: return energy_saving_->Decide(uavs_[i]);
    case PolicyKind::kDdqn: break;
  }
  Observation obs = BuildObservation(uavs_[i], uavs_, world_.neighbors[i], chosen,
                                     ee_delta_[i], prev_actions_[i]);
  const Features features = Encode(i, obs);
  if (stacks_[i].empty()) {
    stacks_[i].Reset(features);
  } else {
    stacks_[i].Push(features);
  }
  const StackVector state = stacks_[i].Flatten();
  DqnAgent& agent = agents_->For(i);
  if (pending_[i]) {
    agent.Remember(pending_[i]->state, pending_[i]->action, pending_[i]->reward, state);
  }
  const Action action = agent.Act(state, LegalActions(uavs_[i], config_), rng_);
  pending_[i] = Pending{state, action, 0.0};
  if (record_decisions_) {
    decisions_.push_back(DecisionRecord{timestep_, i, std::move(obs), action});
  }
  return action;
}

void EpisodeEngine::Apply(std::span<const Action> actions) {
  for (std::size_t i = 0; i < uavs_.size(); ++i) {
    if (!IsHover()) uavs_[i] = ApplyAction(uavs_[i], actions[i], config_);
    uavs_[i] = AdvanceOrbit(uavs_[i], config_.timestep_s);
  }
  CheckConstraints();
}

void EpisodeEngine::RunTimestep() {
  if (finished_) Fail(ErrorKind::kInternal, "episode already finished");
  const std::size_t n = uavs_.size();
  std::vector<std::optional<Action>> chosen(n);
  for (std::size_t i : DecisionOrder()) {
    chosen[i] = DecidePolicy(i, chosen);
    if (record_decisions_ && policy_ != PolicyKind::kDdqn) {
      decisions_.push_back(DecisionRecord{timestep_, i, {}, *chosen[i]});
    }
  }
  std::vector<Action> actions(n);
  for (std::size_t i = 0; i < n; ++i) actions[i] = *chosen[i];

  const StepSnapshot before = snapshot_;
  Advance(actions);

  if (policy_ != PolicyKind::kDdqn) return;
  for (std::size_t i = 0; i < n; ++i) {
    pending_[i]->reward =
        ComputeReward(i, world_.neighbors[i], before, snapshot_) / reward_reference_[i];
  }
  for (std::size_t k = 0; k < agents_->distinct(); ++k) {
    agents_->Distinct(k).MaybeTrain(rng_);
    agents_->Distinct(k).EndTimestep();
  }
}

void EpisodeEngine::RunScriptedTimestep(std::span<const Action> actions) {
  if (actions.size() != uavs_.size()) {
    Fail(ErrorKind::kInvalidArgument, "one scripted action per UAV required");
  }
  if (finished_) Fail(ErrorKind::kInternal, "episode already finished");
  Advance(actions);
}

void EpisodeEngine::Advance(std::span<const Action> actions) {
  Apply(actions);
  ++timestep_;
  snapshot_ = Measure();
  Record(snapshot_);
  const std::vector<double> now = PerUavEfficiency(snapshot_);
  for (std::size_t i = 0; i < now.size(); ++i) ee_delta_[i] = now[i] - uav_ee_[i];
  uav_ee_ = now;
  prev_actions_.assign(actions.begin(), actions.end());
}

EpisodeMetrics EpisodeEngine::Run() {
  while (timestep_ < config_.steps_per_episode) RunTimestep();
  return Finish();
}

EpisodeMetrics EpisodeEngine::Finish() {
  if (finished_) Fail(ErrorKind::kInternal, "episode already finished");
  finished_ = true;
  if (policy_ == PolicyKind::kDdqn) {
    // Close every open transition with the final observation.
    const std::vector<std::optional<Action>> none(uavs_.size());
    for (std::size_t i = 0; i < uavs_.size(); ++i) {
      if (!pending_[i]) continue;
      const Observation obs = BuildObservation(uavs_[i], uavs_, world_.neighbors[i],
                                               none, ee_delta_[i], prev_actions_[i]);
      stacks_[i].Push(Encode(i, obs));
      agents_->For(i).Remember(pending_[i]->state, pending_[i]->action,
                               pending_[i]->reward, stacks_[i].Flatten());
      pending_[i].reset();
    }
  }
  metrics_.total_throughput_bits = 0.0;
  metrics_.total_energy_j = 0.0;
  for (std::size_t t = 0; t < metrics_.energy_j.size(); ++t) {
    for (std::size_t i = 0; i < metrics_.fleet_size; ++i) {
      metrics_.total_throughput_bits += metrics_.throughput_bits[t][i];
      metrics_.total_energy_j += metrics_.energy_j[t][i];
    }
  }
  metrics_.ee_bits_per_j =
      NetworkEnergyEfficiency(metrics_.throughput_bits, metrics_.energy_j);
  return std::move(metrics_);
}

EpisodeMetrics RunEpisode(const ScenarioConfig& config, const World& world,
                          PolicyKind policy, AgentPool* agents, Rng& rng) {
  EpisodeEngine engine(config, world, policy, agents, rng);
  return engine.Run();
}

World MakeEpisodeWorld(const ScenarioConfig& config, int fleet_size,
                       std::uint64_t seed, int episode) {
  Rng rng = DeriveRng(seed, "environment", static_cast<std::uint64_t>(fleet_size),
                      static_cast<std::uint64_t>(episode));
  return MakeWorld(config, fleet_size, rng);
}

std::vector<MetricsRow> RunExperiment(const ScenarioConfig& config, PolicyKind policy,
                                      std::span<const int> fleet_sizes,
                                      std::span<const std::uint64_t> seeds,
                                      int episodes, const RowCallback& on_row,
                                      std::vector<TrainedCell>* trained) {
  config.Validate();
  if (episodes < 0) Fail(ErrorKind::kInvalidArgument, "episodes must be >= 0");
  const std::string policy_label = std::string("policy:") + PolicyName(policy);
  const std::string baseline_label =
      std::string("policy:") + PolicyName(PolicyKind::kMinRadius);
  std::vector<MetricsRow> rows;
  for (int fleet : fleet_sizes) {
    if (fleet < 1) Fail(ErrorKind::kInvalidArgument, "fleet size must be >= 1");
    const auto fleet_u = static_cast<std::uint64_t>(fleet);
    for (std::uint64_t seed : seeds) {
      std::shared_ptr<AgentPool> pool;
      if (policy == PolicyKind::kDdqn) {
        pool = std::make_shared<AgentPool>(
            config, static_cast<std::size_t>(fleet),
            SplitMix64(seed ^ SplitMix64(fleet_u + 0x5bd1e995ULL)));
      }
      for (int e = 0; e < episodes; ++e) {
        const auto e_u = static_cast<std::uint64_t>(e);
        const World world = MakeEpisodeWorld(config, fleet, seed, e);
        Rng policy_rng = DeriveRng(seed, policy_label, fleet_u, e_u);
        const EpisodeMetrics m = RunEpisode(config, world, policy, pool.get(), policy_rng);
        Rng baseline_rng = DeriveRng(seed, baseline_label, fleet_u, e_u);
        const EpisodeMetrics base =
            RunEpisode(config, world, PolicyKind::kMinRadius, nullptr, baseline_rng);

        MetricsRow row;
        row.fleet_size = fleet;
        row.episode = e;
        row.policy = PolicyName(policy);
        row.seed = seed;
        row.total_throughput_bits = m.total_throughput_bits;
        row.total_energy_j = m.total_energy_j;
        row.ee_bits_per_j = m.ee_bits_per_j;
        row.norm_ee = base.ee_bits_per_j > 0.0 ? m.ee_bits_per_j / base.ee_bits_per_j : 0.0;
        row.norm_throughput = base.total_throughput_bits > 0.0
                                  ? m.total_throughput_bits / base.total_throughput_bits
                                  : 0.0;
        row.norm_energy = m.total_energy_j / base.total_energy_j;
        if (on_row) on_row(row);
        rows.push_back(std::move(row));
      }
      if (trained != nullptr && pool) {
        trained->push_back(TrainedCell{fleet, seed, pool});
      }
    }
  }
  return rows;
}

std::vector<AggregateRow> Aggregate(std::span<const MetricsRow> rows, int skip) {
  std::vector<std::pair<int, std::string>> keys;
  std::map<std::pair<int, std::string>, int> max_episode;
  for (const MetricsRow& r : rows) {
    const auto key = std::make_pair(r.fleet_size, r.policy);
    auto [it, inserted] = max_episode.emplace(key, r.episode);
    if (inserted) keys.push_back(key);
    it->second = std::max(it->second, r.episode);
  }
  std::vector<AggregateRow> out;
  for (const auto& key : keys) {
    const int start = max_episode[key] >= skip ? skip : 0;
    AggregateRow agg;
    agg.fleet_size = key.first;
    agg.policy = key.second;
    for (const MetricsRow& r : rows) {
      if (r.fleet_size != key.first || r.policy != key.second || r.episode < start) {
        continue;
      }
      ++agg.rows;
      agg.mean_ee_bits_per_j += r.ee_bits_per_j;
      agg.mean_norm_ee += r.norm_ee;
      agg.mean_norm_throughput += r.norm_throughput;
      agg.mean_norm_energy += r.norm_energy;
    }
    if (agg.rows > 0) {
      agg.mean_ee_bits_per_j /= agg.rows;
      agg.mean_norm_ee /= agg.rows;
      agg.mean_norm_throughput /= agg.rows;
      agg.mean_norm_energy /= agg.rows;
    }
    out.push_back(std::move(agg));
  }
  return out;
}

}  // namespace uavee
