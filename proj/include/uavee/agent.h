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

#ifndef UAVEE_AGENT_H_
#define UAVEE_AGENT_H_

#include <array>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "uavee/config.h"
#include "uavee/dueling_net.h"
#include "uavee/environment.h"
#include "uavee/policies.h"
#include "uavee/rng.h"

namespace uavee {

inline constexpr int kObservationSize = 16;
inline constexpr int kStackDepth = 4;
inline constexpr int kStackSize = kObservationSize * kStackDepth;

// Encoded value of a neighbour action slot that carries no action: the
// neighbour has not chosen yet this timestep, or the slot is padding.
inline constexpr double kNoActionCode = -1.0;
inline constexpr double kPaddingDistance = -1.0;

// One UAV's view at decision time, in physical units.
struct Observation {
  double radius_m = 0.0;
  double height_m = 0.0;
  double ee_delta = 0.0;  // bits/J
  Action prev_action = Action::kNoOp;
  // Distance from each neighbour's current position to this UAV's center,
  // in neighbour-table order. Shorter than kMaxNeighbors when the fleet is
  // small.
  std::vector<double> neighbor_dists_m;
  // Action already chosen this timestep by each neighbour, if any.
  std::vector<std::optional<Action>> neighbor_actions;
};

using Features = std::array<double, kObservationSize>;
using StackVector = std::array<double, kStackSize>;

// Normalisers applied when encoding an observation.
struct FeatureScales {
  double r_max = 1000.0;
  double h_max = 300.0;
  double area_diagonal_m = 1.0;
  double ee_delta_abs_max = 0.0;  // 0 encodes every delta as 0
};

// Action index a maps to a / 4, so the five actions land on {0, .25, .5,
// .75, 1}.
double EncodeAction(Action a);

// Layout: [r, h, ee_delta, prev_action, dist x6, action x6].
Features EncodeObservation(const Observation& obs, const FeatureScales& scales);

// Builds the observation of `self` given the actions the fleet has chosen so
// far this timestep (nullopt for UAVs that have not decided yet).
Observation BuildObservation(const UavState& self, std::span<const UavState> fleet,
                             std::span<const std::size_t> neighbors,
                             std::span<const std::optional<Action>> chosen,
                             double ee_delta, Action prev_action);

// Largest |x| seen so far.
class AbsMaxTracker {
 public:
  double Update(double x);
  double value() const { return max_; }

 private:
  double max_ = 0.0;
};

// The four most recent encoded observations, newest first.
class StateStack {
 public:
  void Reset(const Features& initial);
  void Push(const Features& latest);
  StackVector Flatten() const;
  bool empty() const { return frames_.empty(); }

 private:
  std::deque<Features> frames_;
};

struct Transition {
  StackVector state{};
  int action = 0;
  double reward = 0.0;
  StackVector next_state{};
  std::uint64_t sequence = 0;
};

// Fixed-capacity FIFO of transitions.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void Add(Transition t);
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const;  // 0 = oldest

  // `count` distinct entries drawn uniformly.
  std::vector<const Transition*> Sample(std::size_t count, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // slot of the oldest entry once full
  std::uint64_t next_sequence_ = 0;
  std::vector<Transition> entries_;
};

// Uniform over legal actions with probability epsilon, else the legal
// argmax (lowest index on ties).
Action SelectAction(std::span<const double> q, double epsilon, Rng& rng,
                    const ActionMask& legal);

double DecayEpsilon(double epsilon, double decay, double floor);

struct TrainParams {
  std::size_t batch_size = 1000;
  double discount = 0.1;
  bool double_q = false;
};

// Buffers reused by successive training steps of one agent.
struct TrainWorkspace {
  Eigen::MatrixXd states;
  Eigen::MatrixXd next_states;
  Eigen::VectorXd targets;
  ForwardCache online;
  ForwardCache target;
  ParamSet gradient;
};

// One minibatch gradient step on `online`. TD target
// y = r + discount * max_a Q_target(s', a) (or Q_target(s', argmax_a
// Q_online(s', a)) with double_q). Returns nullopt without touching the
// network while the buffer holds fewer than batch_size entries.
std::optional<double> TrainStep(DuelingNet& online, const DuelingNet& target,
                                const ReplayBuffer& buffer, Optimizer& optimizer,
                                Rng& rng, const TrainParams& params,
                                TrainWorkspace* workspace = nullptr);

// Hard copy of every weight.
void UpdateTarget(const DuelingNet& online, DuelingNet& target);

// One learning agent: online and target networks, optimiser, replay memory
// and exploration schedule.
class DqnAgent {
 public:
  DqnAgent(const ScenarioConfig& config, Rng& init_rng);

  Action Act(std::span<const double> stack, const ActionMask& legal, Rng& rng);
  void Remember(const StackVector& state, Action action, double reward,
                const StackVector& next_state);
  // Runs a training step when the cadence and buffer allow it.
  std::optional<double> MaybeTrain(Rng& rng);
  void EndTimestep();

  double epsilon() const { return epsilon_; }
  void set_epsilon(double e) { epsilon_ = e; }
  long train_steps() const { return train_steps_; }
  const DuelingNet& online() const { return online_; }
  DuelingNet& online() { return online_; }
  const DuelingNet& target() const { return target_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  AbsMaxTracker& ee_delta_tracker() { return ee_delta_tracker_; }

 private:
  ScenarioConfig config_;
  DuelingNet online_;
  DuelingNet target_;
  Optimizer optimizer_;
  ReplayBuffer buffer_;
  TrainWorkspace workspace_;
  AbsMaxTracker ee_delta_tracker_;
  double epsilon_;
  long timesteps_ = 0;
  long train_steps_ = 0;
};

// Maps each UAV to its agent. With share_weights every UAV uses one agent.
class AgentPool {
 public:
  AgentPool(const ScenarioConfig& config, std::size_t fleet_size,
            std::uint64_t seed);

  std::size_t fleet_size() const { return slots_.size(); }
  DqnAgent& For(std::size_t uav) { return *agents_[slots_[uav]]; }
  std::size_t distinct() const { return agents_.size(); }
  DqnAgent& Distinct(std::size_t k) { return *agents_[k]; }

 private:
  std::vector<std::unique_ptr<DqnAgent>> agents_;
  std::vector<std::size_t> slots_;
};

}  // namespace uavee

#endif  // UAVEE_AGENT_H_
