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

#include "uavee/agent.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uavee/error.h"

namespace uavee {

double EncodeAction(Action a) {
  return static_cast<double>(ActionIndex(a)) / (kNumActions - 1);
}

Features EncodeObservation(const Observation& obs, const FeatureScales& scales) {
  Features f{};
  f[0] = obs.radius_m / scales.r_max;
  f[1] = obs.height_m / scales.h_max;
  f[2] = scales.ee_delta_abs_max > 0.0 ? obs.ee_delta / scales.ee_delta_abs_max : 0.0;
  f[3] = EncodeAction(obs.prev_action);
  for (std::size_t k = 0; k < kMaxNeighbors; ++k) {
    f[4 + k] = k < obs.neighbor_dists_m.size()
                   ? obs.neighbor_dists_m[k] / scales.area_diagonal_m
                   : kPaddingDistance;
    f[4 + kMaxNeighbors + k] =
        k < obs.neighbor_actions.size() && obs.neighbor_actions[k].has_value()
            ? EncodeAction(*obs.neighbor_actions[k])
            : kNoActionCode;
  }
  return f;
}

Observation BuildObservation(const UavState& self, std::span<const UavState> fleet,
                             std::span<const std::size_t> neighbors,
                             std::span<const std::optional<Action>> chosen,
                             double ee_delta, Action prev_action) {
  Observation obs;
  obs.radius_m = self.radius_m;
  obs.height_m = self.height_m;
  obs.ee_delta = ee_delta;
  obs.prev_action = prev_action;
  for (std::size_t k : neighbors) {
    obs.neighbor_dists_m.push_back(Distance(fleet[k].Position(), self.center));
    obs.neighbor_actions.push_back(k < chosen.size() ? chosen[k] : std::nullopt);
  }
  return obs;
}

double AbsMaxTracker::Update(double x) {
  max_ = std::max(max_, std::abs(x));
  return max_;
}

void StateStack::Reset(const Features& initial) {
  frames_.assign(kStackDepth, initial);
}

void StateStack::Push(const Features& latest) {
  if (frames_.empty()) {
    Reset(latest);
    return;
  }
  frames_.push_front(latest);
  frames_.pop_back();
}

StackVector StateStack::Flatten() const {
  if (frames_.empty()) Fail(ErrorKind::kInternal, "state stack used before reset");
  StackVector out{};
  for (std::size_t d = 0; d < frames_.size(); ++d) {
    std::copy(frames_[d].begin(), frames_[d].end(),
              out.begin() + static_cast<std::ptrdiff_t>(d * kObservationSize));
  }
  return out;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) Fail(ErrorKind::kInvalidArgument, "replay capacity must be > 0");
  entries_.reserve(capacity);
}

void ReplayBuffer::Add(Transition t) {
  t.sequence = next_sequence_++;
  if (entries_.size() < capacity_) {
    entries_.push_back(std::move(t));
    return;
  }
  entries_[head_] = std::move(t);
  head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= entries_.size()) Fail(ErrorKind::kInvalidArgument, "replay index out of range");
  return entries_[(head_ + i) % entries_.size()];
}

std::vector<const Transition*> ReplayBuffer::Sample(std::size_t count, Rng& rng) const {
  if (count > entries_.size()) {
    Fail(ErrorKind::kInvalidArgument, "cannot sample more entries than stored");
  }
  std::vector<std::size_t> index(entries_.size());
  std::iota(index.begin(), index.end(), std::size_t{0});
  // Partial Fisher-Yates: the first `count` slots become a uniform draw.
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, index.size() - 1);
    std::swap(index[i], index[pick(rng)]);
  }
  std::vector<const Transition*> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(&entries_[index[i]]);
  return out;
}

Action SelectAction(std::span<const double> q, double epsilon, Rng& rng,
                    const ActionMask& legal) {
  if (q.size() != static_cast<std::size_t>(kNumActions)) {
    Fail(ErrorKind::kInvalidArgument, "expected one Q-value per action");
  }
  std::array<int, kNumActions> options{};
  int count = 0;
  for (int a = 0; a < kNumActions; ++a) {
    if (legal[a]) options[count++] = a;
  }
  if (count == 0) Fail(ErrorKind::kInternal, "no legal action");
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < epsilon) {
    std::uniform_int_distribution<int> pick(0, count - 1);
    return ActionFromIndex(options[pick(rng)]);
  }
  int best = options[0];
  for (int i = 1; i < count; ++i) {
    if (q[options[i]] > q[best]) best = options[i];
  }
  return ActionFromIndex(best);
}

double DecayEpsilon(double epsilon, double decay, double floor) {
  return std::max(floor, epsilon * decay);
}

std::optional<double> TrainStep(DuelingNet& online, const DuelingNet& target,
                                const ReplayBuffer& buffer, Optimizer& optimizer,
                                Rng& rng, const TrainParams& params,
                                TrainWorkspace* workspace) {
  if (params.batch_size == 0 || buffer.size() < params.batch_size) {
    return std::nullopt;
  }
  TrainWorkspace local;
  TrainWorkspace& w = workspace != nullptr ? *workspace : local;
  const auto batch = buffer.Sample(params.batch_size, rng);
  const auto n = static_cast<Eigen::Index>(batch.size());
  w.states.resize(kStackSize, n);
  w.next_states.resize(kStackSize, n);
  std::vector<int> actions(batch.size());
  for (Eigen::Index b = 0; b < n; ++b) {
    const Transition& t = *batch[static_cast<std::size_t>(b)];
    w.states.col(b) = Eigen::Map<const Eigen::VectorXd>(t.state.data(), kStackSize);
    w.next_states.col(b) =
        Eigen::Map<const Eigen::VectorXd>(t.next_state.data(), kStackSize);
    actions[static_cast<std::size_t>(b)] = t.action;
  }

  const Eigen::MatrixXd& next_q = target.Forward(w.next_states, &w.target);
  w.targets.resize(n);
  if (params.double_q) {
    const Eigen::MatrixXd& online_next = online.Forward(w.next_states, &w.online);
    for (Eigen::Index b = 0; b < n; ++b) {
      Eigen::Index best = 0;
      online_next.col(b).maxCoeff(&best);
      w.targets(b) = next_q(best, b);
    }
  } else {
    w.targets = next_q.colwise().maxCoeff().transpose();
  }
  for (Eigen::Index b = 0; b < n; ++b) {
    w.targets(b) = batch[static_cast<std::size_t>(b)]->reward + params.discount * w.targets(b);
  }

  const double loss = online.Loss(w.states, actions, w.targets, &w.gradient, &w.online);
  optimizer.Step(online, w.gradient);
  return loss;
}

void UpdateTarget(const DuelingNet& online, DuelingNet& target) {
  target.CopyFrom(online);
}

DqnAgent::DqnAgent(const ScenarioConfig& config, Rng& init_rng)
    : config_(config),
      online_(NetShape::Default(config.head_activation)),
      optimizer_(config.optimizer, config.learning_rate, config.momentum, online_),
      buffer_(static_cast<std::size_t>(config.replay_capacity)),
      epsilon_(config.epsilon_start) {
  online_.InitGlorot(init_rng);
  target_ = online_;
}

Action DqnAgent::Act(std::span<const double> stack, const ActionMask& legal, Rng& rng) {
  const Eigen::VectorXd q = online_.QValues(stack);
  return SelectAction(std::span<const double>(q.data(), static_cast<std::size_t>(q.size())),
                      epsilon_, rng, legal);
}

void DqnAgent::Remember(const StackVector& state, Action action, double reward,
                        const StackVector& next_state) {
  Transition t;
  t.state = state;
  t.action = ActionIndex(action);
  t.reward = reward;
  t.next_state = next_state;
  buffer_.Add(std::move(t));
}

std::optional<double> DqnAgent::MaybeTrain(Rng& rng) {
  if (timesteps_ % config_.train_every != 0) return std::nullopt;
  const TrainParams params{static_cast<std::size_t>(config_.batch_size),
                           config_.discount, config_.double_q};
  const DuelingNet& target = config_.target_update_steps > 0 ? target_ : online_;
  const auto loss = TrainStep(online_, target, buffer_, optimizer_, rng, params, &workspace_);
  if (!loss) return loss;
  ++train_steps_;
  if (config_.target_update_steps > 0 &&
      train_steps_ % config_.target_update_steps == 0) {
    UpdateTarget(online_, target_);
  }
  return loss;
}

void DqnAgent::EndTimestep() {
  ++timesteps_;
  epsilon_ = DecayEpsilon(epsilon_, config_.epsilon_decay, config_.epsilon_min);
}

AgentPool::AgentPool(const ScenarioConfig& config, std::size_t fleet_size,
                     std::uint64_t seed) {
  const std::size_t count = config.share_weights ? 1 : fleet_size;
  for (std::size_t k = 0; k < count; ++k) {
    Rng init = DeriveRng(seed, "agent-init", k);
    agents_.push_back(std::make_unique<DqnAgent>(config, init));
  }
  slots_.resize(fleet_size);
  for (std::size_t i = 0; i < fleet_size; ++i) {
    slots_[i] = config.share_weights ? 0 : i;
  }
}

}  // namespace uavee
