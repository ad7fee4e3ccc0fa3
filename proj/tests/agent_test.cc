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

#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "uavee/agent.h"
#include "uavee/config.h"
#include "uavee/dueling_net.h"
#include "uavee/environment.h"
#include "uavee/policies.h"
#include "uavee/rng.h"

using namespace uavee;

namespace {

UavState Uav(std::size_t index, Vec2 center, double r, double h, double phase) {
  UavState s;
  s.index = index;
  s.center = center;
  s.radius_m = r;
  s.height_m = h;
  s.velocity_mps = 20.0;
  s.phase_rad = phase;
  return s;
}

Features Frame(double v) {
  Features f{};
  f.fill(v);
  return f;
}

Transition Tagged(double reward) {
  Transition t;
  t.reward = reward;
  return t;
}

}  // namespace

TEST_SUITE("agent") {

TEST_CASE("first observation of a three-UAV fleet") {
  const std::vector<UavState> fleet = {Uav(0, {0, 0}, 50, 100, 0.0),
                                       Uav(1, {300, 0}, 50, 100, 0.0),
                                       Uav(2, {0, 400}, 60, 120, 0.0)};
  const std::vector<std::size_t> neighbors = {1, 2};
  const std::vector<std::optional<Action>> chosen(3);
  const Observation obs =
      BuildObservation(fleet[0], fleet, neighbors, chosen, 0.0, Action::kNoOp);
  CHECK(obs.radius_m == 50.0);
  CHECK(obs.height_m == 100.0);
  CHECK(obs.ee_delta == 0.0);
  CHECK(obs.prev_action == Action::kNoOp);
  REQUIRE(obs.neighbor_dists_m.size() == 2);
  // Neighbour 1 flies at (350, 0), neighbour 2 at (60, 400).
  CHECK(obs.neighbor_dists_m[0] == doctest::Approx(350.0));
  CHECK(obs.neighbor_dists_m[1] == doctest::Approx(std::hypot(60.0, 400.0)));
  REQUIRE(obs.neighbor_actions.size() == 2);
  CHECK_FALSE(obs.neighbor_actions[0].has_value());

  FeatureScales scales;
  scales.area_diagonal_m = 1000.0;
  const Features f = EncodeObservation(obs, scales);
  CHECK(f[0] == 0.05);
  CHECK(f[1] == doctest::Approx(1.0 / 3.0));
  CHECK(f[2] == 0.0);
  CHECK(f[3] == 1.0);
  CHECK(f[4] == doctest::Approx(0.35));
  // Slots 3..6 carry padding.
  for (int k = 6; k < 10; ++k) CHECK(f[k] == kPaddingDistance);
  for (int k = 10; k < 16; ++k) CHECK(f[k] == kNoActionCode);
}

TEST_CASE("neighbour actions chosen earlier in the timestep are visible") {
  const std::vector<UavState> fleet = {Uav(0, {0, 0}, 50, 100, 0.0),
                                       Uav(1, {300, 0}, 50, 100, 0.0),
                                       Uav(2, {0, 400}, 50, 100, 0.0)};
  const std::vector<std::size_t> neighbors = {1, 2};
  std::vector<std::optional<Action>> chosen(3);
  chosen[2] = Action::kRadiusUp;
  const Observation obs =
      BuildObservation(fleet[0], fleet, neighbors, chosen, 12.5, Action::kHeightDown);
  FeatureScales scales;
  scales.area_diagonal_m = 1000.0;
  scales.ee_delta_abs_max = 25.0;
  const Features f = EncodeObservation(obs, scales);
  CHECK(f[2] == 0.5);
  CHECK(f[3] == 0.75);
  CHECK(f[10] == kNoActionCode);
  CHECK(f[11] == 0.0);
}

TEST_CASE("action encoding spans zero to one") {
  CHECK(EncodeAction(Action::kRadiusUp) == 0.0);
  CHECK(EncodeAction(Action::kRadiusDown) == 0.25);
  CHECK(EncodeAction(Action::kHeightUp) == 0.5);
  CHECK(EncodeAction(Action::kHeightDown) == 0.75);
  CHECK(EncodeAction(Action::kNoOp) == 1.0);
}

TEST_CASE("encoded features stay bounded") {
  Rng rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  AbsMaxTracker tracker;
  for (int trial = 0; trial < 500; ++trial) {
    Observation obs;
    obs.radius_m = 50.0 + 950.0 * u(rng);
    obs.height_m = 20.0 + 280.0 * u(rng);
    obs.ee_delta = (u(rng) - 0.5) * 1e6;
    obs.prev_action = ActionFromIndex(trial % 5);
    for (int k = 0; k < 6; ++k) {
      obs.neighbor_dists_m.push_back(1414.0 * u(rng));
      obs.neighbor_actions.push_back(k % 2 ? std::optional<Action>{} : Action::kNoOp);
    }
    FeatureScales scales;
    scales.area_diagonal_m = 1414.3;
    scales.ee_delta_abs_max = tracker.Update(obs.ee_delta);
    for (double x : EncodeObservation(obs, scales)) {
      CHECK(x >= -1.0);
      CHECK(x <= 1.0);
    }
  }
}

TEST_CASE("state stack replicates then shifts") {
  StateStack stack;
  CHECK(stack.empty());
  stack.Reset(Frame(1.0));
  StackVector v = stack.Flatten();
  for (double x : v) CHECK(x == 1.0);
  stack.Push(Frame(2.0));
  v = stack.Flatten();
  CHECK(v[0] == 2.0);
  CHECK(v[kObservationSize] == 1.0);
  CHECK(v[kStackSize - 1] == 1.0);
  for (double k = 3; k <= 6; ++k) stack.Push(Frame(k));
  v = stack.Flatten();
  CHECK(v[0] == 6.0);
  CHECK(v[16] == 5.0);
  CHECK(v[32] == 4.0);
  CHECK(v[48] == 3.0);
}

TEST_CASE("replay buffer evicts the oldest entry first") {
  ReplayBuffer buffer(5000);
  for (int k = 0; k < 6000; ++k) {
    buffer.Add(Tagged(k));
    REQUIRE(buffer.size() <= 5000);
  }
  CHECK(buffer.size() == 5000);
  CHECK(buffer.at(0).sequence == 1000);
  CHECK(buffer.at(0).reward == 1000.0);
  CHECK(buffer.at(4999).sequence == 5999);
  for (std::size_t i = 1; i < buffer.size(); ++i) {
    REQUIRE(buffer.at(i).sequence == buffer.at(i - 1).sequence + 1);
  }
}

TEST_CASE("replay sampling is without replacement and roughly uniform") {
  ReplayBuffer buffer(50);
  for (int k = 0; k < 50; ++k) buffer.Add(Tagged(k));
  Rng rng(8);
  std::array<int, 50> hits{};
  for (int draw = 0; draw < 4000; ++draw) {
    const auto batch = buffer.Sample(10, rng);
    std::set<std::uint64_t> seen;
    for (const Transition* t : batch) seen.insert(t->sequence);
    REQUIRE(seen.size() == 10);
    for (auto s : seen) ++hits[s];
  }
  // Each entry expected 800 times, sd about 25.
  for (int h : hits) CHECK(std::abs(h - 800) < 125);
}

TEST_CASE("greedy selection respects the mask and ties") {
  Rng rng(2);
  ActionMask all{true, true, true, true, true};
  const std::vector<double> q = {1, 0, 0, 0, 0};
  CHECK(SelectAction(q, 0.0, rng, all) == Action::kRadiusUp);
  ActionMask no_up = all;
  no_up[0] = false;
  CHECK(SelectAction(q, 0.0, rng, no_up) == Action::kRadiusDown);
  const std::vector<double> tie = {0, 3, 3, 1, 3};
  CHECK(SelectAction(tie, 0.0, rng, all) == Action::kRadiusDown);
}

TEST_CASE("full exploration is uniform over the legal set") {
  Rng rng(3);
  ActionMask mask{false, true, true, false, true};
  const std::vector<double> q = {9, 0, 0, 9, 0};
  std::array<int, 5> count{};
  const int n = 30000;
  for (int k = 0; k < n; ++k) ++count[ActionIndex(SelectAction(q, 1.0, rng, mask))];
  CHECK(count[0] == 0);
  CHECK(count[3] == 0);
  for (int a : {1, 2, 4}) CHECK(std::abs(count[a] - n / 3.0) < 4.0 * std::sqrt(n * 2.0 / 9.0));
}

TEST_CASE("epsilon decay") {
  CHECK(DecayEpsilon(1.0, 0.99995, 0.001) == 0.99995);
  double e = 1.0;
  double prev = e;
  for (int k = 0; k < 125000; ++k) {
    e = DecayEpsilon(e, 0.99995, 0.001);
    REQUIRE(e <= prev);
    REQUIRE(e >= 0.001);
    prev = e;
  }
  CHECK(e == doctest::Approx(std::exp(125000 * std::log(0.99995))).epsilon(1e-9));
  CHECK(e == doctest::Approx(0.00193).epsilon(5e-3));
  for (int k = 0; k < 200000; ++k) e = DecayEpsilon(e, 0.99995, 0.001);
  CHECK(e == 0.001);
}

TEST_CASE("training waits for a full batch") {
  ScenarioConfig config;
  Rng init(5);
  DqnAgent agent(config, init);
  const DuelingNet before = agent.online();
  Rng rng(6);
  // A zero state leaves every ReLU unit at its kink, so use a generic one.
  StackVector s{};
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = 0.1 * static_cast<double>(k + 1);
  for (int k = 0; k < 999; ++k) {
    agent.Remember(s, Action::kNoOp, 1.0, s);
    CHECK_FALSE(agent.MaybeTrain(rng).has_value());
  }
  CHECK(agent.online() == before);
  agent.Remember(s, Action::kNoOp, 1.0, s);
  CHECK(agent.MaybeTrain(rng).has_value());
  CHECK_FALSE(agent.online() == before);
}

TEST_CASE("regression limit: Q(s,a) converges to the reward with zero discount") {
  NetShape shape;
  shape.input = kStackSize;
  shape.trunk = {16};
  shape.value_hidden = {16};
  shape.advantage_hidden = {16};
  DuelingNet online(shape);
  Rng rng(10);
  online.InitGlorot(rng);
  DuelingNet target = online;
  ReplayBuffer buffer(64);
  Transition t;
  for (int k = 0; k < kStackSize; ++k) t.state[k] = t.next_state[k] = 0.01 * k;
  t.action = 2;
  t.reward = 0.8;
  for (int k = 0; k < 32; ++k) buffer.Add(t);
  Optimizer opt(OptimizerKind::kAdam, 1e-3, 0.9, online);
  TrainParams params;
  params.batch_size = 32;
  params.discount = 0.0;
  double loss = 1e9;
  for (int it = 0; it < 2000; ++it) loss = *TrainStep(online, target, buffer, opt, rng, params);
  CHECK(loss < 1e-8);
  CHECK(online.QValues(t.state)(2) == doctest::Approx(0.8).epsilon(1e-4));
}

TEST_CASE("target copy makes the networks agree and then freezes") {
  ScenarioConfig config;
  config.batch_size = 10;
  config.replay_capacity = 100;
  config.target_update_steps = 3;
  Rng init(4);
  DqnAgent agent(config, init);
  Rng rng(7);
  Rng data(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    StackVector s, n;
    for (double& x : s) x = u(data);
    for (double& x : n) x = u(data);
    agent.Remember(s, ActionFromIndex(k % 5), u(data), n);
  }
  const DuelingNet target0 = agent.target();
  agent.MaybeTrain(rng);
  agent.MaybeTrain(rng);
  CHECK(agent.target() == target0);
  CHECK_FALSE(agent.online() == target0);
  agent.MaybeTrain(rng);
  CHECK(agent.train_steps() == 3);
  CHECK(agent.target() == agent.online());
  StackVector probe;
  for (double& x : probe) x = u(data);
  CHECK((agent.target().QValues(probe) - agent.online().QValues(probe)).norm() == 0.0);
}

TEST_CASE("a greedy agent is a deterministic function of the stack") {
  ScenarioConfig config;
  Rng init(11);
  DqnAgent agent(config, init);
  agent.set_epsilon(0.0);
  const ActionMask all{true, true, true, true, true};
  Rng data(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    StackVector s;
    for (double& x : s) x = u(data);
    Rng a(trial), b(trial + 1000);
    CHECK(agent.Act(s, all, a) == agent.Act(s, all, b));
  }
}

TEST_CASE("agent pool gives one agent per UAV unless sharing") {
  ScenarioConfig config;
  AgentPool pool(config, 4, 1);
  CHECK(pool.distinct() == 4);
  CHECK(&pool.For(0) != &pool.For(1));
  config.share_weights = true;
  AgentPool shared(config, 4, 1);
  CHECK(shared.distinct() == 1);
  CHECK(&shared.For(0) == &shared.For(3));
  AgentPool again(ScenarioConfig{}, 4, 1);
  CHECK(again.For(2).online() == pool.For(2).online());
}

}  // TEST_SUITE
