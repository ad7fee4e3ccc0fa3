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

#include "uavee/policies.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "uavee/energy.h"
#include "uavee/error.h"

namespace uavee {
namespace {

// Absorbs rounding in repeated increments (50 + 95 * 10 must still reach 1000).
constexpr double kBoundSlack = 1e-9;

}  // namespace

Action ActionFromIndex(int index) {
  if (index < 0 || index >= kNumActions) {
    Fail(ErrorKind::kInvalidArgument,
         "action index out of range: " + std::to_string(index));
  }
  return static_cast<Action>(index);
}

const char* ActionName(Action a) {
  switch (a) {
    case Action::kRadiusUp: return "radius_up";
    case Action::kRadiusDown: return "radius_down";
    case Action::kHeightUp: return "height_up";
    case Action::kHeightDown: return "height_down";
    case Action::kNoOp: return "noop";
  }
  return "?";
}

ActionMask LegalActions(const UavState& state, const ScenarioConfig& config) {
  ActionMask mask{};
  mask[ActionIndex(Action::kRadiusUp)] =
      state.radius_m + config.r_inc <= config.r_max + kBoundSlack;
  mask[ActionIndex(Action::kRadiusDown)] =
      state.radius_m - config.r_inc >= config.r_min - kBoundSlack;
  mask[ActionIndex(Action::kHeightUp)] =
      state.height_m + config.h_inc <= config.h_max + kBoundSlack;
  mask[ActionIndex(Action::kHeightDown)] =
      state.height_m - config.h_inc >= config.h_min - kBoundSlack;
  mask[ActionIndex(Action::kNoOp)] = true;
  return mask;
}

UavState ApplyAction(const UavState& state, Action action,
                     const ScenarioConfig& config) {
  UavState next = state;
  switch (action) {
    case Action::kRadiusUp: next.radius_m += config.r_inc; break;
    case Action::kRadiusDown: next.radius_m -= config.r_inc; break;
    case Action::kHeightUp: next.height_m += config.h_inc; break;
    case Action::kHeightDown: next.height_m -= config.h_inc; break;
    case Action::kNoOp: return next;
  }
  next.radius_m = std::clamp(next.radius_m, config.r_min, config.r_max);
  next.height_m = std::clamp(next.height_m, config.h_min, config.h_max);
  next.velocity_mps =
      OptimalVelocity(next.radius_m, EnergyParams::FromConfig(config));
  return next;
}

PolicyKind ParsePolicyKind(std::string_view name) {
  if (name == "min-radius") return PolicyKind::kMinRadius;
  if (name == "hover") return PolicyKind::kHover;
  if (name == "random-walk") return PolicyKind::kRandomWalk;
  if (name == "energy-saving") return PolicyKind::kEnergySaving;
  if (name == "ddqn") return PolicyKind::kDdqn;
  Fail(ErrorKind::kParse,
       "unknown policy '" + std::string(name) +
           "' (expected min-radius|hover|random-walk|energy-saving|ddqn)");
}

const char* PolicyName(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kMinRadius: return "min-radius";
    case PolicyKind::kHover: return "hover";
    case PolicyKind::kRandomWalk: return "random-walk";
    case PolicyKind::kEnergySaving: return "energy-saving";
    case PolicyKind::kDdqn: return "ddqn";
  }
  return "?";
}

Action MinRadiusAction(const UavState&) { return Action::kNoOp; }

Action HoverAction(const UavState&) { return Action::kNoOp; }

Action RandomWalkAction(const UavState& state, const ScenarioConfig& config,
                        Rng& rng) {
  const ActionMask mask = LegalActions(state, config);
  std::array<int, kNumActions> legal{};
  int count = 0;
  for (int a = 0; a < kNumActions; ++a) {
    if (mask[a]) legal[count++] = a;
  }
  std::uniform_int_distribution<int> pick(0, count - 1);
  return ActionFromIndex(legal[pick(rng)]);
}

EnergySavingPolicy::EnergySavingPolicy(std::span<const Vec2> centers,
                                       const ScenarioConfig& config)
    : target_radius_m_(config.r_max), r_inc_(config.r_inc) {
  if (centers.size() < 2) return;  // no pair distance exists
  double min_dist = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < centers.size(); ++k) {
    for (std::size_t l = k + 1; l < centers.size(); ++l) {
      min_dist = std::min(min_dist, Distance(centers[k], centers[l]));
    }
  }
  target_radius_m_ = std::clamp(0.5 * min_dist, config.r_min, config.r_max);
}

Action EnergySavingPolicy::Decide(const UavState& state) const {
  const double gap = target_radius_m_ - state.radius_m;
  if (gap >= r_inc_ - kBoundSlack) return Action::kRadiusUp;
  if (-gap >= r_inc_ - kBoundSlack) return Action::kRadiusDown;
  return Action::kNoOp;
}

}  // namespace uavee
