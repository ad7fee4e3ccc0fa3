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

#ifndef UAVEE_POLICIES_H_
#define UAVEE_POLICIES_H_

#include <array>
#include <span>
#include <string>
#include <string_view>

#include "uavee/config.h"
#include "uavee/environment.h"
#include "uavee/rng.h"

namespace uavee {

// Index mapping is part of the observation encoding and checkpoint
// semantics; do not reorder.
enum class Action : int {
  kRadiusUp = 0,
  kRadiusDown = 1,
  kHeightUp = 2,
  kHeightDown = 3,
  kNoOp = 4,
};

inline constexpr int kNumActions = 5;
using ActionMask = std::array<bool, kNumActions>;

inline int ActionIndex(Action a) { return static_cast<int>(a); }
Action ActionFromIndex(int index);
const char* ActionName(Action a);

// Actions whose result stays inside [r_min, r_max] x [h_min, h_max].
ActionMask LegalActions(const UavState& state, const ScenarioConfig& config);

// Applies the radius/height increment, clamps to the bounds and re-derives
// the energy-optimal velocity. The phase is kept.
UavState ApplyAction(const UavState& state, Action action,
                     const ScenarioConfig& config);

enum class PolicyKind { kMinRadius, kHover, kRandomWalk, kEnergySaving, kDdqn };

PolicyKind ParsePolicyKind(std::string_view name);
const char* PolicyName(PolicyKind kind);

// Holds the initial orbit forever.
Action MinRadiusAction(const UavState& state);

// The airframe never moves; the harness flies it at the center-point with
// hover energy.
Action HoverAction(const UavState& state);

// Uniform over the legal subset of the five actions.
Action RandomWalkAction(const UavState& state, const ScenarioConfig& config,
                        Rng& rng);

// Widens every orbit towards half the smallest inter-center distance
// (clamped to the radius bounds), one r_inc step at a time.
class EnergySavingPolicy {
 public:
  EnergySavingPolicy(std::span<const Vec2> centers, const ScenarioConfig& config);

  double target_radius() const { return target_radius_m_; }
  Action Decide(const UavState& state) const;

 private:
  double target_radius_m_;
  double r_inc_;
};

}  // namespace uavee

#endif  // UAVEE_POLICIES_H_
