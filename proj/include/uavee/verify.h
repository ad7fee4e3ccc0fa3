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

#ifndef UAVEE_VERIFY_H_
#define UAVEE_VERIFY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "uavee/config.h"
#include "uavee/dueling_net.h"

namespace uavee {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Largest relative disagreement between backpropagated and central-difference
// gradients over `probes` randomly chosen parameters of `net` on a random
// batch. Pairs that are both below 1e-10 in magnitude count as agreeing.
double GradientCheckMaxRelError(DuelingNet& net, int probes, std::uint64_t seed);

// Velocity in [lo, hi] minimising the fixed-wing energy on an evenly spaced
// grid of `points` velocities.
double GridOptimalVelocity(double radius_m, const ScenarioConfig& config,
                           double lo = 1.0, double hi = 100.0, int points = 10000);

// Numeric oracle suite: closed-form optimal velocity against grid search,
// propulsion power endpoints, link-budget spot values, hover ratio and
// gradient checks, all on the default scenario constants.
std::vector<CheckResult> RunVerification();

}  // namespace uavee

#endif  // UAVEE_VERIFY_H_
