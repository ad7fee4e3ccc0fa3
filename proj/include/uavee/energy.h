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

#ifndef UAVEE_ENERGY_H_
#define UAVEE_ENERGY_H_

#include <span>
#include <vector>

#include "uavee/config.h"

namespace uavee {

struct EnergyParams {
  double c1 = 9.26e-4;
  double c2 = 2250.0;
  double gravity = 9.81;
  double mass_kg = 10.0;
  double air_density = 1.225;
  double rotor_area_m2 = 0.5;

  static EnergyParams FromConfig(const ScenarioConfig& config);
};

// Propulsion energy (J) of a fixed-wing airframe flying a circular orbit of
// radius `radius_m` at `velocity_mps` for `duration_s`. Throws kDomain for a
// non-positive radius, velocity or duration.
double FixedWingEnergy(double radius_m, double velocity_mps, double duration_s,
                       const EnergyParams& params);

// Velocity minimising FixedWingEnergy for a given turn radius.
double OptimalVelocity(double radius_m, const EnergyParams& params);

// Ideal induced-power hover of a rotary-wing airframe of the same mass:
// P = sqrt((m g)^3 / (2 rho A)).
double HoverPower(const EnergyParams& params);
double HoverEnergy(double duration_s, const EnergyParams& params);

// Throughput per Joule of a single UAV over one step. Throws kDomain when
// energy is not strictly positive.
double UavEnergyEfficiency(double throughput_bits, double energy_j);

// Ratio of sums over every (step, UAV) cell: sum(throughput) / sum(energy).
// Outer index is the timestep, inner the UAV. Shapes must agree.
double NetworkEnergyEfficiency(
    std::span<const std::vector<double>> throughput_bits,
    std::span<const std::vector<double>> energy_j);

}  // namespace uavee

#endif  // UAVEE_ENERGY_H_
