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

#include "uavee/energy.h"

#include <cmath>
#include <string>

#include "uavee/error.h"

namespace uavee {
namespace {

double TurnCoefficient(double radius_m, const EnergyParams& p) {
  const double gr = p.gravity * radius_m;
  return p.c1 + p.c2 / (gr * gr);
}

}  // namespace

EnergyParams EnergyParams::FromConfig(const ScenarioConfig& config) {
  return EnergyParams{config.c1,          config.c2,
                      config.gravity,     config.uav_mass_kg,
                      config.air_density, config.rotor_area_m2};
}

double FixedWingEnergy(double radius_m, double velocity_mps, double duration_s,
                       const EnergyParams& params) {
  if (!(radius_m > 0.0) || !(velocity_mps > 0.0) || !(duration_s > 0.0)) {
    Fail(ErrorKind::kDomain,
         "fixed-wing energy needs radius, velocity and duration > 0 (got r=" +
             std::to_string(radius_m) + ", v=" + std::to_string(velocity_mps) +
             ", tau=" + std::to_string(duration_s) + ")");
  }
  const double v3 = velocity_mps * velocity_mps * velocity_mps;
  return duration_s *
         (TurnCoefficient(radius_m, params) * v3 + params.c2 / velocity_mps);
}

double OptimalVelocity(double radius_m, const EnergyParams& params) {
  if (!(radius_m > 0.0)) {
    Fail(ErrorKind::kDomain, "optimal velocity needs radius > 0");
  }
  return std::pow(params.c2 / (3.0 * TurnCoefficient(radius_m, params)), 0.25);
}

double HoverPower(const EnergyParams& params) {
  const double weight = params.mass_kg * params.gravity;
  return std::sqrt(weight * weight * weight /
                   (2.0 * params.air_density * params.rotor_area_m2));
}

double HoverEnergy(double duration_s, const EnergyParams& params) {
  if (!(duration_s > 0.0)) {
    Fail(ErrorKind::kDomain, "hover energy needs duration > 0");
  }
  return duration_s * HoverPower(params);
}

double UavEnergyEfficiency(double throughput_bits, double energy_j) {
  if (!(energy_j > 0.0)) {
    Fail(ErrorKind::kDomain, "energy efficiency needs energy > 0");
  }
  return throughput_bits / energy_j;
}

double NetworkEnergyEfficiency(
    std::span<const std::vector<double>> throughput_bits,
    std::span<const std::vector<double>> energy_j) {
  if (throughput_bits.empty()) {
    Fail(ErrorKind::kDomain, "network energy efficiency of an empty series");
  }
  if (throughput_bits.size() != energy_j.size()) {
    Fail(ErrorKind::kInvalidArgument,
         "throughput and energy series differ in length");
  }
  double bits = 0.0;
  double joules = 0.0;
  for (std::size_t t = 0; t < throughput_bits.size(); ++t) {
    if (throughput_bits[t].size() != energy_j[t].size()) {
      Fail(ErrorKind::kInvalidArgument,
           "throughput and energy differ in fleet size at step " +
               std::to_string(t));
    }
    for (std::size_t i = 0; i < throughput_bits[t].size(); ++i) {
      bits += throughput_bits[t][i];
      joules += energy_j[t][i];
    }
  }
  if (!(joules > 0.0)) {
    Fail(ErrorKind::kDomain, "network energy efficiency needs energy > 0");
  }
  return bits / joules;
}

}  // namespace uavee
