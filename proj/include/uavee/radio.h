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

#ifndef UAVEE_RADIO_H_
#define UAVEE_RADIO_H_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "uavee/config.h"
#include "uavee/environment.h"
#include "uavee/geometry.h"

namespace uavee {

struct LinkGeometry {
  double horiz_dist_m = 0.0;
  double height_m = 0.0;
};

// Transmitter-side constants, in linear scale where the link budget needs it.
struct RadioParams {
  double tx_power_w = 1.0;
  double nearfield_linear = 1.0;
  double pathloss_exponent = 2.0;
  double beamwidth_rad = 0.5235987755982988;
  double noise_power_w = 8e-13;
  double bandwidth_hz = 1e6;

  static RadioParams FromConfig(const ScenarioConfig& config);
};

inline double DbToLinear(double db) { return std::pow(10.0, db / 10.0); }

// Downtilted cone antenna gain in dB, clipped to [-20, 0]. A zero height is
// resolved by its limit: 0 dB at nadir, -20 dB anywhere else.
double AntennaGainDb(const LinkGeometry& geom, double beamwidth_rad);

// Line-of-sight received power (W) with gain and near-field loss applied in
// linear scale.
double ReceivedPower(const LinkGeometry& geom, const RadioParams& params);
double ReceivedPower(Vec2 user, const UavState& uav, const RadioParams& params);

// Received power of every UAV at every user, laid out [user][uav].
std::vector<std::vector<double>> ReceivedPowerMatrix(
    std::span<const Vec2> users, std::span<const UavState> uavs,
    const RadioParams& params);

// Serving UAV per user: strongest received power, ties to the lowest index.
std::vector<std::size_t> Associate(std::span<const Vec2> users,
                                   std::span<const UavState> uavs,
                                   const RadioParams& params);

// Serving power over every other UAV's power plus noise.
double Sinr(Vec2 user, std::size_t serving, std::span<const UavState> uavs,
            const RadioParams& params);

// Shannon-bound bits delivered over `duration_s`.
double ThroughputBits(double sinr, double duration_s, double bandwidth_hz);

// Per-UAV delivered bits over one step: every user is associated with its
// strongest UAV and contributes its Shannon throughput to that UAV only.
std::vector<double> ServedThroughput(std::span<const Vec2> users,
                                     std::span<const UavState> uavs,
                                     const RadioParams& params,
                                     double duration_s);

}  // namespace uavee

#endif  // UAVEE_RADIO_H_
