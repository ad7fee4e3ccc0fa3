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

#include "uavee/radio.h"

#include <algorithm>
#include <cmath>

#include "uavee/error.h"

namespace uavee {
namespace {

constexpr double kGainFloorDb = 20.0;
constexpr double kGainSlopeDb = 12.0;

std::size_t ArgMax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[best]) best = k;
  }
  return best;
}

double SinrFromRow(std::span<const double> powers, std::size_t serving,
                   double noise) {
  double interference = 0.0;
  for (std::size_t k = 0; k < powers.size(); ++k) {
    if (k != serving) interference += powers[k];
  }
  return powers[serving] / (interference + noise);
}

}  // namespace

RadioParams RadioParams::FromConfig(const ScenarioConfig& config) {
  RadioParams p;
  p.tx_power_w = config.tx_power_w;
  p.nearfield_linear = DbToLinear(config.nearfield_db);
  p.pathloss_exponent = config.pathloss_exponent;
  p.beamwidth_rad = config.beamwidth_rad();
  p.noise_power_w = config.noise_power_w;
  p.bandwidth_hz = config.bandwidth_hz;
  return p;
}

double AntennaGainDb(const LinkGeometry& geom, double beamwidth_rad) {
  if (!(beamwidth_rad > 0.0)) {
    Fail(ErrorKind::kDomain, "antenna beamwidth must be > 0");
  }
  if (geom.horiz_dist_m < 0.0 || geom.height_m < 0.0) {
    Fail(ErrorKind::kDomain, "link geometry must be non-negative");
  }
  if (geom.horiz_dist_m == 0.0) return 0.0;
  if (geom.height_m == 0.0) return -kGainFloorDb;
  const double ratio = std::atan(geom.horiz_dist_m / geom.height_m) / beamwidth_rad;
  return -std::min(kGainFloorDb, kGainSlopeDb * ratio * ratio);
}

double ReceivedPower(const LinkGeometry& geom, const RadioParams& params) {
  const double gain = DbToLinear(AntennaGainDb(geom, params.beamwidth_rad));
  const double d2 = geom.horiz_dist_m * geom.horiz_dist_m +
                    geom.height_m * geom.height_m;
  return params.tx_power_w * params.nearfield_linear * gain *
         std::pow(d2, -params.pathloss_exponent / 2.0);
}

double ReceivedPower(Vec2 user, const UavState& uav, const RadioParams& params) {
  return ReceivedPower(LinkGeometry{Distance(user, uav.Position()), uav.height_m},
                       params);
}

std::vector<std::vector<double>> ReceivedPowerMatrix(
    std::span<const Vec2> users, std::span<const UavState> uavs,
    const RadioParams& params) {
  std::vector<Vec2> positions;
  positions.reserve(uavs.size());
  for (const UavState& u : uavs) positions.push_back(u.Position());
  std::vector<std::vector<double>> powers(users.size(),
                                          std::vector<double>(uavs.size()));
  for (std::size_t j = 0; j < users.size(); ++j) {
    for (std::size_t k = 0; k < uavs.size(); ++k) {
      powers[j][k] = ReceivedPower(
          LinkGeometry{Distance(users[j], positions[k]), uavs[k].height_m},
          params);
    }
  }
  return powers;
}

std::vector<std::size_t> Associate(std::span<const Vec2> users,
                                   std::span<const UavState> uavs,
                                   const RadioParams& params) {
  if (uavs.empty()) Fail(ErrorKind::kInvalidArgument, "association needs a UAV");
  const auto powers = ReceivedPowerMatrix(users, uavs, params);
  std::vector<std::size_t> serving(users.size());
  for (std::size_t j = 0; j < users.size(); ++j) serving[j] = ArgMax(powers[j]);
  return serving;
}

double Sinr(Vec2 user, std::size_t serving, std::span<const UavState> uavs,
            const RadioParams& params) {
  if (serving >= uavs.size()) {
    Fail(ErrorKind::kInvalidArgument, "serving UAV index out of range");
  }
  std::vector<double> powers(uavs.size());
  for (std::size_t k = 0; k < uavs.size(); ++k) {
    powers[k] = ReceivedPower(user, uavs[k], params);
  }
  return SinrFromRow(powers, serving, params.noise_power_w);
}

double ThroughputBits(double sinr, double duration_s, double bandwidth_hz) {
  if (!(sinr >= 0.0)) Fail(ErrorKind::kDomain, "SINR must be >= 0");
  return duration_s * bandwidth_hz * std::log2(1.0 + sinr);
}

std::vector<double> ServedThroughput(std::span<const Vec2> users,
                                     std::span<const UavState> uavs,
                                     const RadioParams& params,
                                     double duration_s) {
  if (uavs.empty()) Fail(ErrorKind::kInvalidArgument, "throughput needs a UAV");
  std::vector<double> bits(uavs.size(), 0.0);
  const auto powers = ReceivedPowerMatrix(users, uavs, params);
  for (const auto& row : powers) {
    const std::size_t serving = ArgMax(row);
    bits[serving] += ThroughputBits(SinrFromRow(row, serving, params.noise_power_w),
                                    duration_s, params.bandwidth_hz);
  }
  return bits;
}

}  // namespace uavee
