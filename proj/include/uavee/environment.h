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

#ifndef UAVEE_ENVIRONMENT_H_
#define UAVEE_ENVIRONMENT_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "uavee/config.h"
#include "uavee/geometry.h"
#include "uavee/rng.h"

namespace uavee {

inline constexpr std::size_t kMaxNeighbors = 6;

struct UserSet {
  double area_side_m = 0.0;
  std::vector<Vec2> positions;
};

// One UAV's orbit. Orbits run counterclockwise; `phase_rad` is the angular
// position on the circle. A hovering airframe has radius 0 and velocity 0.
struct UavState {
  std::size_t index = 0;
  Vec2 center;
  double radius_m = 0.0;
  double height_m = 0.0;
  double velocity_mps = 0.0;
  double phase_rad = 0.0;

  Vec2 Position() const;
};

// Per-UAV neighbour lists, ascending by center distance, ties by index.
using NeighborTable = std::vector<std::vector<std::size_t>>;

// Homogeneous Poisson point process on [0, side]^2.
UserSet GenerateUsers(double area_side_m, double density_per_km2, Rng& rng);

// Side (m) of the square area holding `uav_count` UAVs at the given density.
double AreaSideForFleet(int uav_count, double uav_density_per_km2);

// Lloyd's algorithm with k-means++ seeding, at most 100 iterations. A cluster
// that empties is re-seeded at the user farthest from its nearest centroid.
std::vector<Vec2> KMeansCenters(std::span<const Vec2> users, int count,
                                Rng& rng);

// Sum of squared distances from each user to its nearest center.
double KMeansObjective(std::span<const Vec2> users, std::span<const Vec2> centers);

// Starts every UAV at r_min and h_init at the energy-optimal velocity with a
// uniformly random phase.
std::vector<UavState> InitUavs(std::span<const Vec2> centers,
                               const ScenarioConfig& config, Rng& rng);

// Moves the UAV along its orbit by velocity * duration of arc.
UavState AdvanceOrbit(const UavState& state, double duration_s);

NeighborTable NeighborSets(std::span<const Vec2> centers);

// Everything that stays fixed for one episode: users, centers and the
// initial UAV states. Policies run on copies of `initial_uavs`.
struct World {
  std::size_t fleet_size = 0;
  UserSet users;
  std::vector<Vec2> centers;
  std::vector<UavState> initial_uavs;
  NeighborTable neighbors;

  double AreaDiagonal() const;
};

World MakeWorld(const ScenarioConfig& config, int fleet_size, Rng& rng);

}  // namespace uavee

#endif  // UAVEE_ENVIRONMENT_H_
