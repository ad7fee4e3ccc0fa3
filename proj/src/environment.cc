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

#include "uavee/environment.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "uavee/energy.h"
#include "uavee/error.h"

namespace uavee {
namespace {

constexpr int kMaxKMeansIterations = 100;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t NearestCenter(Vec2 p, std::span<const Vec2> centers) {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const double d2 = SquaredDistance(p, centers[k]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = k;
    }
  }
  return best;
}

std::vector<Vec2> KMeansPlusPlusSeed(std::span<const Vec2> users, int count,
                                     Rng& rng) {
  std::vector<Vec2> centers;
  centers.reserve(count);
  std::uniform_int_distribution<std::size_t> pick(0, users.size() - 1);
  centers.push_back(users[pick(rng)]);
  std::vector<double> d2(users.size());
  for (std::size_t j = 0; j < users.size(); ++j) {
    d2[j] = SquaredDistance(users[j], centers[0]);
  }
  while (static_cast<int>(centers.size()) < count) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t chosen = 0;
    if (total > 0.0) {
      std::discrete_distribution<std::size_t> weighted(d2.begin(), d2.end());
      chosen = weighted(rng);
    } else {
      // Fewer distinct users than clusters.
      chosen = pick(rng);
    }
    centers.push_back(users[chosen]);
    for (std::size_t j = 0; j < users.size(); ++j) {
      d2[j] = std::min(d2[j], SquaredDistance(users[j], centers.back()));
    }
  }
  return centers;
}

}  // namespace

Vec2 UavState::Position() const {
  return center + radius_m * Vec2{std::cos(phase_rad), std::sin(phase_rad)};
}

UserSet GenerateUsers(double area_side_m, double density_per_km2, Rng& rng) {
  if (!(area_side_m > 0.0) || !(density_per_km2 >= 0.0)) {
    Fail(ErrorKind::kInvalidArgument,
         "user generation needs side > 0 and density >= 0");
  }
  UserSet users;
  users.area_side_m = area_side_m;
  const double mean = density_per_km2 * area_side_m * area_side_m * 1e-6;
  if (mean <= 0.0) return users;
  std::poisson_distribution<long> count_dist(mean);
  const long count = count_dist(rng);
  std::uniform_real_distribution<double> coord(0.0, area_side_m);
  users.positions.reserve(static_cast<std::size_t>(count));
  for (long j = 0; j < count; ++j) {
    const double x = coord(rng);
    const double y = coord(rng);
    users.positions.push_back({x, y});
  }
  return users;
}

double AreaSideForFleet(int uav_count, double uav_density_per_km2) {
  if (uav_count < 1 || !(uav_density_per_km2 > 0.0)) {
    Fail(ErrorKind::kInvalidArgument,
         "area side needs at least one UAV and a positive density");
  }
  return 1000.0 * std::sqrt(uav_count / uav_density_per_km2);
}

double KMeansObjective(std::span<const Vec2> users,
                       std::span<const Vec2> centers) {
  double total = 0.0;
  for (const Vec2& u : users) {
    total += SquaredDistance(u, centers[NearestCenter(u, centers)]);
  }
  return total;
}

std::vector<Vec2> KMeansCenters(std::span<const Vec2> users, int count,
                                Rng& rng) {
  if (count < 1) Fail(ErrorKind::kInvalidArgument, "k-means needs count >= 1");
  if (users.empty()) Fail(ErrorKind::kInvalidArgument, "k-means needs users");

  std::vector<Vec2> centers = KMeansPlusPlusSeed(users, count, rng);
  std::vector<std::size_t> assignment(users.size(),
                                      std::numeric_limits<std::size_t>::max());
  for (int iter = 0; iter < kMaxKMeansIterations; ++iter) {
    bool changed = false;
    for (std::size_t j = 0; j < users.size(); ++j) {
      const std::size_t k = NearestCenter(users[j], centers);
      if (k != assignment[j]) {
        assignment[j] = k;
        changed = true;
      }
    }
    if (!changed) break;

    std::vector<Vec2> sums(centers.size());
    std::vector<std::size_t> members(centers.size(), 0);
    for (std::size_t j = 0; j < users.size(); ++j) {
      sums[assignment[j]] = sums[assignment[j]] + users[j];
      ++members[assignment[j]];
    }
    for (std::size_t k = 0; k < centers.size(); ++k) {
      if (members[k] > 0) {
        centers[k] = (1.0 / static_cast<double>(members[k])) * sums[k];
        continue;
      }
      std::size_t farthest = 0;
      double farthest_d2 = -1.0;
      for (std::size_t j = 0; j < users.size(); ++j) {
        const double d2 =
            SquaredDistance(users[j], centers[NearestCenter(users[j], centers)]);
        if (d2 > farthest_d2) {
          farthest_d2 = d2;
          farthest = j;
        }
      }
      centers[k] = users[farthest];
      // Force another assignment pass so the re-seeded center gains members.
      std::fill(assignment.begin(), assignment.end(),
                std::numeric_limits<std::size_t>::max());
    }
  }
  return centers;
}

std::vector<UavState> InitUavs(std::span<const Vec2> centers,
                               const ScenarioConfig& config, Rng& rng) {
  if (centers.empty()) Fail(ErrorKind::kInvalidArgument, "no center-points");
  const EnergyParams params = EnergyParams::FromConfig(config);
  const double velocity = OptimalVelocity(config.r_min, params);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::vector<UavState> uavs;
  uavs.reserve(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    UavState s;
    s.index = i;
    s.center = centers[i];
    s.radius_m = config.r_min;
    s.height_m = config.h_init;
    s.velocity_mps = velocity;
    s.phase_rad = phase(rng);
    uavs.push_back(s);
  }
  return uavs;
}

UavState AdvanceOrbit(const UavState& state, double duration_s) {
  UavState next = state;
  if (state.radius_m <= 0.0 || state.velocity_mps == 0.0) return next;
  next.phase_rad =
      std::fmod(state.phase_rad + state.velocity_mps * duration_s / state.radius_m,
                kTwoPi);
  if (next.phase_rad < 0.0) next.phase_rad += kTwoPi;
  return next;
}

NeighborTable NeighborSets(std::span<const Vec2> centers) {
  if (centers.empty()) Fail(ErrorKind::kInvalidArgument, "no center-points");
  NeighborTable table(centers.size());
  std::vector<std::size_t> order(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::erase(order, i);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return SquaredDistance(centers[a], centers[i]) <
                              SquaredDistance(centers[b], centers[i]);
                     });
    order.resize(std::min(kMaxNeighbors, order.size()));
    table[i] = order;
    order.resize(centers.size());
  }
  return table;
}

double World::AreaDiagonal() const {
  return users.area_side_m * std::numbers::sqrt2;
}

World MakeWorld(const ScenarioConfig& config, int fleet_size, Rng& rng) {
  World world;
  world.fleet_size = static_cast<std::size_t>(fleet_size);
  const double side = AreaSideForFleet(fleet_size, config.uav_density_km2);
  world.users = GenerateUsers(side, config.user_density_km2, rng);
  if (world.users.positions.empty()) {
    // No users to cluster: scatter the centers uniformly instead.
    std::uniform_real_distribution<double> coord(0.0, side);
    for (int i = 0; i < fleet_size; ++i) {
      const double x = coord(rng);
      const double y = coord(rng);
      world.centers.push_back({x, y});
    }
  } else {
    world.centers = KMeansCenters(world.users.positions, fleet_size, rng);
  }
  world.initial_uavs = InitUavs(world.centers, config, rng);
  world.neighbors = NeighborSets(world.centers);
  return world;
}

}  // namespace uavee
