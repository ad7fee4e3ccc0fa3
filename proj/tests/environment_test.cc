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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "uavee/config.h"
#include "uavee/energy.h"
#include "uavee/environment.h"
#include "uavee/rng.h"

using namespace uavee;

TEST_SUITE("environment") {

TEST_CASE("area side keeps the UAV density fixed") {
  CHECK(AreaSideForFleet(10, 0.2) == doctest::Approx(7071.0678).epsilon(1e-7));
  CHECK(AreaSideForFleet(2, 0.2) == doctest::Approx(3162.2777).epsilon(1e-7));
  for (int u = 1; u <= 20; ++u) {
    const double side_km = AreaSideForFleet(u, 0.2) / 1000.0;
    CHECK(u / (side_km * side_km) == doctest::Approx(0.2).epsilon(1e-12));
  }
}

TEST_CASE("user count follows the Poisson mean and stays inside the square") {
  const double side = AreaSideForFleet(10, 0.2);  // 50 km^2, mean 500 users
  Rng rng(123);
  double sum = 0.0, sum_sq = 0.0;
  const int trials = 400;
  for (int k = 0; k < trials; ++k) {
    const UserSet users = GenerateUsers(side, 10.0, rng);
    CHECK(users.area_side_m == side);
    for (const Vec2& p : users.positions) {
      REQUIRE(p.x >= 0.0);
      REQUIRE(p.x <= side);
      REQUIRE(p.y >= 0.0);
      REQUIRE(p.y <= side);
    }
    const double n = static_cast<double>(users.positions.size());
    sum += n;
    sum_sq += n * n;
  }
  const double mean = sum / trials;
  const double var = sum_sq / trials - mean * mean;
  // Standard error of the mean is about 1.1.
  CHECK(std::abs(mean - 500.0) < 5.0);
  CHECK(var == doctest::Approx(500.0).epsilon(0.2));
}

TEST_CASE("zero density produces no users") {
  Rng rng(1);
  CHECK(GenerateUsers(1000.0, 0.0, rng).positions.empty());
}

TEST_CASE("k-means separates two obvious clusters") {
  std::vector<Vec2> users;
  for (int k = 0; k < 20; ++k) {
    users.push_back({0.0 + k * 0.1, 0.0});
    users.push_back({1000.0 + k * 0.1, 0.0});
  }
  Rng rng(5);
  std::vector<Vec2> centers = KMeansCenters(users, 2, rng);
  REQUIRE(centers.size() == 2);
  std::sort(centers.begin(), centers.end(),
            [](const Vec2& a, const Vec2& b) { return a.x < b.x; });
  CHECK(centers[0].x == doctest::Approx(0.95));
  CHECK(centers[1].x == doctest::Approx(1000.95));
}

TEST_CASE("k-means matches exhaustive two-way partitioning on small sets") {
  // Brute-force optimum over all 2^(n-1) bipartitions.
  auto exhaustive = [](const std::vector<Vec2>& pts) {
    const int n = static_cast<int>(pts.size());
    double best = 1e300;
    for (unsigned mask = 1; mask < (1u << (n - 1)); ++mask) {
      Vec2 sum[2];
      int count[2] = {0, 0};
      for (int i = 0; i < n; ++i) {
        const int side = (mask >> i) & 1u;
        sum[side] = sum[side] + pts[i];
        ++count[side];
      }
      if (count[0] == 0 || count[1] == 0) continue;
      double cost = 0.0;
      for (int i = 0; i < n; ++i) {
        const int side = (mask >> i) & 1u;
        cost += SquaredDistance(pts[i], (1.0 / count[side]) * sum[side]);
      }
      best = std::min(best, cost);
    }
    return best;
  };
  Rng data(99);
  std::normal_distribution<double> noise(0.0, 30.0);
  int matched = 0;
  const int trials = 30;
  for (int t = 0; t < trials; ++t) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 6; ++i) pts.push_back({noise(data), noise(data)});
    for (int i = 0; i < 6; ++i) pts.push_back({400.0 + noise(data), noise(data)});
    Rng rng(t);
    const auto centers = KMeansCenters(pts, 2, rng);
    const double got = KMeansObjective(pts, centers);
    const double best = exhaustive(pts);
    CHECK(got >= best * (1 - 1e-12));
    if (got <= best * (1 + 1e-9)) ++matched;
  }
  CHECK(matched == trials);
}

TEST_CASE("k-means centers lie in the convex hull bounding box") {
  Rng rng(17);
  const UserSet users = GenerateUsers(AreaSideForFleet(6, 0.2), 10.0, rng);
  const auto centers = KMeansCenters(users.positions, 6, rng);
  REQUIRE(centers.size() == 6);
  for (const Vec2& c : centers) {
    CHECK(c.x >= 0.0);
    CHECK(c.x <= users.area_side_m);
    CHECK(c.y >= 0.0);
    CHECK(c.y <= users.area_side_m);
  }
}

TEST_CASE("k-means with as many clusters as users puts a center on each user") {
  const std::vector<Vec2> users = {{0, 0}, {10, 0}, {0, 10}, {50, 50}};
  Rng rng(3);
  const auto centers = KMeansCenters(users, 4, rng);
  CHECK(KMeansObjective(users, centers) == doctest::Approx(0.0));
}

TEST_CASE("orbit phase advances by v*tau/r and wraps") {
  UavState s;
  s.center = {100.0, 200.0};
  s.radius_m = 50.0;
  s.velocity_mps = 16.4;
  s.height_m = 100.0;
  s.phase_rad = 0.0;
  const UavState next = AdvanceOrbit(s, 2.0);
  CHECK(next.phase_rad == doctest::Approx(0.656));
  CHECK(Distance(next.Position(), s.center) == doctest::Approx(50.0));
  CHECK(next.radius_m == s.radius_m);
  CHECK(next.height_m == s.height_m);
  UavState cur = s;
  for (int k = 0; k < 1000; ++k) {
    cur = AdvanceOrbit(cur, 2.0);
    REQUIRE(cur.phase_rad >= 0.0);
    REQUIRE(cur.phase_rad < 2.0 * std::numbers::pi);
    REQUIRE(Distance(cur.Position(), s.center) == doctest::Approx(50.0));
  }
}

TEST_CASE("a stationary airframe sits on its center") {
  UavState s;
  s.center = {3.0, 4.0};
  s.radius_m = 0.0;
  s.velocity_mps = 0.0;
  const UavState next = AdvanceOrbit(s, 2.0);
  CHECK(next.Position().x == 3.0);
  CHECK(next.Position().y == 4.0);
}

TEST_CASE("initial UAV state") {
  ScenarioConfig config;
  const std::vector<Vec2> centers = {{0, 0}, {500, 500}, {900, 100}};
  Rng rng(8);
  const auto uavs = InitUavs(centers, config, rng);
  REQUIRE(uavs.size() == 3);
  for (std::size_t i = 0; i < uavs.size(); ++i) {
    CHECK(uavs[i].index == i);
    CHECK(uavs[i].radius_m == 50.0);
    CHECK(uavs[i].height_m == 100.0);
    CHECK(uavs[i].velocity_mps == doctest::Approx(16.4357).epsilon(1e-4));
    CHECK(uavs[i].phase_rad >= 0.0);
    CHECK(uavs[i].phase_rad < 2.0 * std::numbers::pi);
  }
}

TEST_CASE("neighbor sets are the six closest other centers") {
  std::vector<Vec2> centers;
  for (int k = 0; k < 10; ++k) centers.push_back({k * 100.0, 0.0});
  const NeighborTable table = NeighborSets(centers);
  REQUIRE(table.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    REQUIRE(table[i].size() == 6);
    CHECK(std::find(table[i].begin(), table[i].end(), i) == table[i].end());
    // Distances non-decreasing and no excluded center is closer than the
    // farthest included one.
    const double farthest = Distance(centers[i], centers[table[i].back()]);
    for (std::size_t j = 0; j < 10; ++j) {
      if (j == i) continue;
      const bool in = std::find(table[i].begin(), table[i].end(), j) != table[i].end();
      if (!in) CHECK(Distance(centers[i], centers[j]) >= farthest);
    }
  }
  CHECK(table[0] == std::vector<std::size_t>{1, 2, 3, 4, 5, 6});
  // Equidistant ties resolve to the lower index.
  CHECK(table[5][0] == 4);
  CHECK(table[5][1] == 6);
}

TEST_CASE("small fleets have fewer than six neighbors") {
  const std::vector<Vec2> centers = {{0, 0}, {1, 0}, {5, 0}};
  const NeighborTable table = NeighborSets(centers);
  CHECK(table[0] == std::vector<std::size_t>{1, 2});
  CHECK(table[2] == std::vector<std::size_t>{1, 0});
  CHECK(NeighborSets(std::vector<Vec2>{{0, 0}})[0].empty());
}

TEST_CASE("world construction is reproducible from the seed") {
  const ScenarioConfig config;
  Rng a(2024), b(2024);
  const World w1 = MakeWorld(config, 5, a);
  const World w2 = MakeWorld(config, 5, b);
  CHECK(w1.fleet_size == 5);
  CHECK(w1.centers.size() == 5);
  CHECK(w1.initial_uavs.size() == 5);
  CHECK(w1.users.positions.size() == w2.users.positions.size());
  for (std::size_t i = 0; i < w1.centers.size(); ++i) {
    CHECK(w1.centers[i].x == w2.centers[i].x);
    CHECK(w1.centers[i].y == w2.centers[i].y);
    CHECK(w1.initial_uavs[i].phase_rad == w2.initial_uavs[i].phase_rad);
  }
  CHECK(w1.AreaDiagonal() == doctest::Approx(std::sqrt(2.0) * AreaSideForFleet(5, 0.2)));
}

}  // TEST_SUITE
