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

#include "uavee/verify.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "uavee/energy.h"
#include "uavee/radio.h"

namespace uavee {
namespace {

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

// Propulsion power written out from the model, independent of energy.cc.
double DirectPower(double r, double v, const ScenarioConfig& c) {
  const double gr = c.gravity * r;
  return (c.c1 + c.c2 / (gr * gr)) * v * v * v + c.c2 / v;
}

CheckResult CheckVelocityOracle(const ScenarioConfig& config) {
  const EnergyParams params = EnergyParams::FromConfig(config);
  double worst = 0.0;
  double worst_r = 0.0;
  for (int r = 50; r <= 1000; r += 50) {
    const double closed = OptimalVelocity(r, params);
    const double grid = GridOptimalVelocity(r, config);
    const double rel = std::abs(closed - grid) / grid;
    if (rel > worst) {
      worst = rel;
      worst_r = r;
    }
  }
  return {"optimal velocity vs 1e4-point grid search", worst < 1e-3,
          Fmt("max rel err %.2e at r=%.0f m (tol 1e-3)", worst, worst_r)};
}

CheckResult CheckVelocitySpots(const ScenarioConfig& config) {
  const EnergyParams params = EnergyParams::FromConfig(config);
  const double v50 = OptimalVelocity(50.0, params);
  const double v_inf = std::pow(config.c2 / (3.0 * config.c1), 0.25);
  const double v_far = OptimalVelocity(1e12, params);
  const bool ok = std::abs(v50 - 16.4) < 0.05 && std::abs(v_inf - 30.0) < 0.05 &&
                  std::abs(v_far - v_inf) / v_inf < 1e-9;
  return {"optimal velocity spot values", ok,
          Fmt("v*(50)=%.4f m/s, v*(inf)=%.4f m/s, v*(1e12)=%.4f m/s", v50, v_inf, v_far)};
}

CheckResult CheckPowerEndpoints(const ScenarioConfig& config) {
  const EnergyParams params = EnergyParams::FromConfig(config);
  double prev = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (int r = 50; r <= 1000; r += 50) {
    const double p = DirectPower(r, OptimalVelocity(r, params), config);
    monotone = monotone && p <= prev;
    prev = p;
  }
  const double p50 = FixedWingEnergy(50.0, OptimalVelocity(50.0, params), 1.0, params);
  const double p1000 =
      FixedWingEnergy(1000.0, OptimalVelocity(1000.0, params), 1.0, params);
  const bool ok = monotone && std::abs(p50 - 182.5) <= 0.01 * 182.5 &&
                  p1000 >= 95.0 * 0.99 && p1000 <= 100.0 * 1.01;
  return {"propulsion power monotone in radius, endpoint values", ok,
          Fmt("P(50)=%.2f W, P(1000)=%.2f W, monotone=%.0f", p50, p1000, monotone)};
}

CheckResult CheckLinkBudget(const ScenarioConfig& config) {
  const RadioParams radio = RadioParams::FromConfig(config);
  const double eta = config.beamwidth_rad();
  const double nadir_gain = AntennaGainDb({0.0, 100.0}, eta);
  const double edge_gain = AntennaGainDb({100.0 * std::tan(eta), 100.0}, eta);
  // Nadir, h = 100 m: p * c * (h^2)^(-alpha/2) / sigma^2.
  const double direct = config.tx_power_w * std::pow(10.0, config.nearfield_db / 10.0) *
                        std::pow(100.0 * 100.0, -config.pathloss_exponent / 2.0);
  UavState uav;
  uav.center = {0.0, 0.0};
  uav.height_m = 100.0;
  const UavState fleet[] = {uav};
  const double sinr = Sinr({0.0, 0.0}, 0, fleet, radio);
  const double expected = direct / config.noise_power_w;
  const bool ok = std::abs(nadir_gain) < 1e-12 && std::abs(edge_gain + 12.0) < 1e-9 &&
                  std::abs(sinr - expected) / expected < 1e-12 &&
                  std::abs(sinr - 1.14e4) / 1.14e4 < 5e-3;
  return {"antenna gain and single-UAV SINR spot values", ok,
          Fmt("gain(nadir)=%.3f dB, gain(eta)=%.3f dB, SINR=%.5g", nadir_gain,
              edge_gain, sinr)};
}

CheckResult CheckHoverRatio(const ScenarioConfig& config) {
  const EnergyParams params = EnergyParams::FromConfig(config);
  const double hover = HoverPower(params);
  const double fixed = DirectPower(config.r_min, OptimalVelocity(config.r_min, params), config);
  return {"hover power exceeds min-radius orbit power by >= 3x", hover >= 3.0 * fixed,
          Fmt("hover=%.1f W, orbit=%.1f W, ratio=%.2f", hover, fixed, hover / fixed)};
}

CheckResult CheckGradients() {
  double worst = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    NetShape shape;
    shape.input = 6;
    shape.trunk = {5, 4};
    shape.value_hidden = {4};
    shape.advantage_hidden = {3};
    shape.actions = 5;
    shape.relu_heads = trial % 2 == 1;
    DuelingNet net(shape);
    Rng rng = DeriveRng(1234, "verify-gradient", static_cast<std::uint64_t>(trial));
    net.InitGlorot(rng);
    for (auto& layer : net.layers()) {
      std::uniform_real_distribution<double> bias(-0.3, 0.3);
      for (Eigen::Index k = 0; k < layer.bias.size(); ++k) layer.bias(k) = bias(rng);
    }
    worst = std::max(worst, GradientCheckMaxRelError(net, 20, 99 + trial));
  }
  return {"backprop vs central finite differences", worst < 1e-4,
          Fmt("max rel err %.2e over 80 probes (tol 1e-4)", worst)};
}

}  // namespace

double GridOptimalVelocity(double radius_m, const ScenarioConfig& config, double lo,
                           double hi, int points) {
  double best_v = lo;
  double best_p = std::numeric_limits<double>::infinity();
  for (int k = 0; k < points; ++k) {
    const double v = lo + (hi - lo) * k / (points - 1);
    const double p = DirectPower(radius_m, v, config);
    if (p < best_p) {
      best_p = p;
      best_v = v;
    }
  }
  return best_v;
}

double GradientCheckMaxRelError(DuelingNet& net, int probes, std::uint64_t seed) {
  Rng rng = DeriveRng(seed, "gradient-check");
  const int batch = 7;
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd states(net.shape().input, batch);
  for (Eigen::Index c = 0; c < states.cols(); ++c) {
    for (Eigen::Index r = 0; r < states.rows(); ++r) states(r, c) = normal(rng);
  }
  std::uniform_int_distribution<int> pick_action(0, net.shape().actions - 1);
  std::vector<int> actions(batch);
  for (int& a : actions) a = pick_action(rng);
  Eigen::VectorXd targets(batch);
  for (Eigen::Index b = 0; b < batch; ++b) targets(b) = normal(rng);

  ParamSet grad = net.ZeroLike();
  net.Loss(states, actions, targets, &grad);
  std::uniform_int_distribution<std::size_t> pick_param(0, net.ParameterCount() - 1);
  constexpr double kStep = 1e-6;
  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    const std::size_t idx = pick_param(rng);
    double& w = net.Parameter(idx);
    const double saved = w;
    w = saved + kStep;
    const double up = net.Loss(states, actions, targets, nullptr);
    w = saved - kStep;
    const double down = net.Loss(states, actions, targets, nullptr);
    w = saved;
    const double numeric = (up - down) / (2.0 * kStep);
    const double analytic = net.GradientEntry(grad, idx);
    const double scale = std::max(std::abs(numeric), std::abs(analytic));
    if (scale < 1e-10) continue;
    worst = std::max(worst, std::abs(numeric - analytic) / scale);
  }
  return worst;
}

std::vector<CheckResult> RunVerification() {
  const ScenarioConfig config;
  return {CheckVelocityOracle(config), CheckVelocitySpots(config),
          CheckPowerEndpoints(config), CheckLinkBudget(config),
          CheckHoverRatio(config),     CheckGradients()};
}

}  // namespace uavee
