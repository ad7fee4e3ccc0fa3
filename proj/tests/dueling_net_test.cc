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

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "uavee/dueling_net.h"
#include "uavee/error.h"
#include "uavee/rng.h"

using namespace uavee;

namespace {

NetShape Toy() {
  NetShape s;
  s.input = 4;
  s.trunk = {3};
  s.value_hidden = {3};
  s.advantage_hidden = {3};
  s.actions = 5;
  return s;
}

using Mat = std::vector<std::vector<double>>;

// Plain-loop dense layer, independent of Eigen.
std::vector<double> Dense(const Eigen::MatrixXd& w, const Eigen::VectorXd& b,
                          const std::vector<double>& x, bool relu) {
  std::vector<double> y(w.rows());
  for (int i = 0; i < w.rows(); ++i) {
    double acc = b(i);
    for (int j = 0; j < w.cols(); ++j) acc += w(i, j) * x[j];
    y[i] = relu ? std::max(0.0, acc) : acc;
  }
  return y;
}

std::vector<double> HandForward(const DuelingNet& net, const std::vector<double>& x) {
  const auto& L = net.layers();
  std::vector<double> h = x;
  std::size_t k = 0;
  for (std::size_t i = 0; i < net.trunk_layers(); ++i, ++k)
    h = Dense(L[k].weight, L[k].bias, h, L[k].relu);
  std::vector<double> v = h;
  for (std::size_t i = 0; i < net.value_layers(); ++i, ++k)
    v = Dense(L[k].weight, L[k].bias, v, L[k].relu);
  std::vector<double> a = h;
  for (std::size_t i = 0; i < net.advantage_layers(); ++i, ++k)
    a = Dense(L[k].weight, L[k].bias, a, L[k].relu);
  double mean = 0.0;
  for (double ai : a) mean += ai;
  mean /= a.size();
  std::vector<double> q(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) q[i] = v[0] + a[i] - mean;
  return q;
}

}  // namespace

TEST_SUITE("dueling_net") {

TEST_CASE("default shape has the documented layer widths") {
  DuelingNet net(NetShape::Default(HeadActivation::kLinear));
  const auto& L = net.layers();
  REQUIRE(L.size() == 10);
  for (int k = 0; k < 4; ++k) {
    CHECK(L[k].weight.rows() == 64);
    CHECK(L[k].weight.cols() == 64);
    CHECK(L[k].relu);
  }
  CHECK(L[4].weight.rows() == 64);
  CHECK(L[5].weight.rows() == 64);
  CHECK(L[6].weight.rows() == 1);
  CHECK(L[7].weight.rows() == 64);
  CHECK(L[8].weight.rows() == 64);
  CHECK(L[9].weight.rows() == 5);
  CHECK_FALSE(L[6].relu);
  CHECK_FALSE(L[9].relu);
  DuelingNet relu(NetShape::Default(HeadActivation::kRelu));
  CHECK(relu.layers()[6].relu);
  CHECK(relu.layers()[9].relu);
  // 4*(64*64+64) + 2*(64*64+64) + (64+1) + 2*(64*64+64) + (5*64+5)
  CHECK(net.ParameterCount() == 4 * 4160 + 2 * 4160 + 65 + 2 * 4160 + 325);
}

TEST_CASE("zero weights give zero Q") {
  DuelingNet net(NetShape::Default(HeadActivation::kLinear));
  net.SetZero();
  const std::vector<double> s(64, 0.7);
  const Eigen::VectorXd q = net.QValues(s);
  REQUIRE(q.size() == 5);
  for (int a = 0; a < 5; ++a) CHECK(q(a) == 0.0);
}

TEST_CASE("forward pass matches hand arithmetic") {
  Rng rng(42);
  for (bool relu_heads : {false, true}) {
    NetShape shape = Toy();
    shape.relu_heads = relu_heads;
    DuelingNet net(shape);
    net.InitGlorot(rng);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (auto& layer : net.layers()) {
      for (int i = 0; i < layer.bias.size(); ++i) layer.bias(i) = u(rng);
    }
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> x(4);
      for (double& xi : x) xi = u(rng) * 4.0;
      const Eigen::VectorXd q = net.QValues(x);
      const std::vector<double> oracle = HandForward(net, x);
      for (int a = 0; a < 5; ++a) CHECK(std::abs(q(a) - oracle[a]) < 1e-12);
    }
  }
}

TEST_CASE("advantages are mean-centred") {
  Rng rng(3);
  DuelingNet net(NetShape::Default(HeadActivation::kLinear));
  net.InitGlorot(rng);
  Eigen::MatrixXd states = Eigen::MatrixXd::Random(64, 50);
  ForwardCache cache;
  const Eigen::MatrixXd q = net.Forward(states, &cache);
  for (int b = 0; b < 50; ++b) {
    double sum = 0.0;
    for (int a = 0; a < 5; ++a) sum += q(a, b) - cache.value(b);
    CHECK(std::abs(sum) < 1e-9);
  }
}

TEST_CASE("shifting every advantage bias leaves Q unchanged") {
  Rng rng(9);
  DuelingNet net(NetShape::Default(HeadActivation::kLinear));
  net.InitGlorot(rng);
  const Eigen::MatrixXd states = Eigen::MatrixXd::Random(64, 8);
  const Eigen::MatrixXd before = net.QValues(states);
  net.layers().back().bias.array() += 3.75;
  const Eigen::MatrixXd after = net.QValues(states);
  CHECK((before - after).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("non-finite activations are reported") {
  DuelingNet net(Toy());
  Rng rng(1);
  net.InitGlorot(rng);
  net.layers()[0].weight(0, 0) = std::numeric_limits<double>::infinity();
  std::vector<double> x = {1.0, 0.0, 0.0, 0.0};
  try {
    net.QValues(x);
    FAIL("expected a numeric fault");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNumeric);
    CHECK(std::string(e.what()).find("layer") != std::string::npos);
  }
}

TEST_CASE("analytic gradients match central differences") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    for (bool relu_heads : {false, true}) {
      NetShape shape;
      shape.input = 16;
      shape.trunk = {16, 16};
      shape.value_hidden = {8};
      shape.advantage_hidden = {8};
      shape.relu_heads = relu_heads;
      DuelingNet net(shape);
      Rng rng(seed);
      net.InitGlorot(rng);
      std::uniform_real_distribution<double> u(-0.3, 0.3);
      for (auto& layer : net.layers()) {
        for (int i = 0; i < layer.bias.size(); ++i) layer.bias(i) = u(rng);
      }
      const Eigen::MatrixXd s = Eigen::MatrixXd::Random(16, 6);
      const std::vector<int> actions = {0, 1, 2, 3, 4, 2};
      Eigen::VectorXd y(6);
      y << 0.3, -0.2, 1.0, 0.0, -0.7, 0.4;
      ParamSet grad = net.ZeroLike();
      net.Loss(s, actions, y, &grad);
      std::uniform_int_distribution<std::size_t> pick(0, net.ParameterCount() - 1);
      int checked = 0;
      for (int probe = 0; probe < 20; ++probe) {
        const std::size_t k = pick(rng);
        const double saved = net.Parameter(k);
        const double h = 1e-6;
        net.Parameter(k) = saved + h;
        const double up = net.Loss(s, actions, y, nullptr);
        net.Parameter(k) = saved - h;
        const double down = net.Loss(s, actions, y, nullptr);
        net.Parameter(k) = saved;
        const double numeric = (up - down) / (2 * h);
        const double analytic = net.GradientEntry(grad, k);
        const double scale = std::max(std::abs(numeric), std::abs(analytic));
        if (scale < 1e-8) continue;  // dead unit, both zero
        ++checked;
        CAPTURE(k);
        CHECK(std::abs(numeric - analytic) / scale < 1e-4);
      }
      CHECK(checked > 5);
    }
  }
}

TEST_CASE("loss is the mean squared TD error") {
  DuelingNet net(Toy());
  Rng rng(6);
  net.InitGlorot(rng);
  Eigen::MatrixXd s = Eigen::MatrixXd::Random(4, 3);
  const std::vector<int> actions = {0, 4, 2};
  Eigen::VectorXd y(3);
  y << 0.5, -1.0, 2.0;
  const Eigen::MatrixXd q = net.QValues(s);
  double expected = 0.0;
  for (int b = 0; b < 3; ++b) expected += std::pow(q(actions[b], b) - y(b), 2);
  expected /= 3.0;
  CHECK(net.Loss(s, actions, y, nullptr) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("every optimiser reduces the loss on a fixed regression") {
  for (OptimizerKind kind : {OptimizerKind::kSgd, OptimizerKind::kMomentum,
                             OptimizerKind::kAdam}) {
    DuelingNet net(Toy());
    Rng rng(21);
    net.InitGlorot(rng);
    Optimizer opt(kind, 1e-2, 0.9, net);
    Eigen::MatrixXd s = Eigen::MatrixXd::Random(4, 16);
    std::vector<int> actions(16);
    for (int b = 0; b < 16; ++b) actions[b] = b % 5;
    Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(16, -1.0, 1.0);
    ParamSet grad = net.ZeroLike();
    const double first = net.Loss(s, actions, y, &grad);
    double last = first;
    for (int it = 0; it < 300; ++it) {
      last = net.Loss(s, actions, y, &grad);
      opt.Step(net, grad);
    }
    CHECK(last < 0.5 * first);
  }
}

TEST_CASE("checkpoints round-trip bit for bit") {
  for (HeadActivation head : {HeadActivation::kLinear, HeadActivation::kRelu}) {
    DuelingNet net(NetShape::Default(head));
    Rng rng(77);
    net.InitGlorot(rng);
    net.layers()[2].bias(5) = -0.0;
    net.layers()[3].weight(1, 2) = std::nextafter(1.0, 2.0);
    std::stringstream buf;
    SaveCheckpoint(net, buf);
    const DuelingNet back = LoadCheckpoint(buf);
    CHECK(back == net);
    CHECK(back.shape() == net.shape());
    CHECK(std::signbit(back.layers()[2].bias(5)));
    std::stringstream again;
    SaveCheckpoint(back, again);
    std::stringstream first;
    SaveCheckpoint(net, first);
    CHECK(again.str() == first.str());
  }
}

TEST_CASE("checkpoint header layout") {
  DuelingNet net(Toy());
  std::stringstream buf;
  SaveCheckpoint(net, buf);
  const std::string bytes = buf.str();
  REQUIRE(bytes.size() > 16);
  CHECK(bytes.substr(0, 8) == std::string("UAVEEQN\0", 8));
  CHECK(static_cast<unsigned char>(bytes[8]) == 1);  // version, little-endian
  CHECK(bytes[9] == 0);
  CHECK(static_cast<unsigned char>(bytes[12]) == 5);  // layer count
}

TEST_CASE("corrupt checkpoints are rejected") {
  DuelingNet net(Toy());
  std::stringstream buf;
  SaveCheckpoint(net, buf);
  std::string bytes = buf.str();
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  std::stringstream s1(bad_magic);
  CHECK_THROWS_AS(LoadCheckpoint(s1), Error);
  std::string bad_version = bytes;
  bad_version[8] = 9;
  std::stringstream s2(bad_version);
  CHECK_THROWS_AS(LoadCheckpoint(s2), Error);
  std::stringstream s3(bytes.substr(0, bytes.size() / 2));
  CHECK_THROWS_AS(LoadCheckpoint(s3), Error);
  CHECK_THROWS_AS(LoadCheckpointFile("/nonexistent/q.bin"), Error);
}

}  // TEST_SUITE
