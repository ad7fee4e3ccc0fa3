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

#include "uavee/dueling_net.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "uavee/error.h"

namespace uavee {
namespace {

constexpr char kMagic[8] = {'U', 'A', 'V', 'E', 'E', 'Q', 'N', '\0'};
constexpr std::uint32_t kCheckpointVersion = 1;
constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-7;

DenseLayer MakeLayer(int in, int out, bool relu) {
  return DenseLayer{Eigen::MatrixXd::Zero(out, in), Eigen::VectorXd::Zero(out),
                    relu};
}

// What layer `l` consumes: the state batch, the previous layer's output, or
// the trunk output for the first layer of each stream.
const Eigen::MatrixXd& LayerInput(std::size_t l, std::size_t trunk, std::size_t value,
                                  const Eigen::MatrixXd& states,
                                  const ForwardCache& cache) {
  if (l == trunk || l == trunk + value) {
    return trunk == 0 ? states : cache.outputs[trunk - 1];
  }
  return l == 0 ? states : cache.outputs[l - 1];
}

void WriteU32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void WriteU8(std::ostream& out, std::uint8_t v) {
  out.write(reinterpret_cast<const char*>(&v), 1);
}

void WriteF64(std::ostream& out, double value) {
  const auto v = std::bit_cast<std::uint64_t>(value);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

void ReadBytes(std::istream& in, unsigned char* dst, std::size_t n) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (!in) Fail(ErrorKind::kParse, "checkpoint truncated");
}

std::uint32_t ReadU32(std::istream& in) {
  unsigned char b[4];
  ReadBytes(in, b, 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint8_t ReadU8(std::istream& in) {
  unsigned char b;
  ReadBytes(in, &b, 1);
  return b;
}

double ReadF64(std::istream& in) {
  unsigned char b[8];
  ReadBytes(in, b, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

void WriteWidths(std::ostream& out, const std::vector<int>& widths) {
  WriteU32(out, static_cast<std::uint32_t>(widths.size()));
  for (int w : widths) WriteU32(out, static_cast<std::uint32_t>(w));
}

std::vector<int> ReadWidths(std::istream& in) {
  const std::uint32_t n = ReadU32(in);
  if (n > 1024) Fail(ErrorKind::kParse, "checkpoint: implausible layer count");
  std::vector<int> widths(n);
  for (auto& w : widths) w = static_cast<int>(ReadU32(in));
  return widths;
}

}  // namespace

NetShape NetShape::Default(HeadActivation head) {
  NetShape shape;
  shape.relu_heads = head == HeadActivation::kRelu;
  return shape;
}

void ParamSet::SetZero() {
  for (auto& w : weights) w.setZero();
  for (auto& b : biases) b.setZero();
}

DuelingNet::DuelingNet(NetShape shape) : shape_(std::move(shape)) {
  if (shape_.input < 1 || shape_.actions < 1 || shape_.trunk.empty()) {
    Fail(ErrorKind::kInvalidArgument, "dueling net needs input, trunk and actions");
  }
  int width = shape_.input;
  for (int w : shape_.trunk) {
    layers_.push_back(MakeLayer(width, w, true));
    width = w;
  }
  const int trunk_out = width;
  for (int w : shape_.value_hidden) {
    layers_.push_back(MakeLayer(width, w, true));
    width = w;
  }
  layers_.push_back(MakeLayer(width, 1, shape_.relu_heads));
  width = trunk_out;
  for (int w : shape_.advantage_hidden) {
    layers_.push_back(MakeLayer(width, w, true));
    width = w;
  }
  layers_.push_back(MakeLayer(width, shape_.actions, shape_.relu_heads));
}

void DuelingNet::InitGlorot(Rng& rng) {
  for (DenseLayer& layer : layers_) {
    const double limit =
        std::sqrt(6.0 / static_cast<double>(layer.weight.rows() + layer.weight.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
      for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
        layer.weight(r, c) = dist(rng);
      }
    }
    layer.bias.setZero();
  }
}

void DuelingNet::SetZero() {
  for (DenseLayer& layer : layers_) {
    layer.weight.setZero();
    layer.bias.setZero();
  }
}

Eigen::MatrixXd DuelingNet::Forward(const Eigen::MatrixXd& states,
                                    ForwardCache* cache) const {
  if (states.rows() != shape_.input) {
    Fail(ErrorKind::kInvalidArgument,
         "state width " + std::to_string(states.rows()) + " does not match net input " +
             std::to_string(shape_.input));
  }
  ForwardCache local;
  ForwardCache& c = cache != nullptr ? *cache : local;
  const std::size_t t = trunk_layers();
  const std::size_t v = value_layers();
  c.outputs.resize(layers_.size());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const DenseLayer& layer = layers_[l];
    Eigen::MatrixXd& out = c.outputs[l];
    out.noalias() = layer.weight * LayerInput(l, t, v, states, c);
    out.colwise() += layer.bias;
    if (layer.relu) out = out.cwiseMax(0.0);
  }
  const Eigen::MatrixXd& value = c.outputs[t + v - 1];
  const Eigen::MatrixXd& advantage = c.outputs.back();
  c.value = value.row(0);
  c.q = advantage;
  c.q.rowwise() += c.value - advantage.colwise().mean();

  if (!c.q.allFinite()) {
    std::string where = "the dueling combination";
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      if (!c.outputs[l].allFinite()) {
        where = "layer " + std::to_string(l);
        break;
      }
    }
    Fail(ErrorKind::kNumeric, "non-finite Q-values (first bad activation at " +
                                  where + ")");
  }
  return c.q;
}

Eigen::MatrixXd DuelingNet::QValues(const Eigen::MatrixXd& states) const {
  return Forward(states, nullptr);
}

Eigen::VectorXd DuelingNet::QValues(std::span<const double> state) const {
  const Eigen::Map<const Eigen::MatrixXd> column(state.data(),
                                                 static_cast<Eigen::Index>(state.size()), 1);
  return Forward(column, nullptr).col(0);
}

ParamSet DuelingNet::ZeroLike() const {
  ParamSet p;
  for (const DenseLayer& layer : layers_) {
    p.weights.push_back(Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols()));
    p.biases.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
  }
  return p;
}

double DuelingNet::Loss(const Eigen::MatrixXd& states, std::span<const int> actions,
                        const Eigen::VectorXd& targets, ParamSet* gradient,
                        ForwardCache* workspace) const {
  const Eigen::Index batch = states.cols();
  if (static_cast<Eigen::Index>(actions.size()) != batch || targets.size() != batch ||
      batch == 0) {
    Fail(ErrorKind::kInvalidArgument, "loss batch shapes disagree");
  }
  ForwardCache local;
  ForwardCache& c = workspace != nullptr ? *workspace : local;
  Forward(states, &c);
  const std::size_t n_layers = layers_.size();
  c.grads.resize(n_layers);
  // Gradient of the loss with respect to the Q outputs, kept in the slot of
  // the last advantage layer until the combination is unwound.
  Eigen::MatrixXd& grad_q = c.grads[n_layers - 1];
  grad_q.setZero(c.q.rows(), batch);
  double loss = 0.0;
  const double scale = 2.0 / static_cast<double>(batch);
  for (Eigen::Index b = 0; b < batch; ++b) {
    const int a = actions[static_cast<std::size_t>(b)];
    if (a < 0 || a >= shape_.actions) {
      Fail(ErrorKind::kInvalidArgument, "action index out of range in batch");
    }
    const double err = c.q(a, b) - targets(b);
    loss += err * err;
    grad_q(a, b) = scale * err;
  }
  loss /= static_cast<double>(batch);
  if (!std::isfinite(loss)) Fail(ErrorKind::kNumeric, "non-finite TD loss");
  if (gradient == nullptr) return loss;
  if (gradient->weights.size() != n_layers) *gradient = ZeroLike();

  const std::size_t t = trunk_layers();
  const std::size_t v = value_layers();
  // dQ_a/dV = 1 and dQ_a/dA_c = [a == c] - 1/|A|.
  c.grads[t + v - 1] = grad_q.colwise().sum();
  grad_q.rowwise() -= grad_q.colwise().mean();

  // c.grads[l] holds dLoss/d(output of l); walk the layers backwards. The
  // advantage stream is unwound first, then the value stream, so the trunk
  // output gradient is assigned by one and accumulated by the other.
  for (std::size_t l = n_layers; l-- > 0;) {
    const DenseLayer& layer = layers_[l];
    Eigen::MatrixXd& g = c.grads[l];
    if (layer.relu) g.array() *= (c.outputs[l].array() > 0.0).cast<double>();
    gradient->weights[l].noalias() = g * LayerInput(l, t, v, states, c).transpose();
    gradient->biases[l] = g.rowwise().sum();
    if (l == 0) break;
    if (l == t + v) {
      if (t > 0) c.grads[t - 1].noalias() = layer.weight.transpose() * g;
    } else if (l == t) {
      if (t > 0) c.grads[t - 1].noalias() += layer.weight.transpose() * g;
    } else {
      c.grads[l - 1].noalias() = layer.weight.transpose() * g;
    }
  }
  return loss;
}

std::size_t DuelingNet::ParameterCount() const {
  std::size_t n = 0;
  for (const DenseLayer& layer : layers_) {
    n += static_cast<std::size_t>(layer.weight.size() + layer.bias.size());
  }
  return n;
}

double& DuelingNet::Parameter(std::size_t flat_index) {
  for (DenseLayer& layer : layers_) {
    const auto w = static_cast<std::size_t>(layer.weight.size());
    if (flat_index < w) return layer.weight.data()[flat_index];
    flat_index -= w;
    const auto b = static_cast<std::size_t>(layer.bias.size());
    if (flat_index < b) return layer.bias.data()[flat_index];
    flat_index -= b;
  }
  Fail(ErrorKind::kInvalidArgument, "parameter index out of range");
}

double DuelingNet::GradientEntry(const ParamSet& grad, std::size_t flat_index) const {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto w = static_cast<std::size_t>(grad.weights[l].size());
    if (flat_index < w) return grad.weights[l].data()[flat_index];
    flat_index -= w;
    const auto b = static_cast<std::size_t>(grad.biases[l].size());
    if (flat_index < b) return grad.biases[l].data()[flat_index];
    flat_index -= b;
  }
  Fail(ErrorKind::kInvalidArgument, "parameter index out of range");
}

bool operator==(const DuelingNet& a, const DuelingNet& b) {
  if (!(a.shape_ == b.shape_) || a.layers_.size() != b.layers_.size()) return false;
  for (std::size_t l = 0; l < a.layers_.size(); ++l) {
    const DenseLayer& x = a.layers_[l];
    const DenseLayer& y = b.layers_[l];
    if (x.relu != y.relu || x.weight.rows() != y.weight.rows() ||
        x.weight.cols() != y.weight.cols()) {
      return false;
    }
    if (std::memcmp(x.weight.data(), y.weight.data(),
                    sizeof(double) * static_cast<std::size_t>(x.weight.size())) != 0 ||
        std::memcmp(x.bias.data(), y.bias.data(),
                    sizeof(double) * static_cast<std::size_t>(x.bias.size())) != 0) {
      return false;
    }
  }
  return true;
}

Optimizer::Optimizer(OptimizerKind kind, double learning_rate, double momentum,
                     const DuelingNet& net)
    : kind_(kind),
      learning_rate_(learning_rate),
      momentum_(momentum),
      first_(net.ZeroLike()),
      second_(net.ZeroLike()) {}

void Optimizer::Step(DuelingNet& net, const ParamSet& gradient) {
  ++step_;
  auto& layers = net.layers();
  switch (kind_) {
    case OptimizerKind::kSgd:
      for (std::size_t l = 0; l < layers.size(); ++l) {
        layers[l].weight -= learning_rate_ * gradient.weights[l];
        layers[l].bias -= learning_rate_ * gradient.biases[l];
      }
      break;
    case OptimizerKind::kMomentum:
      for (std::size_t l = 0; l < layers.size(); ++l) {
        first_.weights[l] = momentum_ * first_.weights[l] + gradient.weights[l];
        first_.biases[l] = momentum_ * first_.biases[l] + gradient.biases[l];
        layers[l].weight -= learning_rate_ * first_.weights[l];
        layers[l].bias -= learning_rate_ * first_.biases[l];
      }
      break;
    case OptimizerKind::kAdam: {
      const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step_));
      const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step_));
      const double rate = learning_rate_ * std::sqrt(c2) / c1;
      const auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
        m = kAdamBeta1 * m + (1.0 - kAdamBeta1) * g;
        v = kAdamBeta2 * v + (1.0 - kAdamBeta2) * g.cwiseAbs2();
        param.array() -= rate * m.array() / (v.array().sqrt() + kAdamEpsilon);
      };
      for (std::size_t l = 0; l < layers.size(); ++l) {
        update(layers[l].weight, first_.weights[l], second_.weights[l],
               gradient.weights[l]);
        update(layers[l].bias, first_.biases[l], second_.biases[l],
               gradient.biases[l]);
      }
      break;
    }
  }
}

void SaveCheckpoint(const DuelingNet& net, std::ostream& out) {
  out.write(kMagic, sizeof(kMagic));
  WriteU32(out, kCheckpointVersion);
  const auto& layers = net.layers();
  WriteU32(out, static_cast<std::uint32_t>(layers.size()));
  for (const DenseLayer& layer : layers) {
    WriteU32(out, static_cast<std::uint32_t>(layer.weight.rows()));
    WriteU32(out, static_cast<std::uint32_t>(layer.weight.cols()));
    WriteU8(out, layer.relu ? 1 : 0);
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
        WriteF64(out, layer.weight(r, c));
      }
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) WriteF64(out, layer.bias(r));
  }
  const NetShape& shape = net.shape();
  WriteU32(out, static_cast<std::uint32_t>(shape.input));
  WriteU32(out, static_cast<std::uint32_t>(shape.actions));
  WriteU8(out, shape.relu_heads ? 1 : 0);
  WriteWidths(out, shape.trunk);
  WriteWidths(out, shape.value_hidden);
  WriteWidths(out, shape.advantage_hidden);
  if (!out) Fail(ErrorKind::kIo, "checkpoint write failed");
}

DuelingNet LoadCheckpoint(std::istream& in) {
  unsigned char magic[8];
  ReadBytes(in, magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    Fail(ErrorKind::kParse, "not a uavee checkpoint (bad magic)");
  }
  const std::uint32_t version = ReadU32(in);
  if (version != kCheckpointVersion) {
    Fail(ErrorKind::kParse, "unsupported checkpoint version " + std::to_string(version));
  }
  const std::uint32_t count = ReadU32(in);
  if (count > 1024) Fail(ErrorKind::kParse, "checkpoint: implausible layer count");
  std::vector<DenseLayer> layers(count);
  for (DenseLayer& layer : layers) {
    const std::uint32_t rows = ReadU32(in);
    const std::uint32_t cols = ReadU32(in);
    if (rows > 1u << 16 || cols > 1u << 16) {
      Fail(ErrorKind::kParse, "checkpoint: implausible layer size");
    }
    layer.relu = ReadU8(in) != 0;
    layer.weight.resize(rows, cols);
    layer.bias.resize(rows);
    for (std::uint32_t r = 0; r < rows; ++r) {
      for (std::uint32_t c = 0; c < cols; ++c) layer.weight(r, c) = ReadF64(in);
    }
    for (std::uint32_t r = 0; r < rows; ++r) layer.bias(r) = ReadF64(in);
  }
  NetShape shape;
  shape.input = static_cast<int>(ReadU32(in));
  shape.actions = static_cast<int>(ReadU32(in));
  shape.relu_heads = ReadU8(in) != 0;
  shape.trunk = ReadWidths(in);
  shape.value_hidden = ReadWidths(in);
  shape.advantage_hidden = ReadWidths(in);

  DuelingNet net(shape);
  if (net.layers().size() != layers.size()) {
    Fail(ErrorKind::kParse, "checkpoint layer count disagrees with its shape");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const DenseLayer& expect = net.layers()[l];
    if (expect.weight.rows() != layers[l].weight.rows() ||
        expect.weight.cols() != layers[l].weight.cols() ||
        expect.relu != layers[l].relu) {
      Fail(ErrorKind::kParse,
           "checkpoint layer " + std::to_string(l) + " disagrees with its shape");
    }
  }
  net.layers() = std::move(layers);
  return net;
}

void SaveCheckpointFile(const DuelingNet& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot write checkpoint '" + path + "'");
  SaveCheckpoint(net, out);
}

DuelingNet LoadCheckpointFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot read checkpoint '" + path + "'");
  return LoadCheckpoint(in);
}

}  // namespace uavee
