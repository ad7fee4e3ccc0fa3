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

#ifndef UAVEE_DUELING_NET_H_
#define UAVEE_DUELING_NET_H_

#include <Eigen/Core>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "uavee/config.h"
#include "uavee/rng.h"

namespace uavee {

// Layer widths of a dueling Q-network. The value stream ends in a single
// unit and the advantage stream in `actions` units after its hidden layers.
struct NetShape {
  int input = 64;
  std::vector<int> trunk = {64, 64, 64, 64};
  std::vector<int> value_hidden = {64, 64};
  std::vector<int> advantage_hidden = {64, 64};
  int actions = 5;
  // ReLU on the last layer of each stream as well (the combination layer
  // is always linear).
  bool relu_heads = false;

  static NetShape Default(HeadActivation head);
  friend bool operator==(const NetShape&, const NetShape&) = default;
};

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;
  bool relu = true;
};

// Same layout as the network parameters; used for gradients and optimiser
// moments.
struct ParamSet {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  void SetZero();
};

// Activations kept from a batched forward pass for backpropagation, plus
// per-layer gradient scratch. Batches are column-per-sample. Reusing one
// cache across calls of the same batch size avoids reallocation.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> outputs;  // per layer, post-activation
  std::vector<Eigen::MatrixXd> grads;    // per layer, dLoss/d(output)
  Eigen::RowVectorXd value;
  Eigen::MatrixXd q;
};

class DuelingNet {
 public:
  DuelingNet() = default;
  explicit DuelingNet(NetShape shape);

  const NetShape& shape() const { return shape_; }

  // Glorot-uniform weights, zero biases.
  void InitGlorot(Rng& rng);
  void SetZero();

  // Q(s, a) = V(s) + A(s, a) - mean_a A(s, a). Throws kNumeric if any
  // activation is non-finite.
  Eigen::MatrixXd QValues(const Eigen::MatrixXd& states) const;
  Eigen::VectorXd QValues(std::span<const double> state) const;
  Eigen::MatrixXd Forward(const Eigen::MatrixXd& states, ForwardCache* cache) const;

  // Mean over the batch of (Q(s_b, a_b) - y_b)^2 and, if requested, its
  // gradient with respect to every parameter (overwriting *gradient).
  double Loss(const Eigen::MatrixXd& states, std::span<const int> actions,
              const Eigen::VectorXd& targets, ParamSet* gradient,
              ForwardCache* workspace = nullptr) const;

  ParamSet ZeroLike() const;

  // Flat view over every weight and bias, layer by layer (weights
  // column-major then bias). Used by finite-difference checks.
  std::size_t ParameterCount() const;
  double& Parameter(std::size_t flat_index);
  double GradientEntry(const ParamSet& grad, std::size_t flat_index) const;

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  // Index ranges of the three parts inside layers().
  std::size_t trunk_layers() const { return shape_.trunk.size(); }
  std::size_t value_layers() const { return shape_.value_hidden.size() + 1; }
  std::size_t advantage_layers() const {
    return shape_.advantage_hidden.size() + 1;
  }

  void CopyFrom(const DuelingNet& other) { *this = other; }

  friend bool operator==(const DuelingNet& a, const DuelingNet& b);

 private:
  NetShape shape_;
  std::vector<DenseLayer> layers_;
};

// First-order optimisers over a DuelingNet's parameters.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double learning_rate, double momentum,
            const DuelingNet& net);

  void Step(DuelingNet& net, const ParamSet& gradient);

 private:
  OptimizerKind kind_;
  double learning_rate_;
  double momentum_;
  long step_ = 0;
  ParamSet first_;
  ParamSet second_;
};

// Binary checkpoint, little-endian:
//   "UAVEEQN\0" | u32 version=1 | u32 layer_count |
//   per layer: u32 rows | u32 cols | u8 relu | rows*cols f64 row-major weights
//              | rows f64 bias
//   then the shape: u32 input | u32 actions | u8 relu_heads |
//   u32 n + n u32 for trunk, value_hidden, advantage_hidden.
void SaveCheckpoint(const DuelingNet& net, std::ostream& out);
DuelingNet LoadCheckpoint(std::istream& in);
void SaveCheckpointFile(const DuelingNet& net, const std::string& path);
DuelingNet LoadCheckpointFile(const std::string& path);

}  // namespace uavee

#endif  // UAVEE_DUELING_NET_H_
