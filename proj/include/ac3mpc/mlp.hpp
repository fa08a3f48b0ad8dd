// Copyright 2026 The ac3mpc Authors
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

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ac3mpc/errors.hpp"
#include "ac3mpc/rng.hpp"

namespace ac3mpc {

/// Fully-connected network with tanh hidden activations and a linear output,
/// parameters held in one flat vector. Forward/backward are batched
/// (rows = samples) and allocation-light.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<int> sizes);

  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  const std::vector<int>& sizes() const { return sizes_; }
  int param_count() const { return static_cast<int>(theta_.size()); }

  Eigen::VectorXd& params() { return theta_; }
  const Eigen::VectorXd& params() const { return theta_; }

  /// Xavier-uniform weights, zero biases; the final layer is scaled by
  /// `last_layer_scale` (small values keep initial outputs near zero).
  void init(Rng& rng, double last_layer_scale = 1.0);

  struct Cache {
    std::vector<Eigen::MatrixXd> acts;  // acts[0] = input, acts[L] = output
  };

  /// X is (n x input_dim); returns (n x output_dim).
  Eigen::MatrixXd forward(const Eigen::MatrixXd& X, Cache* cache = nullptr) const;

  /// Gradient of sum(dY .* output) w.r.t. the flat parameters; optionally the
  /// gradient w.r.t. the inputs.
  Eigen::VectorXd backward(const Cache& cache, const Eigen::MatrixXd& dY,
                           Eigen::MatrixXd* dX = nullptr) const;

 private:
  struct Layer {
    int w_off, b_off, in, out;
  };
  Eigen::Map<const Eigen::MatrixXd> weight(int l) const {
    return {theta_.data() + layers_[l].w_off, layers_[l].out, layers_[l].in};
  }
  Eigen::Map<const Eigen::VectorXd> bias(int l) const {
    return {theta_.data() + layers_[l].b_off, layers_[l].out};
  }

  std::vector<int> sizes_;
  std::vector<Layer> layers_;
  Eigen::VectorXd theta_;
};

/// Adam optimizer over a flat parameter vector.
class Adam {
 public:
  Adam() = default;
  Adam(int dim, double lr) : lr_(lr), m_(Eigen::VectorXd::Zero(dim)), v_(Eigen::VectorXd::Zero(dim)) {}

  void step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad);
  double lr() const { return lr_; }

 private:
  double lr_ = 3e-4;
  double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  long t_ = 0;
  Eigen::VectorXd m_, v_;
};

/// Clip a gradient to a maximum global L2 norm; returns the pre-clip norm.
double clip_grad_norm(Eigen::VectorXd& grad, double max_norm);

}  // namespace ac3mpc
