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

#include "ac3mpc/mlp.hpp"

#include <cmath>

namespace ac3mpc {

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw ShapeMismatchError("mlp needs at least input and output sizes");
  int off = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    Layer layer{off, 0, sizes_[l], sizes_[l + 1]};
    off += layer.in * layer.out;
    layer.b_off = off;
    off += layer.out;
    layers_.push_back(layer);
  }
  theta_ = Eigen::VectorXd::Zero(off);
}

void Mlp::init(Rng& rng, double last_layer_scale) {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& ly = layers_[l];
    const double bound = std::sqrt(6.0 / (ly.in + ly.out));
    const double scale = (l + 1 == layers_.size()) ? last_layer_scale : 1.0;
    for (int k = 0; k < ly.in * ly.out; ++k)
      theta_[ly.w_off + k] = scale * rng.uniform(-bound, bound);
    for (int k = 0; k < ly.out; ++k) theta_[ly.b_off + k] = 0.0;
  }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& X, Cache* cache) const {
  if (X.cols() != input_dim()) throw ShapeMismatchError("mlp forward: bad input width");
  if (cache != nullptr) {
    cache->acts.clear();
    cache->acts.push_back(X);
  }
  Eigen::MatrixXd a = X;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXd z = a * weight(l).transpose();
    z.rowwise() += bias(l).transpose();
    if (l + 1 < layers_.size()) z = z.array().tanh();
    a = std::move(z);
    if (cache != nullptr) cache->acts.push_back(a);
  }
  return a;
}

Eigen::VectorXd Mlp::backward(const Cache& cache, const Eigen::MatrixXd& dY,
                              Eigen::MatrixXd* dX) const {
  if (cache.acts.size() != layers_.size() + 1)
    throw ShapeMismatchError("mlp backward: cache does not match architecture");
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(theta_.size());
  Eigen::MatrixXd delta = dY;  // d loss / d (layer output)
  for (int l = static_cast<int>(layers_.size()) - 1; l >= 0; --l) {
    const Layer& ly = layers_[l];
    // Output layer is linear; hidden layers apply tanh whose activation we cached.
    if (l + 1 < static_cast<int>(layers_.size())) {
      const Eigen::MatrixXd& act = cache.acts[l + 1];
      delta = delta.cwiseProduct((1.0 - act.array().square()).matrix());
    }
    Eigen::Map<Eigen::MatrixXd> dW(grad.data() + ly.w_off, ly.out, ly.in);
    Eigen::Map<Eigen::VectorXd> db(grad.data() + ly.b_off, ly.out);
    dW.noalias() = delta.transpose() * cache.acts[l];
    db = delta.colwise().sum();
    if (l > 0 || dX != nullptr) {
      Eigen::MatrixXd prev = delta * weight(l);
      if (l == 0 && dX != nullptr) *dX = prev;
      delta = std::move(prev);
    }
  }
  return grad;
}

void Adam::step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad) {
  if (theta.size() != m_.size()) throw ShapeMismatchError("adam: dimension mismatch");
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  theta -= (lr_ / bc1) * m_.cwiseQuotient(((v_ / bc2).cwiseSqrt().array() + eps_).matrix());
}

double clip_grad_norm(Eigen::VectorXd& grad, double max_norm) {
  const double norm = grad.norm();
  if (norm > max_norm && norm > 0.0) grad *= max_norm / norm;
  return norm;
}

}  // namespace ac3mpc
