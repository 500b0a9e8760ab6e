// Copyright 2026 The efnet Authors
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
#ifndef EFNET_NN_HPP_
#define EFNET_NN_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "efnet/matrix.hpp"
#include "efnet/random.hpp"

namespace efnet {

// A trainable tensor viewed as flat value and gradient buffers.
struct ParamRef {
  std::string name;
  std::span<double> value;
  std::span<double> grad;
};

// y = x W^T + b, with W stored out x in.
struct LinearLayer {
  Matrix weight;
  std::vector<double> bias;
  Matrix grad_weight;
  std::vector<double> grad_bias;

  LinearLayer() = default;
  LinearLayer(std::size_t in_features, std::size_t out_features);

  std::size_t in_features() const noexcept { return weight.cols(); }
  std::size_t out_features() const noexcept { return weight.rows(); }

  // Glorot uniform in +-sqrt(6 / (fan_in + fan_out)); zero bias.
  void init_glorot(CounterRng& rng);

  Matrix forward(const Matrix& input) const;
  // Accumulates parameter gradients and returns dL/dinput (skipped, and
  // returned empty, when need_input_grad is false).
  Matrix backward(const Matrix& input, const Matrix& grad_output,
                  bool need_input_grad = true);

  void zero_grad();
  void append_params(std::vector<ParamRef>& out, const std::string& prefix);
};

// Parametric ReLU with one learnable slope per instance.
struct PReLU {
  double slope = 0.25;
  double grad_slope = 0.0;

  PReLU() = default;
  explicit PReLU(double initial_slope) : slope(initial_slope) {}

  Matrix forward(const Matrix& input) const;
  Matrix backward(const Matrix& input, const Matrix& grad_output);

  void zero_grad() { grad_slope = 0.0; }
  void append_params(std::vector<ParamRef>& out, const std::string& prefix);
};

// Shared token embedding table. Row kPadIndex is pinned to zero: lookups of it
// yield zeros and it never receives gradient.
struct EmbeddingTable {
  Matrix weight;       // vocab_size x dim
  Matrix grad_weight;

  EmbeddingTable() = default;
  EmbeddingTable(std::size_t vocab_size, std::size_t dim);

  std::size_t vocab_size() const noexcept { return weight.rows(); }
  std::size_t dim() const noexcept { return weight.cols(); }

  // Normal(0, std) rows, pad row zero.
  void init_normal(CounterRng& rng, double std = 0.01);

  // Looks up tokens (B x S) and flattens: output(b, s*d + k) = weight(t, k).
  Matrix forward(const IndexMatrix& tokens) const;
  void backward(const IndexMatrix& tokens, const Matrix& grad_output);

  void zero_grad();
  void append_params(std::vector<ParamRef>& out, const std::string& prefix);
};

// Row-wise softmax with max subtraction.
Matrix softmax(const Matrix& logits);

struct LossAndGradient {
  double loss = 0.0;
  Matrix grad_logits;
};

// Mean cross-entropy of softmax(logits) against class indices, with gradient
// (softmax - onehot) / B.
LossAndGradient softmax_cross_entropy(const Matrix& logits,
                                      std::span<const int> labels);

// Lowest index among maxima of each row.
std::vector<int> argmax_rows(const Matrix& m);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& doc);
nlohmann::json linear_to_json(const LinearLayer& layer);
LinearLayer linear_from_json(const nlohmann::json& doc);

}  // namespace efnet

#endif  // EFNET_NN_HPP_
