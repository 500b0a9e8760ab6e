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
#include "efnet/nn.hpp"

#include <algorithm>
#include <cmath>

#include "efnet/error.hpp"
#include "efnet/preprocess.hpp"

namespace efnet {

LinearLayer::LinearLayer(std::size_t in_features, std::size_t out_features)
    : weight(out_features, in_features),
      bias(out_features, 0.0),
      grad_weight(out_features, in_features),
      grad_bias(out_features, 0.0) {}

void LinearLayer::init_glorot(CounterRng& rng) {
  const double limit = std::sqrt(
      6.0 / static_cast<double>(in_features() + out_features()));
  for (double& w : weight.data()) w = rng.uniform(-limit, limit);
  std::fill(bias.begin(), bias.end(), 0.0);
}

Matrix LinearLayer::forward(const Matrix& input) const {
  if (input.cols() != in_features()) {
    throw UsageError("linear layer expects " + std::to_string(in_features()) +
                     " inputs, got " + shape_string(input.rows(), input.cols()));
  }
  Matrix out = matmul_transposed(input, weight);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += bias[j];
  }
  return out;
}

Matrix LinearLayer::backward(const Matrix& input, const Matrix& grad_output,
                             bool need_input_grad) {
  if (grad_output.cols() != out_features() ||
      grad_output.rows() != input.rows() || input.cols() != in_features()) {
    throw UsageError("linear backward shape mismatch");
  }
  const std::size_t in = in_features();
  for (std::size_t i = 0; i < input.rows(); ++i) {
    const double* x = input.row(i).data();
    const auto g = grad_output.row(i);
    for (std::size_t o = 0; o < g.size(); ++o) {
      const double go = g[o];
      grad_bias[o] += go;
      if (go == 0.0) continue;
      double* gw = grad_weight.row(o).data();
      for (std::size_t k = 0; k < in; ++k) gw[k] += go * x[k];
    }
  }
  if (!need_input_grad) return {};
  return matmul(grad_output, weight);
}

void LinearLayer::zero_grad() {
  grad_weight.fill(0.0);
  std::fill(grad_bias.begin(), grad_bias.end(), 0.0);
}

void LinearLayer::append_params(std::vector<ParamRef>& out,
                                const std::string& prefix) {
  out.push_back({prefix + ".weight", weight.data(), grad_weight.data()});
  out.push_back({prefix + ".bias", bias, grad_bias});
}

Matrix PReLU::forward(const Matrix& input) const {
  Matrix out = input;
  for (double& v : out.data()) {
    if (v <= 0.0) v *= slope;
  }
  return out;
}

Matrix PReLU::backward(const Matrix& input, const Matrix& grad_output) {
  Matrix grad_in = grad_output;
  const auto x = input.data();
  auto g = grad_in.data();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0) {
      grad_slope += g[i] * x[i];
      g[i] *= slope;
    }
  }
  return grad_in;
}

void PReLU::append_params(std::vector<ParamRef>& out,
                          const std::string& prefix) {
  out.push_back({prefix + ".slope", std::span<double>(&slope, 1),
                 std::span<double>(&grad_slope, 1)});
}

EmbeddingTable::EmbeddingTable(std::size_t vocab_size, std::size_t dim)
    : weight(vocab_size, dim), grad_weight(vocab_size, dim) {}

void EmbeddingTable::init_normal(CounterRng& rng, double std) {
  for (double& w : weight.data()) w = std * rng.normal();
  if (vocab_size() > 0) {
    auto pad = weight.row(kPadIndex);
    std::fill(pad.begin(), pad.end(), 0.0);
  }
}

Matrix EmbeddingTable::forward(const IndexMatrix& tokens) const {
  const std::size_t d = dim();
  Matrix out(tokens.rows(), tokens.cols() * d);
  for (std::size_t b = 0; b < tokens.rows(); ++b) {
    auto dst = out.row(b);
    for (std::size_t s = 0; s < tokens.cols(); ++s) {
      const std::int32_t t = tokens(b, s);
      if (t < 0 || static_cast<std::size_t>(t) >= vocab_size()) {
        throw UsageError("token index " + std::to_string(t) +
                         " outside embedding vocabulary of " +
                         std::to_string(vocab_size()));
      }
      if (t == kPadIndex) continue;
      const auto src = weight.row(static_cast<std::size_t>(t));
      std::copy(src.begin(), src.end(), dst.begin() + s * d);
    }
  }
  return out;
}

void EmbeddingTable::backward(const IndexMatrix& tokens,
                              const Matrix& grad_output) {
  const std::size_t d = dim();
  if (grad_output.rows() != tokens.rows() ||
      grad_output.cols() != tokens.cols() * d) {
    throw UsageError("embedding backward shape mismatch");
  }
  for (std::size_t b = 0; b < tokens.rows(); ++b) {
    const auto g = grad_output.row(b);
    for (std::size_t s = 0; s < tokens.cols(); ++s) {
      const std::int32_t t = tokens(b, s);
      if (t == kPadIndex) continue;
      auto dst = grad_weight.row(static_cast<std::size_t>(t));
      for (std::size_t k = 0; k < d; ++k) dst[k] += g[s * d + k];
    }
  }
}

void EmbeddingTable::zero_grad() { grad_weight.fill(0.0); }

void EmbeddingTable::append_params(std::vector<ParamRef>& out,
                                   const std::string& prefix) {
  out.push_back({prefix + ".weight", weight.data(), grad_weight.data()});
}

Matrix softmax(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    const auto z = logits.row(i);
    auto p = out.row(i);
    const double mx = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
      p[j] = std::exp(z[j] - mx);
      sum += p[j];
    }
    for (double& v : p) v /= sum;
  }
  return out;
}

LossAndGradient softmax_cross_entropy(const Matrix& logits,
                                      std::span<const int> labels) {
  const std::size_t batch = logits.rows();
  const std::size_t k = logits.cols();
  if (labels.size() != batch) {
    throw UsageError("cross-entropy: " + std::to_string(labels.size()) +
                     " labels for " + std::to_string(batch) + " rows");
  }
  if (batch == 0) throw UsageError("cross-entropy over an empty batch");
  LossAndGradient out;
  out.grad_logits = Matrix(batch, k);
  const double inv_b = 1.0 / static_cast<double>(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    const int label = labels[i];
    if (label < 0 || static_cast<std::size_t>(label) >= k) {
      throw UsageError("label " + std::to_string(label) + " outside [0, " +
                       std::to_string(k) + ")");
    }
    const auto z = logits.row(i);
    const double mx = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - mx);
    const double log_sum = std::log(sum);
    out.loss += -(z[static_cast<std::size_t>(label)] - mx - log_sum);
    auto g = out.grad_logits.row(i);
    for (std::size_t j = 0; j < k; ++j) {
      const double p = std::exp(z[j] - mx - log_sum);
      g[j] = (p - (static_cast<int>(j) == label ? 1.0 : 0.0)) * inv_b;
    }
  }
  out.loss *= inv_b;
  return out;
}

std::vector<int> argmax_rows(const Matrix& m) {
  std::vector<int> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    out[i] = static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
  }
  return out;
}

nlohmann::json matrix_to_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"values", m.values()}};
}

Matrix matrix_from_json(const nlohmann::json& doc) {
  return Matrix(doc.at("rows").get<std::size_t>(),
                doc.at("cols").get<std::size_t>(),
                doc.at("values").get<std::vector<double>>());
}

nlohmann::json linear_to_json(const LinearLayer& layer) {
  return {{"weight", matrix_to_json(layer.weight)}, {"bias", layer.bias}};
}

LinearLayer linear_from_json(const nlohmann::json& doc) {
  LinearLayer layer;
  layer.weight = matrix_from_json(doc.at("weight"));
  layer.bias = doc.at("bias").get<std::vector<double>>();
  if (layer.bias.size() != layer.weight.rows()) {
    throw DataError("linear layer bias does not match weight rows");
  }
  layer.grad_weight = Matrix(layer.weight.rows(), layer.weight.cols());
  layer.grad_bias.assign(layer.bias.size(), 0.0);
  return layer;
}

}  // namespace efnet
