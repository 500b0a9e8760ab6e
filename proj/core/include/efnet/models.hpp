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
#ifndef EFNET_MODELS_HPP_
#define EFNET_MODELS_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "efnet/classifier.hpp"
#include "efnet/nn.hpp"

namespace efnet {

struct EfNetConfig {
  std::size_t numeric_width = 0;   // N
  std::size_t token_width = 0;     // S, total padded width
  std::size_t vocab_size = 2;      // shared embedding rows
  std::size_t class_count = 2;     // K
  std::size_t embed_dim = 16;      // d
  std::size_t cat_hidden = 32;
  std::size_t fusion_width = 16;
  double prelu_init = 0.25;
  std::uint64_t seed = 0;
};

// Embedding-fusion network:
//   categorical: embed -> flatten -> Linear(S*d, 32) -> PReLU
//                -> Linear(32, 16) -> PReLU
//   numerical:   Linear(N, 16) -> PReLU
//   fused:       PReLU(cat + num) -> Linear(16, K)
class EfNetModel : public NeuralClassifier {
 public:
  explicit EfNetModel(const EfNetConfig& config);

  static EfNetConfig config_for(const PreprocessState& state,
                                std::size_t embed_dim = 16,
                                std::uint64_t seed = 0);

  const EfNetConfig& config() const noexcept { return config_; }

  std::string kind() const override { return "efnet"; }
  std::size_t class_count() const override { return config_.class_count; }

  Matrix forward(const Matrix& numeric, const IndexMatrix& tokens) const;
  Matrix logits(const EncodedDataset& data) const override {
    return forward(data.numeric, data.tokens);
  }
  double forward_backward(const EncodedDataset& batch) override;
  // Backpropagates an arbitrary upstream gradient on the logits.
  void backward(const Matrix& numeric, const IndexMatrix& tokens,
                const Matrix& grad_logits);

  std::vector<ParamRef> parameters() override;
  nlohmann::json to_json() const override;
  static EfNetModel from_json(const nlohmann::json& doc);

  EmbeddingTable embedding;
  LinearLayer cat_linear1;
  PReLU cat_act1;
  LinearLayer cat_linear2;
  PReLU cat_act2;
  LinearLayer num_linear;
  PReLU num_act;
  PReLU fusion_act;
  LinearLayer classifier;

 private:
  struct Activations {
    Matrix flat, cat_pre1, cat_h1, cat_pre2, cat_h2, num_pre, num_h, fused_pre,
        fused, logits;
  };
  Activations run(const Matrix& numeric, const IndexMatrix& tokens) const;
  void backward_from(const Activations& a, const Matrix& numeric,
                     const IndexMatrix& tokens, const Matrix& grad_logits);
  void check_inputs(const Matrix& numeric, const IndexMatrix& tokens) const;

  EfNetConfig config_;
};

// Replaces each category id with its relative frequency in the fitting rows;
// ids never seen there encode to 0.
class FrequencyEncoder {
 public:
  FrequencyEncoder() = default;

  void fit(const IndexMatrix& categories);
  Matrix encode(const IndexMatrix& categories) const;

  std::size_t column_count() const noexcept { return frequencies_.size(); }
  const std::vector<std::vector<double>>& frequencies() const noexcept {
    return frequencies_;
  }

  nlohmann::json to_json() const;
  static FrequencyEncoder from_json(const nlohmann::json& doc);

 private:
  std::vector<std::vector<double>> frequencies_;  // [column][id]
};

struct BaselineConfig {
  std::size_t numeric_width = 0;
  std::size_t categorical_width = 0;
  std::size_t class_count = 2;
  std::size_t hidden1 = 64;
  std::size_t hidden2 = 32;
  double prelu_init = 0.25;
  std::uint64_t seed = 0;
};

// Three dense layers with PReLU after the first two, over standardized
// numerics concatenated with frequency-encoded categoricals.
class BaselineMlp : public NeuralClassifier {
 public:
  explicit BaselineMlp(const BaselineConfig& config);

  // Fits the frequency encoder on the training split.
  void fit_encoder(const EncodedDataset& train);
  const FrequencyEncoder& encoder() const noexcept { return encoder_; }
  const BaselineConfig& config() const noexcept { return config_; }

  std::string kind() const override { return "baseline"; }
  std::size_t class_count() const override { return config_.class_count; }

  Matrix build_input(const EncodedDataset& data) const;
  Matrix forward(const Matrix& input) const;
  Matrix logits(const EncodedDataset& data) const override {
    return forward(build_input(data));
  }
  double forward_backward(const EncodedDataset& batch) override;

  std::vector<ParamRef> parameters() override;
  nlohmann::json to_json() const override;
  static BaselineMlp from_json(const nlohmann::json& doc);

  LinearLayer fc1;
  PReLU act1;
  LinearLayer fc2;
  PReLU act2;
  LinearLayer fc3;

 private:
  BaselineConfig config_;
  FrequencyEncoder encoder_;
};

}  // namespace efnet

#endif  // EFNET_MODELS_HPP_
