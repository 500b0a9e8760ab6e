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
#ifndef EFNET_CLASSIFIER_HPP_
#define EFNET_CLASSIFIER_HPP_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "efnet/matrix.hpp"
#include "efnet/nn.hpp"
#include "efnet/preprocess.hpp"

namespace efnet {

// Anything that maps an encoded dataset to B x K class probabilities. Frozen
// instances are safe to query from several threads.
class ProbabilisticClassifier {
 public:
  virtual ~ProbabilisticClassifier() = default;

  // "efnet", "baseline" or "gbdt".
  virtual std::string kind() const = 0;
  virtual std::size_t class_count() const = 0;
  virtual Matrix predict_proba(const EncodedDataset& data) const = 0;
  virtual nlohmann::json to_json() const = 0;
};

// A softmax network trained by minibatch gradient descent.
class NeuralClassifier : public ProbabilisticClassifier {
 public:
  virtual Matrix logits(const EncodedDataset& data) const = 0;

  // Mean cross-entropy over the batch; accumulates parameter gradients.
  virtual double forward_backward(const EncodedDataset& batch) = 0;

  virtual std::vector<ParamRef> parameters() = 0;

  void zero_grad();

  Matrix predict_proba(const EncodedDataset& data) const override {
    return softmax(logits(data));
  }
};

// Flat copies of parameter values, for best-epoch checkpoints.
std::vector<double> snapshot_parameters(NeuralClassifier& model);
void restore_parameters(NeuralClassifier& model,
                        const std::vector<double>& snapshot);

}  // namespace efnet

#endif  // EFNET_CLASSIFIER_HPP_
