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
#ifndef EFNET_TRAINING_HPP_
#define EFNET_TRAINING_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "efnet/classifier.hpp"
#include "efnet/preprocess.hpp"

namespace efnet {

struct TrainConfig {
  double learning_rate = 0.001;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 50;
  std::size_t patience = 5;
  std::uint64_t seed = 0;
  // A validation loss counts as an improvement only if it beats the best so
  // far by more than this.
  double min_delta = 1e-6;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
  std::size_t stopped_epoch = 0;
  std::size_t best_epoch = 0;
};

// Patience-based stopping rule over a validation-loss sequence.
class EarlyStopping {
 public:
  EarlyStopping(std::size_t patience, double min_delta)
      : patience_(patience), min_delta_(min_delta) {}

  // Records one epoch's validation loss. Returns true when this epoch is the
  // new best.
  bool observe(std::size_t epoch, double val_loss);
  bool should_stop() const noexcept { return stale_ >= patience_; }

  std::size_t best_epoch() const noexcept { return best_epoch_; }
  double best_loss() const noexcept { return best_loss_; }

 private:
  std::size_t patience_;
  double min_delta_;
  std::size_t stale_ = 0;
  std::size_t best_epoch_ = 0;
  double best_loss_ = std::numeric_limits<double>::infinity();
};

// Minibatch Adam with a seeded shuffle per epoch and epoch-level validation.
// On return the model holds the parameters from the best validation epoch.
// Throws NumericError on a non-finite loss.
TrainLog train(NeuralClassifier& model, const EncodedDataset& train_set,
               const EncodedDataset& val_set, const TrainConfig& config);

// Mean cross-entropy and accuracy of a model over a labeled dataset.
struct LossAccuracy {
  double loss = 0.0;
  double accuracy = 0.0;
};
LossAccuracy evaluate_loss(const NeuralClassifier& model,
                           const EncodedDataset& data);

}  // namespace efnet

#endif  // EFNET_TRAINING_HPP_
