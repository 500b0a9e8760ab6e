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
#include "efnet/training.hpp"

#include <cmath>
#include <numeric>

#include "efnet/adam.hpp"
#include "efnet/error.hpp"
#include "efnet/random.hpp"

namespace efnet {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw UsageError("learning rate must be positive");
  if (batch_size == 0 || max_epochs == 0 || patience == 0) {
    throw UsageError("batch size, epochs and patience must be positive");
  }
  if (patience >= max_epochs) {
    throw UsageError("patience (" + std::to_string(patience) +
                     ") must be smaller than max epochs (" +
                     std::to_string(max_epochs) + ")");
  }
  if (min_delta < 0.0) throw UsageError("min_delta must be non-negative");
}

bool EarlyStopping::observe(std::size_t epoch, double val_loss) {
  if (val_loss < best_loss_ - min_delta_) {
    best_loss_ = val_loss;
    best_epoch_ = epoch;
    stale_ = 0;
    return true;
  }
  ++stale_;
  return false;
}

LossAccuracy evaluate_loss(const NeuralClassifier& model,
                           const EncodedDataset& data) {
  const Matrix out = model.logits(data);
  LossAccuracy result;
  result.loss = softmax_cross_entropy(out, data.labels).loss;
  const auto predicted = argmax_rows(out);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == data.labels[i]) ++correct;
  }
  result.accuracy =
      static_cast<double>(correct) / static_cast<double>(predicted.size());
  return result;
}

TrainLog train(NeuralClassifier& model, const EncodedDataset& train_set,
               const EncodedDataset& val_set, const TrainConfig& config) {
  config.validate();
  if (train_set.size() == 0 || val_set.size() == 0) {
    throw DataError("training and validation sets must be non-empty");
  }
  if (train_set.labels.size() != train_set.size() ||
      val_set.labels.size() != val_set.size()) {
    throw DataError("training requires labeled datasets");
  }

  AdamOptimizer optimizer(AdamConfig{.learning_rate = config.learning_rate});
  EarlyStopping stopper(config.patience, config.min_delta);
  TrainLog log;
  std::vector<double> best = snapshot_parameters(model);

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    CounterRng rng(derive_seed(config.seed, epoch));
    shuffle(std::span<std::size_t>(order), rng);

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const std::span<const std::size_t> rows(order.data() + start, end - start);
      const EncodedDataset batch = train_set.select_rows(rows);
      model.zero_grad();
      const double loss = model.forward_backward(batch);
      if (!std::isfinite(loss)) {
        throw NumericError("non-finite training loss at epoch " +
                           std::to_string(epoch) + ", batch starting at " +
                           std::to_string(start));
      }
      const auto params = model.parameters();
      optimizer.step(params);
      loss_sum += loss * static_cast<double>(rows.size());
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_sum / static_cast<double>(order.size());
    const auto val = evaluate_loss(model, val_set);
    if (!std::isfinite(val.loss)) {
      throw NumericError("non-finite validation loss at epoch " +
                         std::to_string(epoch));
    }
    record.val_loss = val.loss;
    record.val_accuracy = val.accuracy;
    log.epochs.push_back(record);
    log.stopped_epoch = epoch;

    if (stopper.observe(epoch, val.loss)) best = snapshot_parameters(model);
    if (stopper.should_stop()) break;
  }
  log.best_epoch = stopper.best_epoch();
  restore_parameters(model, best);
  return log;
}

}  // namespace efnet
