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
#ifndef EFNET_METRICS_HPP_
#define EFNET_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "efnet/matrix.hpp"

namespace efnet {

// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t class_count)
      : counts_(class_count, class_count, 0) {}
  static ConfusionMatrix from_counts(
      const std::vector<std::vector<std::size_t>>& counts);

  void add(int truth, int predicted, std::size_t count = 1);

  std::size_t class_count() const noexcept { return counts_.rows(); }
  std::size_t at(std::size_t truth, std::size_t predicted) const {
    return counts_(truth, predicted);
  }
  std::size_t total() const noexcept;
  std::size_t trace() const noexcept;
  std::size_t row_total(std::size_t truth) const;
  std::size_t column_total(std::size_t predicted) const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  Grid<std::size_t> counts_;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  std::optional<double> auroc;  // absent when the class is all-or-nothing
};

struct AveragedMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  std::size_t samples = 0;
  double accuracy = 0.0;
  AveragedMetrics macro;
  AveragedMetrics weighted;
  std::optional<double> auroc_macro;  // one-vs-rest over classes where defined
  ConfusionMatrix confusion{0};
  std::vector<ClassMetrics> per_class;
};

// Area under the ROC curve from the rank-sum (Mann-Whitney) statistic with
// tied scores sharing their average rank. nullopt unless both positives and
// negatives are present.
std::optional<double> auroc_ovr(std::span<const double> scores,
                                std::span<const bool> positive);

// Rate metrics from a confusion matrix alone (0/0 is taken as 0); AUROC is
// left absent.
EvalReport evaluate_confusion(const ConfusionMatrix& confusion);

// Argmax predictions (ties to the lowest class) plus one-vs-rest AUROC.
EvalReport evaluate(const Matrix& probabilities, std::span<const int> labels);

nlohmann::json report_to_json(const EvalReport& report,
                              const std::vector<std::string>& class_labels);
std::string format_report(const EvalReport& report,
                          const std::vector<std::string>& class_labels);
std::string confusion_to_csv(const ConfusionMatrix& confusion,
                             const std::vector<std::string>& class_labels);

}  // namespace efnet

#endif  // EFNET_METRICS_HPP_
