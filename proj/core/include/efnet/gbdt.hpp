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
#ifndef EFNET_GBDT_HPP_
#define EFNET_GBDT_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "efnet/classifier.hpp"
#include "efnet/matrix.hpp"
#include "efnet/preprocess.hpp"

namespace efnet {

struct GbdtConfig {
  std::size_t rounds = 100;
  std::size_t max_depth = 8;
  std::size_t max_leaves = 100;
  double shrinkage = 0.1;
  double l2_reg = 1.0;
  double min_child_hessian = 1e-3;
  double base_score = 0.0;

  void validate() const;
};

// Split nodes send x[feature] < threshold left.
struct TreeNode {
  int feature = -1;  // -1 for a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double weight = 0.0;  // leaf output, before shrinkage
  double gain = 0.0;    // split gain, 0 for leaves

  bool is_leaf() const noexcept { return feature < 0; }
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(std::span<const double> features) const;
  std::size_t depth() const;
  std::size_t leaf_count() const;
};

// Structure score of a node: G^2 / (H + lambda).
inline double node_score(double grad_sum, double hess_sum, double l2_reg) {
  return grad_sum * grad_sum / (hess_sum + l2_reg);
}

// Boundary between consecutive distinct sorted values lo < hi: the midpoint,
// or hi when the midpoint rounds down to lo.
double split_threshold(double lo, double hi);

class GbdtModel {
 public:
  GbdtModel(std::size_t class_count, std::size_t feature_count,
            double shrinkage, double base_score);

  std::size_t class_count() const noexcept { return class_count_; }
  std::size_t feature_count() const noexcept { return feature_count_; }
  double shrinkage() const noexcept { return shrinkage_; }
  double base_score() const noexcept { return base_score_; }
  std::size_t rounds() const noexcept { return trees_.size() / class_count_; }

  // Round-major: tree(r, k) is trees()[r * K + k].
  const std::vector<RegressionTree>& trees() const noexcept { return trees_; }
  const RegressionTree& tree(std::size_t round, std::size_t cls) const {
    return trees_[round * class_count_ + cls];
  }
  void add_round(std::vector<RegressionTree> round_trees);

  // Per-class margins using at most round_limit rounds (all by default).
  Matrix margins(const Matrix& features,
                 std::optional<std::size_t> round_limit = std::nullopt) const;
  Matrix predict_proba(const Matrix& features) const;

  nlohmann::json to_json() const;
  static GbdtModel from_json(const nlohmann::json& doc);

 private:
  std::size_t class_count_;
  std::size_t feature_count_;
  double shrinkage_;
  double base_score_;
  std::vector<RegressionTree> trees_;
};

struct GbdtTrainLog {
  std::vector<double> train_logloss;  // after each round
  std::vector<double> val_logloss;    // empty without validation data
  std::vector<double> val_accuracy;
};

struct GbdtValidation {
  const Matrix* features = nullptr;
  const std::vector<int>* labels = nullptr;
};

// Second-order boosting of the softmax cross-entropy. Each round fits one
// tree per class to g = p - y, h = p(1 - p) with exact greedy splits and
// best-first growth bounded by max_depth and max_leaves.
GbdtModel gbdt_train(const Matrix& features, const std::vector<int>& labels,
                     std::size_t class_count, const GbdtConfig& config,
                     GbdtTrainLog* log = nullptr,
                     GbdtValidation validation = {});

// Mean softmax cross-entropy of class margins.
double margin_logloss(const Matrix& margins, std::span<const int> labels);

enum class GbdtFeatureView {
  kNumericTokens,      // standardized numerics + token indices as ordinals
  kNumericCategories,  // standardized numerics + whole-value category ids
};

std::string to_string(GbdtFeatureView view);
GbdtFeatureView gbdt_feature_view_from_string(const std::string& text);

Matrix gbdt_features(const EncodedDataset& data, GbdtFeatureView view);

// GBDT behind the common classifier interface.
class GbdtClassifier : public ProbabilisticClassifier {
 public:
  GbdtClassifier(GbdtModel model, GbdtFeatureView view)
      : model_(std::move(model)), view_(view) {}

  std::string kind() const override { return "gbdt"; }
  std::size_t class_count() const override { return model_.class_count(); }
  Matrix predict_proba(const EncodedDataset& data) const override {
    return model_.predict_proba(gbdt_features(data, view_));
  }
  nlohmann::json to_json() const override;
  static GbdtClassifier from_json(const nlohmann::json& doc);

  const GbdtModel& model() const noexcept { return model_; }
  GbdtFeatureView view() const noexcept { return view_; }

 private:
  GbdtModel model_;
  GbdtFeatureView view_;
};

}  // namespace efnet

#endif  // EFNET_GBDT_HPP_
