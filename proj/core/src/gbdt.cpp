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
#include "efnet/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "efnet/error.hpp"
#include "efnet/nn.hpp"

namespace efnet {

void GbdtConfig::validate() const {
  if (max_depth < 1) throw UsageError("GBDT max_depth must be at least 1");
  if (max_leaves < 2) throw UsageError("GBDT max_leaves must be at least 2");
  if (!(shrinkage > 0.0) || !(l2_reg > 0.0) || !(min_child_hessian > 0.0)) {
    throw UsageError("GBDT shrinkage, l2_reg and min_child_hessian must be positive");
  }
}

double split_threshold(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return mid > lo ? mid : hi;
}

double RegressionTree::predict(std::span<const double> features) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(
        features[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left
                                                                    : n.right);
  }
  return nodes[i].weight;
}

std::size_t RegressionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::size_t> depth(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, depth[i]);
    if (!nodes[i].is_leaf()) {
      depth[static_cast<std::size_t>(nodes[i].left)] = depth[i] + 1;
      depth[static_cast<std::size_t>(nodes[i].right)] = depth[i] + 1;
    }
  }
  return deepest;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(),
                    [](const TreeNode& n) { return n.is_leaf(); }));
}

GbdtModel::GbdtModel(std::size_t class_count, std::size_t feature_count,
                     double shrinkage, double base_score)
    : class_count_(class_count),
      feature_count_(feature_count),
      shrinkage_(shrinkage),
      base_score_(base_score) {
  if (class_count_ < 2) throw UsageError("GBDT needs at least 2 classes");
}

void GbdtModel::add_round(std::vector<RegressionTree> round_trees) {
  if (round_trees.size() != class_count_) {
    throw UsageError("a boosting round needs one tree per class");
  }
  for (auto& t : round_trees) trees_.push_back(std::move(t));
}

Matrix GbdtModel::margins(const Matrix& features,
                          std::optional<std::size_t> round_limit) const {
  if (features.cols() != feature_count_) {
    throw UsageError("GBDT expects " + std::to_string(feature_count_) +
                     " features, got " + std::to_string(features.cols()));
  }
  const std::size_t rounds_used = std::min(rounds(), round_limit.value_or(rounds()));
  Matrix out(features.rows(), class_count_, base_score_);
  for (std::size_t i = 0; i < features.rows(); ++i) {
    const auto x = features.row(i);
    auto m = out.row(i);
    for (std::size_t r = 0; r < rounds_used; ++r) {
      for (std::size_t k = 0; k < class_count_; ++k) {
        m[k] += shrinkage_ * tree(r, k).predict(x);
      }
    }
  }
  return out;
}

Matrix GbdtModel::predict_proba(const Matrix& features) const {
  return softmax(margins(features));
}

nlohmann::json GbdtModel::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : trees_) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : t.nodes) {
      if (n.is_leaf()) {
        nodes.push_back({{"leaf", n.weight}});
      } else {
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right},
                         {"gain", n.gain}});
      }
    }
    trees.push_back(std::move(nodes));
  }
  return {{"class_count", class_count_},
          {"feature_count", feature_count_},
          {"shrinkage", shrinkage_},
          {"base_score", base_score_},
          {"trees", std::move(trees)}};
}

GbdtModel GbdtModel::from_json(const nlohmann::json& doc) {
  GbdtModel model(doc.at("class_count").get<std::size_t>(),
                  doc.at("feature_count").get<std::size_t>(),
                  doc.at("shrinkage").get<double>(),
                  doc.at("base_score").get<double>());
  const auto& trees = doc.at("trees");
  if (trees.size() % model.class_count_ != 0) {
    throw DataError("GBDT tree count is not a multiple of the class count");
  }
  for (const auto& t : trees) {
    RegressionTree tree;
    for (const auto& n : t) {
      TreeNode node;
      if (n.contains("leaf")) {
        node.weight = n.at("leaf").get<double>();
      } else {
        node.feature = n.at("feature").get<int>();
        node.threshold = n.at("threshold").get<double>();
        node.left = n.at("left").get<int>();
        node.right = n.at("right").get<int>();
        node.gain = n.value("gain", 0.0);
      }
      tree.nodes.push_back(node);
    }
    const auto count = static_cast<int>(tree.nodes.size());
    for (const auto& node : tree.nodes) {
      if (!node.is_leaf() &&
          (node.left <= 0 || node.right <= 0 || node.left >= count ||
           node.right >= count ||
           static_cast<std::size_t>(node.feature) >= model.feature_count_)) {
        throw DataError("GBDT tree has an invalid split node");
      }
    }
    if (tree.nodes.empty()) throw DataError("GBDT tree without nodes");
    model.trees_.push_back(std::move(tree));
  }
  return model;
}

namespace {

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
  double left_grad = 0.0;
  double left_hess = 0.0;
};

struct Frontier {
  int node = 0;
  std::size_t depth = 0;
  double grad = 0.0;
  double hess = 0.0;
  std::vector<std::vector<std::uint32_t>> sorted;  // per feature
  SplitChoice best;
};

class TreeGrower {
 public:
  TreeGrower(const Matrix& x, std::span<const double> grad,
             std::span<const double> hess, const GbdtConfig& config)
      : x_(x), grad_(grad), hess_(hess), config_(config),
        goes_left_(x.rows(), 0) {}

  RegressionTree grow(const std::vector<std::vector<std::uint32_t>>& presorted,
                      const std::vector<std::uint32_t>& all_rows) {
    RegressionTree tree;
    Frontier root;
    root.sorted = presorted;
    for (std::uint32_t r : all_rows) {
      root.grad += grad_[r];
      root.hess += hess_[r];
    }
    tree.nodes.push_back(make_leaf(root.grad, root.hess));
    std::vector<Frontier> open;
    consider(std::move(root), all_rows.size(), open);

    std::size_t leaves = 1;
    while (leaves < config_.max_leaves && !open.empty()) {
      // highest gain first; ties go to the earlier node
      auto it = std::max_element(open.begin(), open.end(),
                                 [](const Frontier& a, const Frontier& b) {
                                   if (a.best.gain != b.best.gain) {
                                     return a.best.gain < b.best.gain;
                                   }
                                   return a.node > b.node;
                                 });
      Frontier work = std::move(*it);
      open.erase(it);
      split(tree, std::move(work), open);
      ++leaves;
    }
    return tree;
  }

 private:
  TreeNode make_leaf(double g, double h) const {
    TreeNode leaf;
    leaf.weight = g == 0.0 ? 0.0 : -g / (h + config_.l2_reg);
    return leaf;
  }

  void consider(Frontier work, std::size_t rows, std::vector<Frontier>& open) {
    if (work.depth >= config_.max_depth || rows < 2) return;
    work.best = find_split(work);
    if (work.best.feature >= 0) open.push_back(std::move(work));
  }

  SplitChoice find_split(const Frontier& work) const {
    SplitChoice best;
    const double parent = node_score(work.grad, work.hess, config_.l2_reg);
    for (std::size_t f = 0; f < work.sorted.size(); ++f) {
      const auto& rows = work.sorted[f];
      double gl = 0.0;
      double hl = 0.0;
      for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const std::uint32_t r = rows[i];
        gl += grad_[r];
        hl += hess_[r];
        const double v = x_(r, f);
        const double next = x_(rows[i + 1], f);
        if (!(v < next)) continue;
        const double gr = work.grad - gl;
        const double hr = work.hess - hl;
        if (hl < config_.min_child_hessian || hr < config_.min_child_hessian) {
          continue;
        }
        const double gain =
            0.5 * (node_score(gl, hl, config_.l2_reg) +
                   node_score(gr, hr, config_.l2_reg) - parent);
        if (gain > best.gain) {
          best = {static_cast<int>(f), split_threshold(v, next), gain, gl, hl};
        }
      }
    }
    return best;
  }

  void split(RegressionTree& tree, Frontier work, std::vector<Frontier>& open) {
    const SplitChoice& s = work.best;
    const auto f = static_cast<std::size_t>(s.feature);
    for (std::uint32_t r : work.sorted[0]) {
      goes_left_[r] = x_(r, f) < s.threshold ? 1 : 0;
    }
    Frontier left;
    Frontier right;
    left.depth = right.depth = work.depth + 1;
    left.grad = s.left_grad;
    left.hess = s.left_hess;
    right.grad = work.grad - s.left_grad;
    right.hess = work.hess - s.left_hess;
    left.sorted.resize(work.sorted.size());
    right.sorted.resize(work.sorted.size());
    for (std::size_t k = 0; k < work.sorted.size(); ++k) {
      for (std::uint32_t r : work.sorted[k]) {
        (goes_left_[r] ? left.sorted[k] : right.sorted[k]).push_back(r);
      }
      std::vector<std::uint32_t>().swap(work.sorted[k]);
    }
    const std::size_t left_rows = left.sorted.empty() ? 0 : left.sorted[0].size();
    const std::size_t right_rows =
        right.sorted.empty() ? 0 : right.sorted[0].size();

    left.node = static_cast<int>(tree.nodes.size());
    right.node = left.node + 1;
    tree.nodes.push_back(make_leaf(left.grad, left.hess));
    tree.nodes.push_back(make_leaf(right.grad, right.hess));
    TreeNode& parent = tree.nodes[static_cast<std::size_t>(work.node)];
    parent.feature = s.feature;
    parent.threshold = s.threshold;
    parent.left = left.node;
    parent.right = right.node;
    parent.gain = s.gain;
    parent.weight = 0.0;

    consider(std::move(left), left_rows, open);
    consider(std::move(right), right_rows, open);
  }

  const Matrix& x_;
  std::span<const double> grad_;
  std::span<const double> hess_;
  const GbdtConfig& config_;
  std::vector<char> goes_left_;
};

}  // namespace

double margin_logloss(const Matrix& margins, std::span<const int> labels) {
  return softmax_cross_entropy(margins, labels).loss;
}

GbdtModel gbdt_train(const Matrix& features, const std::vector<int>& labels,
                     std::size_t class_count, const GbdtConfig& config,
                     GbdtTrainLog* log, GbdtValidation validation) {
  config.validate();
  const std::size_t n = features.rows();
  const std::size_t nf = features.cols();
  if (labels.size() != n) throw DataError("GBDT: label count != row count");
  if (n < 2) throw DataError("GBDT needs at least 2 rows");
  if (class_count < 2) throw DataError("GBDT needs at least 2 classes");
  std::vector<bool> seen(class_count, false);
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= class_count) {
      throw DataError("GBDT: label " + std::to_string(y) + " out of range");
    }
    seen[static_cast<std::size_t>(y)] = true;
  }
  if (std::count(seen.begin(), seen.end(), true) < 2) {
    throw DataError("GBDT needs at least 2 distinct classes in training data");
  }
  if (!all_finite(features)) throw DataError("GBDT features must be finite");
  const bool has_val = validation.features && validation.labels;

  std::vector<std::uint32_t> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), 0U);
  std::vector<std::vector<std::uint32_t>> presorted(nf, all_rows);
  for (std::size_t f = 0; f < nf; ++f) {
    std::stable_sort(presorted[f].begin(), presorted[f].end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       return features(a, f) < features(b, f);
                     });
  }

  GbdtModel model(class_count, nf, config.shrinkage, config.base_score);
  Matrix margins(n, class_count, config.base_score);
  Matrix val_margins;
  if (has_val) {
    val_margins = Matrix(validation.features->rows(), class_count,
                         config.base_score);
  }
  std::vector<double> grad(n);
  std::vector<double> hess(n);

  for (std::size_t round = 0; round < config.rounds; ++round) {
    const Matrix probs = softmax(margins);
    std::vector<RegressionTree> round_trees;
    round_trees.reserve(class_count);
    for (std::size_t k = 0; k < class_count; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const double p = probs(i, k);
        grad[i] = p - (static_cast<std::size_t>(labels[i]) == k ? 1.0 : 0.0);
        hess[i] = p * (1.0 - p);
      }
      TreeGrower grower(features, grad, hess, config);
      round_trees.push_back(grower.grow(presorted, all_rows));
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = features.row(i);
      for (std::size_t k = 0; k < class_count; ++k) {
        margins(i, k) += config.shrinkage * round_trees[k].predict(x);
      }
    }
    if (has_val) {
      for (std::size_t i = 0; i < val_margins.rows(); ++i) {
        const auto x = validation.features->row(i);
        for (std::size_t k = 0; k < class_count; ++k) {
          val_margins(i, k) += config.shrinkage * round_trees[k].predict(x);
        }
      }
    }
    model.add_round(std::move(round_trees));

    if (log) {
      log->train_logloss.push_back(margin_logloss(margins, labels));
      if (has_val && val_margins.rows() > 0) {
        log->val_logloss.push_back(
            margin_logloss(val_margins, *validation.labels));
        const auto predicted = argmax_rows(val_margins);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < predicted.size(); ++i) {
          if (predicted[i] == (*validation.labels)[i]) ++correct;
        }
        log->val_accuracy.push_back(static_cast<double>(correct) /
                                    static_cast<double>(predicted.size()));
      }
    }
  }
  return model;
}

std::string to_string(GbdtFeatureView view) {
  return view == GbdtFeatureView::kNumericTokens ? "numeric+tokens"
                                                 : "numeric+categories";
}

GbdtFeatureView gbdt_feature_view_from_string(const std::string& text) {
  if (text == "numeric+tokens") return GbdtFeatureView::kNumericTokens;
  if (text == "numeric+categories") return GbdtFeatureView::kNumericCategories;
  throw UsageError("unknown GBDT feature view '" + text +
                   "' (expected numeric+tokens or numeric+categories)");
}

Matrix gbdt_features(const EncodedDataset& data, GbdtFeatureView view) {
  const IndexMatrix& extra = view == GbdtFeatureView::kNumericTokens
                                 ? data.tokens
                                 : data.categories;
  const std::size_t n = data.numeric.cols();
  Matrix out(data.size(), n + extra.cols());
  for (std::size_t r = 0; r < data.size(); ++r) {
    auto dst = out.row(r);
    const auto num = data.numeric.row(r);
    std::copy(num.begin(), num.end(), dst.begin());
    for (std::size_t c = 0; c < extra.cols(); ++c) {
      dst[n + c] = static_cast<double>(extra(r, c));
    }
  }
  return out;
}

nlohmann::json GbdtClassifier::to_json() const {
  return {{"kind", kind()},
          {"feature_view", to_string(view_)},
          {"model", model_.to_json()}};
}

GbdtClassifier GbdtClassifier::from_json(const nlohmann::json& doc) {
  return GbdtClassifier(
      GbdtModel::from_json(doc.at("model")),
      gbdt_feature_view_from_string(doc.at("feature_view").get<std::string>()));
}

}  // namespace efnet
