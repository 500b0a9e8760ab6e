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
#include "efnet/ensemble.hpp"

#include <cmath>
#include <numeric>

#include "efnet/error.hpp"

namespace efnet {
namespace {

std::vector<double> normalized_weights(std::span<const double> weights,
                                       std::size_t members) {
  if (weights.empty()) return {};
  if (weights.size() != members) {
    throw UsageError(std::to_string(weights.size()) + " ensemble weights for " +
                     std::to_string(members) + " members");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw UsageError("ensemble weights must be finite and non-negative");
    }
    sum += w;
  }
  if (!(sum > 0.0)) throw UsageError("ensemble weights must not all be zero");
  std::vector<double> out(weights.begin(), weights.end());
  for (double& w : out) w /= sum;
  return out;
}

}  // namespace

Matrix soft_vote(std::span<const Matrix> member_probabilities,
                 std::span<const double> weights) {
  if (member_probabilities.empty()) {
    throw UsageError("soft vote needs at least one member");
  }
  const Matrix& first = member_probabilities.front();
  for (std::size_t m = 0; m < member_probabilities.size(); ++m) {
    const Matrix& p = member_probabilities[m];
    if (p.rows() != first.rows() || p.cols() != first.cols()) {
      throw UsageError("soft vote member " + std::to_string(m) + " has shape " +
                       shape_string(p.rows(), p.cols()) + ", expected " +
                       shape_string(first.rows(), first.cols()));
    }
    for (std::size_t i = 0; i < p.rows(); ++i) {
      const auto row = p.row(i);
      const double s = std::accumulate(row.begin(), row.end(), 0.0);
      if (std::abs(s - 1.0) > 1e-9) {
        throw UsageError("soft vote member " + std::to_string(m) + " row " +
                         std::to_string(i) + " sums to " + std::to_string(s));
      }
    }
  }
  const auto w = normalized_weights(weights, member_probabilities.size());

  Matrix out(first.rows(), first.cols());
  auto acc = out.data();
  for (std::size_t m = 0; m < member_probabilities.size(); ++m) {
    const auto p = member_probabilities[m].data();
    if (w.empty()) {
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += p[i];
    } else {
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w[m] * p[i];
    }
  }
  if (w.empty()) {
    const auto m = static_cast<double>(member_probabilities.size());
    for (double& v : acc) v /= m;
  }
  return out;
}

EnsembleModel::EnsembleModel(
    std::vector<std::shared_ptr<const ProbabilisticClassifier>> members,
    std::vector<double> weights)
    : members_(std::move(members)),
      weights_(normalized_weights(weights, members_.size())) {
  if (members_.empty()) throw UsageError("ensemble needs at least one member");
  for (const auto& m : members_) {
    if (!m) throw UsageError("null ensemble member");
    if (m->class_count() != members_.front()->class_count()) {
      throw UsageError("ensemble members disagree on the class count");
    }
  }
}

std::size_t EnsembleModel::class_count() const {
  return members_.front()->class_count();
}

Matrix EnsembleModel::predict_proba(const EncodedDataset& data) const {
  std::vector<Matrix> probs;
  probs.reserve(members_.size());
  for (const auto& m : members_) probs.push_back(m->predict_proba(data));
  return soft_vote(probs, weights_);
}

nlohmann::json EnsembleModel::to_json() const {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& m : members_) members.push_back(m->to_json());
  return {{"kind", kind()}, {"weights", weights_}, {"members", members}};
}

}  // namespace efnet
