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
#ifndef EFNET_ENSEMBLE_HPP_
#define EFNET_ENSEMBLE_HPP_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "efnet/classifier.hpp"
#include "efnet/matrix.hpp"

namespace efnet {

// Weighted average of member probability matrices. With no weights the
// result is (sum of members) / M. Explicit weights must be non-negative with
// a positive sum and are normalized. Every member row must sum to 1 within
// 1e-9.
Matrix soft_vote(std::span<const Matrix> member_probabilities,
                 std::span<const double> weights = {});

// Soft-voting combination of independently trained members.
class EnsembleModel : public ProbabilisticClassifier {
 public:
  explicit EnsembleModel(
      std::vector<std::shared_ptr<const ProbabilisticClassifier>> members,
      std::vector<double> weights = {});

  std::string kind() const override { return "ensemble"; }
  std::size_t class_count() const override;
  Matrix predict_proba(const EncodedDataset& data) const override;
  nlohmann::json to_json() const override;

  const std::vector<std::shared_ptr<const ProbabilisticClassifier>>& members()
      const noexcept {
    return members_;
  }
  // Normalized; empty means uniform.
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::vector<std::shared_ptr<const ProbabilisticClassifier>> members_;
  std::vector<double> weights_;
};

}  // namespace efnet

#endif  // EFNET_ENSEMBLE_HPP_
