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
#ifndef EFNET_TESTS_AUROC_ORACLE_HPP_
#define EFNET_TESTS_AUROC_ORACLE_HPP_

#include <optional>
#include <vector>

namespace efnet::testing {

// Fraction of (positive, negative) pairs ordered correctly, ties counting
// one half.
inline std::optional<double> auroc_pairs(const std::vector<double>& scores,
                                         const std::vector<bool>& positive) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!positive[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (positive[j]) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  if (pairs == 0.0) return std::nullopt;
  return wins / pairs;
}

}  // namespace efnet::testing

#endif  // EFNET_TESTS_AUROC_ORACLE_HPP_
