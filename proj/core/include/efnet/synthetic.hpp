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
#ifndef EFNET_SYNTHETIC_HPP_
#define EFNET_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "efnet/schema.hpp"

namespace efnet {

struct SyntheticOptions {
  std::size_t rows = 1000;
  std::uint64_t seed = 0;
  // One positive weight per class label; empty means uniform.
  std::vector<double> class_weights;
  // Probability that any non-target cell is blanked.
  double missing_fraction = 0.02;
  // Probability that a categorical token comes from its class's own pool
  // rather than the column-wide pool.
  double token_signal = 0.7;
  // Separation of class-conditional means for numerical columns, in units of
  // the within-class noise.
  double numeric_signal = 0.35;
  std::size_t max_tokens_per_cell = 3;
  std::size_t words_per_column = 24;
};

// Deterministic, platform-independent synthetic table for the schema. Class
// counts follow the weights by largest-remainder apportionment; targets are
// never missing.
DataTable generate_synthetic(const TableSchema& schema,
                             const SyntheticOptions& options);

// Exact integer apportionment of total by weights (largest remainder, ties to
// the lower index). Shared with the stratified splitter.
std::vector<std::size_t> apportion(std::size_t total,
                                   const std::vector<double>& weights);

// Word w of categorical column col's vocabulary (lowercase letters only).
std::string synthetic_word(std::size_t col, std::size_t w);

}  // namespace efnet

#endif  // EFNET_SYNTHETIC_HPP_
