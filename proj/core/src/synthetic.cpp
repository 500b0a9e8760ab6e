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
#include "efnet/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "efnet/error.hpp"
#include "efnet/random.hpp"

namespace efnet {
namespace {

constexpr std::array<const char*, 16> kSyllables = {
    "ka", "lo", "mi", "ne", "pu", "ra", "si", "to",
    "va", "ze", "bri", "cho", "dru", "fen", "gal", "hux"};

// Deterministic value in [-1, 1) keyed by (seed, a, b).
double keyed_unit(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  const std::uint64_t h = derive_seed(derive_seed(seed, a), b);
  return static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0;
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  return buf;
}

}  // namespace

std::vector<std::size_t> apportion(std::size_t total,
                                   const std::vector<double>& weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> counts(weights.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = static_cast<double>(total) * weights[i] / sum;
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    assigned += counts[i];
    remainders.emplace_back(exact - static_cast<double>(counts[i]), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < total; ++i, ++assigned) {
    ++counts[remainders[i % remainders.size()].second];
  }
  return counts;
}

std::string synthetic_word(std::size_t col, std::size_t w) {
  std::size_t code = w + 37 * col;
  std::string word;
  for (int i = 0; i < 3; ++i) {
    word += kSyllables[code % kSyllables.size()];
    code /= kSyllables.size();
  }
  return word;
}

DataTable generate_synthetic(const TableSchema& schema,
                             const SyntheticOptions& options) {
  const std::size_t k = schema.class_count();
  std::vector<double> weights = options.class_weights;
  if (weights.empty()) weights.assign(k, 1.0);
  if (weights.size() != k) {
    throw UsageError("expected " + std::to_string(k) + " class weights, got " +
                     std::to_string(weights.size()));
  }
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw UsageError("class weights must be positive and finite");
    }
  }
  if (options.rows < k) {
    throw UsageError("synthetic row count " + std::to_string(options.rows) +
                     " is smaller than the class count " + std::to_string(k));
  }
  if (options.missing_fraction < 0.0 || options.missing_fraction >= 1.0) {
    throw UsageError("missing fraction must lie in [0, 1)");
  }
  if (options.max_tokens_per_cell == 0 || options.words_per_column < 2) {
    throw UsageError("synthetic token pools need >= 1 token and >= 2 words");
  }

  CounterRng rng(options.seed);
  const auto counts = apportion(options.rows, weights);
  std::vector<std::size_t> labels;
  labels.reserve(options.rows);
  for (std::size_t c = 0; c < k; ++c) labels.insert(labels.end(), counts[c], c);
  shuffle(std::span<std::size_t>(labels), rng);

  const std::size_t vocab = options.words_per_column;
  const std::size_t owned = std::max<std::size_t>(2, vocab / k);
  const std::size_t width = schema.column_count();
  std::vector<Cell> cells;
  cells.reserve(options.rows * width);

  for (std::size_t r = 0; r < options.rows; ++r) {
    const std::size_t label = labels[r];
    for (std::size_t c = 0; c < width; ++c) {
      if (c == schema.target_index()) {
        cells.emplace_back(schema.class_labels()[label]);
        continue;
      }
      const bool blank = rng.bernoulli(options.missing_fraction);
      std::string text;
      if (schema.columns()[c].kind == ColumnKind::kNumerical) {
        const double base = 50.0 * keyed_unit(options.seed, c, 1000);
        const double scale = 1.0 + 9.0 * std::abs(keyed_unit(options.seed, c, 1001));
        const double center = keyed_unit(options.seed, c, label);
        text = format_number(
            base + scale * (options.numeric_signal * center + rng.normal()));
      } else {
        const std::size_t offset = derive_seed(options.seed, c) % vocab;
        const std::size_t tokens = 1 + rng.below(options.max_tokens_per_cell);
        for (std::size_t t = 0; t < tokens; ++t) {
          std::size_t w;
          if (rng.bernoulli(options.token_signal)) {
            w = (label * owned + rng.below(owned) + offset) % vocab;
          } else {
            w = rng.below(vocab);
          }
          std::string word = synthetic_word(c, w);
          if (t == 0 && rng.bernoulli(0.5)) {
            word[0] = static_cast<char>(word[0] - 'a' + 'A');
          }
          if (t > 0) text += ' ';
          text += word;
        }
      }
      if (blank) {
        cells.emplace_back(std::nullopt);
      } else {
        cells.emplace_back(std::move(text));
      }
    }
  }
  return DataTable(schema, std::move(cells));
}

}  // namespace efnet
