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
#ifndef EFNET_PREPROCESS_HPP_
#define EFNET_PREPROCESS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "efnet/matrix.hpp"
#include "efnet/schema.hpp"

namespace efnet {

inline constexpr std::int32_t kPadIndex = 0;
inline constexpr std::int32_t kUnknownIndex = 1;
inline constexpr std::int32_t kFirstTokenIndex = 2;

// Lowercases and splits on every run of characters that is not an ASCII
// letter or digit. Bytes >= 0x80 count as token characters so UTF-8 words
// stay whole.
std::vector<std::string> tokenize(std::string_view text);

// Parses a numeric cell (surrounding blanks allowed). Returns nullopt for
// non-numeric or non-finite text.
std::optional<double> parse_number(std::string_view text);

struct NumericStats {
  std::vector<double> mean;
  std::vector<double> stddev;  // population standard deviation
  std::vector<bool> constant;
};

struct ColumnVocabulary {
  std::string column;
  // Column-local indices, >= kFirstTokenIndex, assigned in lexicographic
  // token order.
  std::map<std::string, std::int32_t> token_to_index;
  std::size_t pad_length = 1;
  std::string mode_value;
  // Global index of local index kFirstTokenIndex.
  std::int32_t offset = kFirstTokenIndex;
  // Whole lowercased cell value -> id >= 1 (0 = unseen), lexicographic order.
  // Feeds frequency encoding.
  std::map<std::string, std::int32_t> category_to_id;

  std::size_t token_count() const noexcept { return token_to_index.size(); }

  // Global embedding index of a token; kUnknownIndex when unseen.
  std::int32_t encode_token(const std::string& token) const;
  std::int32_t encode_category(const std::string& lowered) const;
};

// Everything fitted on the training table that transform needs.
class PreprocessState {
 public:
  PreprocessState(TableSchema schema, NumericStats stats,
                  std::vector<ColumnVocabulary> vocabularies);

  const TableSchema& schema() const noexcept { return schema_; }
  const NumericStats& numeric_stats() const noexcept { return stats_; }
  const std::vector<ColumnVocabulary>& vocabularies() const noexcept {
    return vocabularies_;
  }
  // Sum of per-column pad lengths; the token-matrix width.
  std::size_t total_padded_width() const noexcept { return total_width_; }
  // Rows of a shared embedding table: pad, unknown and every column's tokens.
  std::size_t embedding_vocab_size() const noexcept { return vocab_size_; }
  std::size_t numeric_width() const noexcept { return stats_.mean.size(); }
  std::size_t categorical_width() const noexcept {
    return vocabularies_.size();
  }
  std::size_t class_count() const noexcept { return schema_.class_count(); }

  // Stable 16-hex-digit FNV-1a hash of the serialized state.
  std::string fingerprint() const;

 private:
  TableSchema schema_;
  NumericStats stats_;
  std::vector<ColumnVocabulary> vocabularies_;
  std::size_t total_width_ = 0;
  std::size_t vocab_size_ = 0;
};

struct EncodedDataset {
  Matrix numeric;            // B x N, standardized
  IndexMatrix tokens;        // B x S, global embedding indices
  IndexMatrix categories;    // B x C, whole-value category ids
  std::vector<int> labels;   // length B, or empty when unlabeled

  std::size_t size() const noexcept { return numeric.rows(); }
  bool labeled() const noexcept { return !labels.empty() || size() == 0; }

  EncodedDataset select_rows(std::span<const std::size_t> rows) const;
};

PreprocessState fit_preprocess(const DataTable& table);

EncodedDataset transform(const DataTable& table, const PreprocessState& state);

struct SplitFractions {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

// Per-class largest-remainder allocation after a seeded per-class shuffle.
// Each part's per-class count is within 1 of fraction * class size. Indices
// in each part are ascending.
SplitIndices stratified_split_indices(const std::vector<int>& labels,
                                      std::size_t class_count,
                                      const SplitFractions& fractions,
                                      std::uint64_t seed);

struct DatasetSplits {
  SplitIndices indices;
  EncodedDataset train;
  EncodedDataset val;
  EncodedDataset test;
};

DatasetSplits stratified_split(const EncodedDataset& data,
                               std::size_t class_count,
                               const SplitFractions& fractions,
                               std::uint64_t seed);

nlohmann::json state_to_json(const PreprocessState& state);
PreprocessState state_from_json(const nlohmann::json& doc);

}  // namespace efnet

#endif  // EFNET_PREPROCESS_HPP_
