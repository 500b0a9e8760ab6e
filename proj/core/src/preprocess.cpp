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
#include "efnet/preprocess.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "efnet/error.hpp"
#include "efnet/log.hpp"
#include "efnet/random.hpp"
#include "efnet/synthetic.hpp"

namespace efnet {
namespace {

bool is_token_char(unsigned char ch) {
  return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
         (ch >= '0' && ch <= '9') || ch >= 0x80;
}

char ascii_lower(char ch) {
  return (ch >= 'A' && ch <= 'Z') ? static_cast<char>(ch - 'A' + 'a') : ch;
}

std::string lowercase(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), ascii_lower);
  return out;
}

// Parsed numeric column with unparseable cells turned into nullopt; logs one
// warning per column.
std::vector<std::optional<double>> parse_numeric_column(const DataTable& table,
                                                        std::size_t col) {
  std::vector<std::optional<double>> out(table.row_count());
  std::size_t bad = 0;
  std::string example;
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    const Cell& cell = table.cell(r, col);
    if (!cell) continue;
    out[r] = parse_number(*cell);
    if (!out[r]) {
      if (bad++ == 0) example = *cell;
    }
  }
  if (bad > 0) {
    log::warn("column '" + table.schema().columns()[col].name + "': " +
              std::to_string(bad) + " non-numeric cell(s) treated as missing " +
              "(first: '" + example + "')");
  }
  return out;
}

std::vector<int> encode_labels(const DataTable& table) {
  const auto& schema = table.schema();
  const std::size_t target = schema.target_index();
  const std::size_t missing = table.missing_count(target);
  if (missing == table.row_count()) return {};
  if (missing != 0) {
    throw DataError("target column '" + schema.target() + "' has " +
                    std::to_string(missing) +
                    " missing value(s); labels must be all present or absent");
  }
  std::vector<int> labels(table.row_count());
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    const auto index = schema.find_label(*table.cell(r, target));
    if (!index) {
      throw DataError("row " + std::to_string(r + 1) + ": label '" +
                      *table.cell(r, target) + "' outside schema");
    }
    labels[r] = static_cast<int>(*index);
  }
  return labels;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    if (is_token_char(static_cast<unsigned char>(ch))) {
      current.push_back(ascii_lower(ch));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::optional<double> parse_number(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::int32_t ColumnVocabulary::encode_token(const std::string& token) const {
  const auto it = token_to_index.find(token);
  if (it == token_to_index.end()) return kUnknownIndex;
  return offset + (it->second - kFirstTokenIndex);
}

std::int32_t ColumnVocabulary::encode_category(
    const std::string& lowered) const {
  const auto it = category_to_id.find(lowered);
  return it == category_to_id.end() ? 0 : it->second;
}

PreprocessState::PreprocessState(TableSchema schema, NumericStats stats,
                                 std::vector<ColumnVocabulary> vocabularies)
    : schema_(std::move(schema)),
      stats_(std::move(stats)),
      vocabularies_(std::move(vocabularies)) {
  const std::size_t n = schema_.numerical_columns().size();
  if (stats_.mean.size() != n || stats_.stddev.size() != n ||
      stats_.constant.size() != n) {
    throw DataError("numeric statistics do not cover " + std::to_string(n) +
                    " numerical columns");
  }
  if (vocabularies_.size() != schema_.categorical_columns().size()) {
    throw DataError("vocabulary count does not match categorical columns");
  }
  std::int32_t next = kFirstTokenIndex;
  for (const auto& vocab : vocabularies_) {
    if (vocab.pad_length < 1) {
      throw DataError("column '" + vocab.column + "' has pad length 0");
    }
    if (vocab.offset != next) {
      throw DataError("column '" + vocab.column +
                      "' has a non-contiguous embedding offset");
    }
    for (const auto& [token, index] : vocab.token_to_index) {
      if (index < kFirstTokenIndex ||
          index >= kFirstTokenIndex +
                       static_cast<std::int32_t>(vocab.token_count())) {
        throw DataError("column '" + vocab.column + "' token '" + token +
                        "' has out-of-range index");
      }
    }
    next += static_cast<std::int32_t>(vocab.token_count());
    total_width_ += vocab.pad_length;
  }
  vocab_size_ = static_cast<std::size_t>(next);
}

std::string PreprocessState::fingerprint() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(
                    fnv1a(state_to_json(*this).dump())));
  return buf;
}

EncodedDataset EncodedDataset::select_rows(
    std::span<const std::size_t> rows) const {
  EncodedDataset out;
  out.numeric = numeric.select_rows(rows);
  out.tokens = tokens.select_rows(rows);
  out.categories = categories.select_rows(rows);
  if (!labels.empty()) {
    out.labels.reserve(rows.size());
    for (std::size_t r : rows) out.labels.push_back(labels[r]);
  }
  return out;
}

PreprocessState fit_preprocess(const DataTable& table) {
  const auto& schema = table.schema();
  if (table.row_count() == 0) throw DataError("cannot fit on an empty table");
  if (!table.has_all_targets()) {
    throw DataError("cannot fit: target column '" + schema.target() +
                    "' has missing values");
  }
  encode_labels(table);

  NumericStats stats;
  for (std::size_t col : schema.numerical_columns()) {
    const auto values = parse_numeric_column(table, col);
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& v : values) {
      if (v) {
        sum += *v;
        ++count;
      }
    }
    if (count == 0) {
      throw DataError("column '" + schema.columns()[col].name +
                      "' has no usable numeric values");
    }
    const double mean = sum / static_cast<double>(count);
    double sq = 0.0;
    for (const auto& v : values) {
      if (v) sq += (*v - mean) * (*v - mean);
    }
    const double sd = std::sqrt(sq / static_cast<double>(count));
    stats.mean.push_back(mean);
    stats.stddev.push_back(sd);
    stats.constant.push_back(sd == 0.0);
  }

  std::vector<ColumnVocabulary> vocabularies;
  std::int32_t offset = kFirstTokenIndex;
  for (std::size_t col : schema.categorical_columns()) {
    ColumnVocabulary vocab;
    vocab.column = schema.columns()[col].name;
    std::map<std::string, std::size_t> raw_counts;
    std::size_t max_tokens = 0;
    for (std::size_t r = 0; r < table.row_count(); ++r) {
      const Cell& cell = table.cell(r, col);
      if (!cell) continue;
      ++raw_counts[*cell];
      const auto tokens = tokenize(*cell);
      max_tokens = std::max(max_tokens, tokens.size());
      for (const auto& t : tokens) vocab.token_to_index.emplace(t, 0);
      vocab.category_to_id.emplace(lowercase(*cell), 0);
    }
    if (raw_counts.empty()) {
      throw DataError("column '" + vocab.column + "' is entirely missing");
    }
    // most frequent raw value; map order breaks ties lexicographically
    std::size_t best = 0;
    for (const auto& [value, count] : raw_counts) {
      if (count > best) {
        best = count;
        vocab.mode_value = value;
      }
    }
    // the imputed mode contributes to token and category maps already
    std::int32_t next = kFirstTokenIndex;
    for (auto& [token, index] : vocab.token_to_index) index = next++;
    std::int32_t next_id = 1;
    for (auto& [value, id] : vocab.category_to_id) id = next_id++;
    vocab.pad_length = std::max<std::size_t>(1, max_tokens);
    vocab.offset = offset;
    offset += static_cast<std::int32_t>(vocab.token_count());
    vocabularies.push_back(std::move(vocab));
  }
  return PreprocessState(schema, std::move(stats), std::move(vocabularies));
}

EncodedDataset transform(const DataTable& table, const PreprocessState& state) {
  const auto& schema = state.schema();
  if (table.schema().columns() != schema.columns() ||
      table.schema().target() != schema.target() ||
      table.schema().class_labels() != schema.class_labels()) {
    throw DataError("table schema does not match the fitted preprocessing");
  }
  const std::size_t rows = table.row_count();
  EncodedDataset out;
  out.numeric = Matrix(rows, state.numeric_width());
  out.tokens = IndexMatrix(rows, state.total_padded_width(), kPadIndex);
  out.categories = IndexMatrix(rows, state.categorical_width(), 0);
  out.labels = encode_labels(table);

  const auto& stats = state.numeric_stats();
  for (std::size_t j = 0; j < schema.numerical_columns().size(); ++j) {
    const auto values = parse_numeric_column(table, schema.numerical_columns()[j]);
    for (std::size_t r = 0; r < rows; ++r) {
      const double v = values[r].value_or(stats.mean[j]);
      out.numeric(r, j) =
          stats.constant[j] ? 0.0 : (v - stats.mean[j]) / stats.stddev[j];
    }
  }

  std::size_t block = 0;
  for (std::size_t j = 0; j < schema.categorical_columns().size(); ++j) {
    const std::size_t col = schema.categorical_columns()[j];
    const auto& vocab = state.vocabularies()[j];
    for (std::size_t r = 0; r < rows; ++r) {
      const Cell& cell = table.cell(r, col);
      const std::string& raw = cell ? *cell : vocab.mode_value;
      const auto tokens = tokenize(raw);
      const std::size_t n = std::min(tokens.size(), vocab.pad_length);
      for (std::size_t t = 0; t < n; ++t) {
        out.tokens(r, block + t) = vocab.encode_token(tokens[t]);
      }
      out.categories(r, j) = vocab.encode_category(lowercase(raw));
    }
    block += vocab.pad_length;
  }
  return out;
}

SplitIndices stratified_split_indices(const std::vector<int>& labels,
                                      std::size_t class_count,
                                      const SplitFractions& fractions,
                                      std::uint64_t seed) {
  const std::array<double, 3> parts = {fractions.train, fractions.val,
                                       fractions.test};
  for (double f : parts) {
    if (!(f > 0.0)) throw UsageError("split fractions must be positive");
  }
  if (std::abs(parts[0] + parts[1] + parts[2] - 1.0) > 1e-9) {
    throw UsageError("split fractions must sum to 1");
  }
  std::vector<std::vector<std::size_t>> by_class(class_count);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int label = labels[i];
    if (label < 0 || static_cast<std::size_t>(label) >= class_count) {
      throw DataError("label " + std::to_string(label) + " out of range");
    }
    by_class[static_cast<std::size_t>(label)].push_back(i);
  }

  SplitIndices out;
  std::array<std::vector<std::size_t>*, 3> targets = {&out.train, &out.val,
                                                      &out.test};
  const std::vector<double> weights(parts.begin(), parts.end());
  for (std::size_t c = 0; c < class_count; ++c) {
    auto& members = by_class[c];
    if (members.empty()) continue;
    if (members.size() < 3) {
      throw DataError("class " + std::to_string(c) + " has only " +
                      std::to_string(members.size()) +
                      " sample(s); stratified splitting needs at least 3");
    }
    CounterRng rng(derive_seed(seed, c));
    shuffle(std::span<std::size_t>(members), rng);
    const auto counts = apportion(members.size(), weights);
    std::size_t pos = 0;
    for (std::size_t p = 0; p < 3; ++p) {
      targets[p]->insert(targets[p]->end(), members.begin() + pos,
                         members.begin() + pos + counts[p]);
      pos += counts[p];
    }
  }
  for (auto* part : targets) std::sort(part->begin(), part->end());
  return out;
}

DatasetSplits stratified_split(const EncodedDataset& data,
                               std::size_t class_count,
                               const SplitFractions& fractions,
                               std::uint64_t seed) {
  if (data.labels.size() != data.size()) {
    throw DataError("stratified split needs a labeled dataset");
  }
  DatasetSplits out;
  out.indices = stratified_split_indices(data.labels, class_count, fractions, seed);
  out.train = data.select_rows(out.indices.train);
  out.val = data.select_rows(out.indices.val);
  out.test = data.select_rows(out.indices.test);
  return out;
}

nlohmann::json state_to_json(const PreprocessState& state) {
  const auto& schema = state.schema();
  const auto& stats = state.numeric_stats();
  nlohmann::json numeric = nlohmann::json::array();
  for (std::size_t j = 0; j < stats.mean.size(); ++j) {
    numeric.push_back(
        {{"column", schema.columns()[schema.numerical_columns()[j]].name},
         {"mean", stats.mean[j]},
         {"std", stats.stddev[j]},
         {"constant", static_cast<bool>(stats.constant[j])}});
  }
  nlohmann::json categorical = nlohmann::json::array();
  for (const auto& vocab : state.vocabularies()) {
    std::vector<std::string> tokens(vocab.token_count());
    for (const auto& [t, i] : vocab.token_to_index) {
      tokens[static_cast<std::size_t>(i - kFirstTokenIndex)] = t;
    }
    std::vector<std::string> categories(vocab.category_to_id.size());
    for (const auto& [v, id] : vocab.category_to_id) {
      categories[static_cast<std::size_t>(id - 1)] = v;
    }
    categorical.push_back({{"column", vocab.column},
                           {"offset", vocab.offset},
                           {"pad_length", vocab.pad_length},
                           {"mode", vocab.mode_value},
                           {"tokens", std::move(tokens)},
                           {"categories", std::move(categories)}});
  }
  return {{"format", "efnet-preprocess"},
          {"version", 1},
          {"schema", schema_to_json(schema)},
          {"numeric", std::move(numeric)},
          {"categorical", std::move(categorical)},
          {"total_padded_width", state.total_padded_width()},
          {"embedding_vocab_size", state.embedding_vocab_size()}};
}

PreprocessState state_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format").get<std::string>() != "efnet-preprocess" ||
        doc.at("version").get<int>() != 1) {
      throw DataError("unsupported preprocessing document");
    }
    TableSchema schema = schema_from_json(doc.at("schema"));
    NumericStats stats;
    for (const auto& n : doc.at("numeric")) {
      stats.mean.push_back(n.at("mean").get<double>());
      stats.stddev.push_back(n.at("std").get<double>());
      stats.constant.push_back(n.at("constant").get<bool>());
    }
    std::vector<ColumnVocabulary> vocabularies;
    for (const auto& c : doc.at("categorical")) {
      ColumnVocabulary vocab;
      vocab.column = c.at("column").get<std::string>();
      vocab.offset = c.at("offset").get<std::int32_t>();
      vocab.pad_length = c.at("pad_length").get<std::size_t>();
      vocab.mode_value = c.at("mode").get<std::string>();
      std::int32_t index = kFirstTokenIndex;
      for (const auto& t : c.at("tokens")) {
        vocab.token_to_index.emplace(t.get<std::string>(), index++);
      }
      std::int32_t id = 1;
      for (const auto& v : c.at("categories")) {
        vocab.category_to_id.emplace(v.get<std::string>(), id++);
      }
      vocabularies.push_back(std::move(vocab));
    }
    PreprocessState state(std::move(schema), std::move(stats),
                          std::move(vocabularies));
    if (state.total_padded_width() !=
        doc.at("total_padded_width").get<std::size_t>()) {
      throw DataError("total padded width disagrees with pad lengths");
    }
    return state;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed preprocessing document: ") +
                    e.what());
  }
}

}  // namespace efnet
