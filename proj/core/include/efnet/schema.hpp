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
#ifndef EFNET_SCHEMA_HPP_
#define EFNET_SCHEMA_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace efnet {

enum class ColumnKind { kNumerical, kCategorical };

std::string_view to_string(ColumnKind kind) noexcept;
ColumnKind column_kind_from_string(std::string_view text);

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kNumerical;

  friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

// Ordered column list plus the categorical target and its K class labels.
// Validated on construction; immutable afterwards.
class TableSchema {
 public:
  TableSchema(std::vector<ColumnSpec> columns, std::string target,
              std::vector<std::string> class_labels,
              std::string missing_sentinel = "NA");

  const std::vector<ColumnSpec>& columns() const noexcept { return columns_; }
  const std::string& target() const noexcept { return target_; }
  const std::vector<std::string>& class_labels() const noexcept {
    return class_labels_;
  }
  // Literal (besides the empty string) that denotes a missing cell.
  const std::string& missing_sentinel() const noexcept {
    return missing_sentinel_;
  }

  std::size_t column_count() const noexcept { return columns_.size(); }
  std::size_t class_count() const noexcept { return class_labels_.size(); }
  std::size_t target_index() const noexcept { return target_index_; }

  std::optional<std::size_t> find_column(std::string_view name) const;
  std::optional<std::size_t> find_label(std::string_view label) const;

  // Feature columns in schema order; the target is excluded.
  const std::vector<std::size_t>& numerical_columns() const noexcept {
    return numerical_;
  }
  const std::vector<std::size_t>& categorical_columns() const noexcept {
    return categorical_;
  }

  bool is_missing_text(std::string_view cell) const noexcept {
    return cell.empty() || cell == missing_sentinel_;
  }

  friend bool operator==(const TableSchema& a, const TableSchema& b) {
    return a.columns_ == b.columns_ && a.target_ == b.target_ &&
           a.class_labels_ == b.class_labels_ &&
           a.missing_sentinel_ == b.missing_sentinel_;
  }

 private:
  std::vector<ColumnSpec> columns_;
  std::string target_;
  std::vector<std::string> class_labels_;
  std::string missing_sentinel_;
  std::size_t target_index_ = 0;
  std::vector<std::size_t> numerical_;
  std::vector<std::size_t> categorical_;
};

nlohmann::json schema_to_json(const TableSchema& schema);
TableSchema schema_from_json(const nlohmann::json& doc);

TableSchema read_schema_file(const std::filesystem::path& path);
void write_schema_file(const TableSchema& schema,
                       const std::filesystem::path& path);

// Emergency-department triage layout: 14 numerical and 12 categorical columns
// (the last being the 8-way disposition target).
TableSchema default_ed_schema();

using Cell = std::optional<std::string>;

// Row-major grid of optional text cells conforming to a schema.
class DataTable {
 public:
  // Throws DataError when a row has the wrong arity, a present cell spells a
  // missing value, or a present target cell is not a class label. When
  // allow_missing_target is false, absent target cells are rejected too.
  DataTable(TableSchema schema, std::vector<Cell> cells,
            bool allow_missing_target = true);

  const TableSchema& schema() const noexcept { return schema_; }
  std::size_t row_count() const noexcept { return row_count_; }
  std::size_t column_count() const noexcept { return schema_.column_count(); }

  const Cell& cell(std::size_t row, std::size_t col) const {
    return cells_[row * column_count() + col];
  }
  const std::vector<Cell>& cells() const noexcept { return cells_; }

  std::size_t missing_count(std::size_t col) const;
  bool has_all_targets() const;

  // Rows in the given order, sharing this table's schema.
  DataTable select_rows(const std::vector<std::size_t>& rows) const;

  friend bool operator==(const DataTable& a, const DataTable& b) {
    return a.schema_ == b.schema_ && a.cells_ == b.cells_;
  }

 private:
  TableSchema schema_;
  std::vector<Cell> cells_;
  std::size_t row_count_ = 0;
};

}  // namespace efnet

#endif  // EFNET_SCHEMA_HPP_
