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
#include "efnet/schema.hpp"

#include <fstream>
#include <set>
#include <utility>

#include "efnet/error.hpp"

namespace efnet {

std::string_view to_string(ColumnKind kind) noexcept {
  return kind == ColumnKind::kNumerical ? "numerical" : "categorical";
}

ColumnKind column_kind_from_string(std::string_view text) {
  if (text == "numerical") return ColumnKind::kNumerical;
  if (text == "categorical") return ColumnKind::kCategorical;
  throw DataError("unknown column kind '" + std::string(text) +
                  "' (expected numerical or categorical)");
}

TableSchema::TableSchema(std::vector<ColumnSpec> columns, std::string target,
                         std::vector<std::string> class_labels,
                         std::string missing_sentinel)
    : columns_(std::move(columns)),
      target_(std::move(target)),
      class_labels_(std::move(class_labels)),
      missing_sentinel_(std::move(missing_sentinel)) {
  std::set<std::string> names;
  for (const auto& col : columns_) {
    if (col.name.empty()) throw DataError("schema column with empty name");
    if (!names.insert(col.name).second) {
      throw DataError("duplicate schema column '" + col.name + "'");
    }
  }
  const auto target_pos = find_column(target_);
  if (!target_pos) {
    throw DataError("target column '" + target_ + "' is not in the schema");
  }
  if (columns_[*target_pos].kind != ColumnKind::kCategorical) {
    throw DataError("target column '" + target_ + "' must be categorical");
  }
  target_index_ = *target_pos;

  if (class_labels_.size() < 2) {
    throw DataError("schema needs at least 2 class labels");
  }
  std::set<std::string> labels;
  for (const auto& label : class_labels_) {
    if (is_missing_text(label)) {
      throw DataError("class label '" + label + "' collides with missing value");
    }
    if (!labels.insert(label).second) {
      throw DataError("duplicate class label '" + label + "'");
    }
  }

  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i == target_index_) continue;
    if (columns_[i].kind == ColumnKind::kNumerical) {
      numerical_.push_back(i);
    } else {
      categorical_.push_back(i);
    }
  }
}

std::optional<std::size_t> TableSchema::find_column(
    std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> TableSchema::find_label(
    std::string_view label) const {
  for (std::size_t i = 0; i < class_labels_.size(); ++i) {
    if (class_labels_[i] == label) return i;
  }
  return std::nullopt;
}

nlohmann::json schema_to_json(const TableSchema& schema) {
  nlohmann::json columns = nlohmann::json::array();
  for (const auto& col : schema.columns()) {
    columns.push_back({{"name", col.name}, {"kind", to_string(col.kind)}});
  }
  return {{"format", "efnet-schema"},
          {"version", 1},
          {"columns", std::move(columns)},
          {"target", schema.target()},
          {"class_labels", schema.class_labels()},
          {"missing_sentinel", schema.missing_sentinel()}};
}

TableSchema schema_from_json(const nlohmann::json& doc) {
  try {
    if (doc.contains("version") && doc.at("version").get<int>() != 1) {
      throw DataError("unsupported schema version " +
                      doc.at("version").dump());
    }
    std::vector<ColumnSpec> columns;
    for (const auto& col : doc.at("columns")) {
      columns.push_back({col.at("name").get<std::string>(),
                         column_kind_from_string(
                             col.at("kind").get<std::string>())});
    }
    return TableSchema(std::move(columns), doc.at("target").get<std::string>(),
                       doc.at("class_labels").get<std::vector<std::string>>(),
                       doc.value("missing_sentinel", std::string("NA")));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed schema document: ") + e.what());
  }
}

TableSchema read_schema_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open schema file '" + path.string() + "'");
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("schema file '" + path.string() + "' is not valid JSON: " +
                    e.what());
  }
  return schema_from_json(doc);
}

void write_schema_file(const TableSchema& schema,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write schema file '" + path.string() + "'");
  out << schema_to_json(schema).dump(2) << '\n';
}

TableSchema default_ed_schema() {
  using K = ColumnKind;
  std::vector<ColumnSpec> columns = {
      {"subject_id", K::kNumerical},      {"hadm_id", K::kNumerical},
      {"stay_id", K::kNumerical},         {"temperature", K::kNumerical},
      {"heartrate", K::kNumerical},       {"resprate", K::kNumerical},
      {"o2sat", K::kNumerical},           {"sbp", K::kNumerical},
      {"dbp", K::kNumerical},             {"icd_version", K::kNumerical},
      {"gsn", K::kNumerical},             {"ndc", K::kNumerical},
      {"etccode", K::kNumerical},         {"acuity", K::kNumerical},
      {"gender", K::kCategorical},        {"race", K::kCategorical},
      {"arrival_transport", K::kCategorical},
      {"charttime", K::kCategorical},     {"rhythm", K::kCategorical},
      {"pain", K::kCategorical},          {"chiefcomplaint", K::kCategorical},
      {"icd_code", K::kCategorical},      {"icd_title", K::kCategorical},
      {"name", K::kCategorical},          {"etcdescription", K::kCategorical},
      {"disposition", K::kCategorical},
  };
  std::vector<std::string> labels = {"ADMITTED",
                                     "HOME",
                                     "TRANSFER",
                                     "ELOPED",
                                     "LEFT AGAINST MEDICAL ADVICE",
                                     "LEFT WITHOUT BEING SEEN",
                                     "EXPIRED",
                                     "OTHER"};
  return TableSchema(std::move(columns), "disposition", std::move(labels));
}

DataTable::DataTable(TableSchema schema, std::vector<Cell> cells,
                     bool allow_missing_target)
    : schema_(std::move(schema)), cells_(std::move(cells)) {
  const std::size_t width = schema_.column_count();
  if (cells_.size() % width != 0) {
    throw DataError("cell count " + std::to_string(cells_.size()) +
                    " is not a multiple of the schema width " +
                    std::to_string(width));
  }
  row_count_ = cells_.size() / width;
  const std::size_t target = schema_.target_index();
  for (std::size_t r = 0; r < row_count_; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const Cell& value = cells_[r * width + c];
      if (value && schema_.is_missing_text(*value)) {
        throw DataError("row " + std::to_string(r + 1) + ", column '" +
                        schema_.columns()[c].name +
                        "': present cell holds a missing-value marker");
      }
    }
    const Cell& label = cells_[r * width + target];
    if (label) {
      if (!schema_.find_label(*label)) {
        throw DataError("row " + std::to_string(r + 1) + ": target value '" +
                        *label + "' is not one of the schema class labels");
      }
    } else if (!allow_missing_target) {
      throw DataError("row " + std::to_string(r + 1) + ": target is missing");
    }
  }
}

std::size_t DataTable::missing_count(std::size_t col) const {
  std::size_t n = 0;
  for (std::size_t r = 0; r < row_count_; ++r) {
    if (!cell(r, col)) ++n;
  }
  return n;
}

bool DataTable::has_all_targets() const {
  return missing_count(schema_.target_index()) == 0;
}

DataTable DataTable::select_rows(const std::vector<std::size_t>& rows) const {
  const std::size_t width = column_count();
  std::vector<Cell> out;
  out.reserve(rows.size() * width);
  for (std::size_t r : rows) {
    for (std::size_t c = 0; c < width; ++c) out.push_back(cell(r, c));
  }
  return DataTable(schema_, std::move(out));
}

}  // namespace efnet
