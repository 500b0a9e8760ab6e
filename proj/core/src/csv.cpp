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
#include "efnet/csv.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "efnet/error.hpp"

namespace efnet {
namespace {

bool is_blank(const CsvRecord& record, bool any_quoted) {
  return !any_quoted && record.size() == 1 && record.front().empty();
}

}  // namespace

std::vector<CsvRecord> parse_csv(std::istream& in) {
  std::vector<CsvRecord> records;
  CsvRecord record;
  std::string field;
  bool in_quotes = false;
  bool any_quoted = false;
  bool pending = false;  // characters seen since the last record boundary
  std::size_t line = 1;

  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    if (!is_blank(record, any_quoted)) records.push_back(std::move(record));
    record.clear();
    any_quoted = false;
    pending = false;
  };

  char ch;
  while (in.get(ch)) {
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!field.empty()) {
          throw DataError("CSV line " + std::to_string(line) +
                          ": quote inside an unquoted field");
        }
        in_quotes = true;
        any_quoted = true;
        pending = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        pending = true;
        break;
      case '\r':
        if (in.peek() == '\n') in.get(ch);
        end_record();
        ++line;
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field.push_back(ch);
        pending = true;
    }
  }
  if (in_quotes) {
    throw DataError("CSV line " + std::to_string(line) +
                    ": unterminated quoted field");
  }
  if (pending || !field.empty()) end_record();
  return records;
}

std::vector<CsvRecord> parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_csv(in);
}

std::string escape_csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

void write_csv_record(std::ostream& out, const CsvRecord& record) {
  // a lone empty field would otherwise read back as a blank line
  if (record.size() == 1 && record.front().empty()) {
    out << "\"\"\n";
    return;
  }
  for (std::size_t i = 0; i < record.size(); ++i) {
    if (i > 0) out << ',';
    out << escape_csv_field(record[i]);
  }
  out << '\n';
}

DataTable read_csv_table(std::istream& in, const TableSchema& schema,
                         const CsvLoadOptions& options) {
  auto records = parse_csv(in);
  if (records.empty()) throw DataError("CSV input has no header row");

  const CsvRecord& header = records.front();
  std::map<std::string, std::size_t> header_pos;
  std::vector<std::string> extra;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!schema.find_column(header[i])) {
      extra.push_back(header[i]);
    } else if (!header_pos.emplace(header[i], i).second) {
      throw DataError("CSV header repeats column '" + header[i] + "'");
    }
  }
  std::vector<std::string> missing;
  for (std::size_t c = 0; c < schema.column_count(); ++c) {
    const auto& name = schema.columns()[c].name;
    if (header_pos.count(name)) continue;
    if (c == schema.target_index() && !options.require_target) continue;
    missing.push_back(name);
  }
  if (!missing.empty() || !extra.empty()) {
    std::string msg = "CSV header does not match schema;";
    auto list = [](const std::vector<std::string>& names) {
      std::string s;
      for (const auto& n : names) s += (s.empty() ? " " : ", ") + n;
      return s;
    };
    if (!missing.empty()) msg += " missing columns:" + list(missing) + ";";
    if (!extra.empty()) msg += " unexpected columns:" + list(extra) + ";";
    msg.pop_back();
    throw DataError(msg);
  }

  // source field index for each schema column, -1 when absent
  std::vector<long> source(schema.column_count(), -1);
  for (std::size_t c = 0; c < schema.column_count(); ++c) {
    auto it = header_pos.find(schema.columns()[c].name);
    if (it != header_pos.end()) source[c] = static_cast<long>(it->second);
  }

  std::vector<Cell> cells;
  cells.reserve((records.size() - 1) * schema.column_count());
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      throw DataError("CSV data row " + std::to_string(r) + " has " +
                      std::to_string(rec.size()) + " fields, expected " +
                      std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < schema.column_count(); ++c) {
      if (source[c] < 0) {
        cells.emplace_back(std::nullopt);
        continue;
      }
      const std::string& text = rec[static_cast<std::size_t>(source[c])];
      if (schema.is_missing_text(text)) {
        cells.emplace_back(std::nullopt);
      } else {
        cells.emplace_back(text);
      }
    }
  }
  return DataTable(schema, std::move(cells), !options.require_target);
}

DataTable load_csv(const std::filesystem::path& path, const TableSchema& schema,
                   const CsvLoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open CSV file '" + path.string() + "'");
  try {
    return read_csv_table(in, schema, options);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_csv_table(const DataTable& table, std::ostream& out) {
  const auto& schema = table.schema();
  CsvRecord header;
  for (const auto& col : schema.columns()) header.push_back(col.name);
  write_csv_record(out, header);
  CsvRecord row(schema.column_count());
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    for (std::size_t c = 0; c < schema.column_count(); ++c) {
      const Cell& cell = table.cell(r, c);
      row[c] = cell ? *cell : std::string();
    }
    write_csv_record(out, row);
  }
}

void write_csv(const DataTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write CSV file '" + path.string() + "'");
  write_csv_table(table, out);
}

}  // namespace efnet
