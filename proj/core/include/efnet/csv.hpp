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
#ifndef EFNET_CSV_HPP_
#define EFNET_CSV_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "efnet/schema.hpp"

namespace efnet {

using CsvRecord = std::vector<std::string>;

// RFC 4180 reader: comma separated, double-quote quoting with "" escapes,
// quoted fields may span lines. Accepts LF or CRLF. Blank lines are skipped.
std::vector<CsvRecord> parse_csv(std::istream& in);
std::vector<CsvRecord> parse_csv(std::string_view text);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape_csv_field(std::string_view field);
void write_csv_record(std::ostream& out, const CsvRecord& record);

struct CsvLoadOptions {
  // When false, the target column may be absent from the header (prediction
  // input); its cells are then all missing.
  bool require_target = true;
};

// Reads a CSV whose header names the schema columns in any order. Cells that
// are empty or equal the schema's missing sentinel become missing.
DataTable load_csv(const std::filesystem::path& path, const TableSchema& schema,
                   const CsvLoadOptions& options = {});
DataTable read_csv_table(std::istream& in, const TableSchema& schema,
                         const CsvLoadOptions& options = {});

// Header in schema order; missing cells are written as empty fields.
void write_csv(const DataTable& table, const std::filesystem::path& path);
void write_csv_table(const DataTable& table, std::ostream& out);

}  // namespace efnet

#endif  // EFNET_CSV_HPP_
