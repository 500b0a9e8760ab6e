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
#ifndef EFNET_TESTS_TEST_SUPPORT_HPP_
#define EFNET_TESTS_TEST_SUPPORT_HPP_

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "efnet/preprocess.hpp"
#include "efnet/random.hpp"
#include "efnet/schema.hpp"
#include "efnet/synthetic.hpp"

namespace efnet::testing {

// Numerical feature columns, categorical feature columns, then a categorical
// "label" target.
inline TableSchema small_schema(const std::vector<std::string>& numerical,
                                const std::vector<std::string>& categorical,
                                std::vector<std::string> labels = {"a", "b"}) {
  std::vector<ColumnSpec> cols;
  for (const auto& n : numerical) cols.push_back({n, ColumnKind::kNumerical});
  for (const auto& c : categorical) cols.push_back({c, ColumnKind::kCategorical});
  cols.push_back({"label", ColumnKind::kCategorical});
  return TableSchema(std::move(cols), "label", std::move(labels));
}

// nullptr marks a missing cell.
inline DataTable make_table(const TableSchema& schema,
                            std::initializer_list<std::vector<const char*>> rows) {
  std::vector<Cell> cells;
  for (const auto& row : rows) {
    for (const char* v : row) {
      cells.push_back(v ? Cell(v) : std::nullopt);
    }
  }
  return DataTable(schema, std::move(cells));
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fresh per-test scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("efnet_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

struct Prepared {
  PreprocessState state;
  EncodedDataset data;
};

inline Prepared prepare(const DataTable& table) {
  PreprocessState state = fit_preprocess(table);
  EncodedDataset data = transform(table, state);
  return {std::move(state), std::move(data)};
}

// Classes separable from the numerics alone and from the tokens alone.
inline Prepared separable_dataset(std::size_t rows, std::uint64_t seed) {
  SyntheticOptions o;
  o.rows = rows;
  o.seed = seed;
  o.missing_fraction = 0.0;
  o.token_signal = 1.0;
  o.numeric_signal = 4.0;
  return prepare(generate_synthetic(default_ed_schema(), o));
}

}  // namespace efnet::testing

#endif  // EFNET_TESTS_TEST_SUPPORT_HPP_
