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
#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "efnet/csv.hpp"
#include "efnet/error.hpp"
#include "efnet/schema.hpp"
#include "efnet/synthetic.hpp"
#include "test_support.hpp"

namespace efnet {
namespace {

using testing::make_table;
using testing::small_schema;

TableSchema vitals_schema() {
  return small_schema({"temperature", "heartrate"}, {"complaint"},
                      {"admitted", "home"});
}

DataTable read_text(const std::string& text, const TableSchema& schema,
                    CsvLoadOptions options = {}) {
  std::istringstream in(text);
  return read_csv_table(in, schema, options);
}

TEST(TableSchema, RejectsStructuralProblems) {
  const std::vector<ColumnSpec> cols = {{"x", ColumnKind::kNumerical},
                                        {"y", ColumnKind::kCategorical}};
  EXPECT_THROW(TableSchema(cols, "z", {"a", "b"}), DataError);
  EXPECT_THROW(TableSchema(cols, "x", {"a", "b"}), DataError);
  EXPECT_THROW(TableSchema(cols, "y", {"a"}), DataError);
  EXPECT_THROW(TableSchema(cols, "y", {"a", "a"}), DataError);
  EXPECT_THROW(TableSchema(cols, "y", {"a", "NA"}), DataError);
  EXPECT_THROW(TableSchema({{"x", ColumnKind::kNumerical},
                            {"x", ColumnKind::kCategorical}},
                           "x", {"a", "b"}),
               DataError);
}

TEST(TableSchema, ExcludesTargetFromFeatureLists) {
  const TableSchema s = vitals_schema();
  EXPECT_EQ(s.numerical_columns(), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(s.categorical_columns(), (std::vector<std::size_t>{2}));
  EXPECT_EQ(s.target_index(), 3u);
  EXPECT_TRUE(s.is_missing_text(""));
  EXPECT_TRUE(s.is_missing_text("NA"));
  EXPECT_FALSE(s.is_missing_text("na"));
}

TEST(TableSchema, JsonRoundTrip) {
  const TableSchema s = default_ed_schema();
  EXPECT_EQ(schema_from_json(schema_to_json(s)), s);
  EXPECT_EQ(s.numerical_columns().size(), 14u);
  EXPECT_EQ(s.categorical_columns().size(), 11u);
  EXPECT_EQ(s.class_count(), 8u);
}

TEST(TableSchema, MissingFileNamesPath) {
  try {
    read_schema_file("/nonexistent/dir/schema.json");
    FAIL() << "expected an error";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/schema.json"),
              std::string::npos);
  }
}

TEST(LoadCsv, EmptyCellIsMissing) {
  const auto table = read_text(
      "temperature,heartrate,complaint,label\n"
      "37.1,80,chest pain,admitted\n"
      ",92,cough,home\n"
      "36.5,70,NA,home\n",
      vitals_schema());
  EXPECT_EQ(table.row_count(), 3u);
  EXPECT_EQ(table.missing_count(0), 1u);
  EXPECT_EQ(table.missing_count(1), 0u);
  EXPECT_EQ(table.missing_count(2), 1u);
  EXPECT_EQ(table.cell(0, 2), Cell("chest pain"));
}

TEST(LoadCsv, HeaderOrderDoesNotMatter) {
  const auto a = read_text("temperature,heartrate,complaint,label\n1,2,x,home\n",
                           vitals_schema());
  const auto b = read_text("label,complaint,heartrate,temperature\nhome,x,2,1\n",
                           vitals_schema());
  EXPECT_EQ(a, b);
}

TEST(LoadCsv, HeaderWithoutTargetIsRejected) {
  try {
    read_text("temperature,heartrate,complaint\n1,2,x\n", vitals_schema());
    FAIL() << "expected an error";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("label"), std::string::npos);
  }
}

TEST(LoadCsv, HeaderMismatchListsBothSides) {
  try {
    read_text("temp,heartrate,complaint,label\n1,2,x,home\n", vitals_schema());
    FAIL() << "expected an error";
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("missing columns: temperature"), std::string::npos);
    EXPECT_NE(msg.find("unexpected columns: temp"), std::string::npos);
  }
}

TEST(LoadCsv, UnknownClassNamesRowAndValue) {
  try {
    read_text("temperature,heartrate,complaint,label\n"
              "1,2,x,home\n"
              "1,2,x,unknownclass\n",
              vitals_schema());
    FAIL() << "expected an error";
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("unknownclass"), std::string::npos) << msg;
  }
}

TEST(LoadCsv, TargetOptionalForPrediction) {
  CsvLoadOptions options;
  options.require_target = false;
  const auto t = read_text("temperature,heartrate,complaint\n1,2,x\n",
                           vitals_schema(), options);
  EXPECT_EQ(t.missing_count(3), 1u);
  EXPECT_THROW(read_text("temperature,heartrate,complaint,label\n1,2,x,\n",
                         vitals_schema()),
               DataError);
}

TEST(LoadCsv, WrongArityIsAnError) {
  EXPECT_THROW(read_text("temperature,heartrate,complaint,label\n1,2,home\n",
                         vitals_schema()),
               DataError);
}

TEST(LoadCsv, MissingFileNamesPath) {
  try {
    load_csv("/nonexistent/data.csv", vitals_schema());
    FAIL() << "expected an error";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/data.csv"),
              std::string::npos);
  }
}

TEST(Csv, QuotedFieldsParse) {
  const auto records = parse_csv(
      std::string_view("a,\"b,c\",\"say \"\"hi\"\"\"\r\n\n\"multi\nline\",x,\n"));
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0], (CsvRecord{"a", "b,c", "say \"hi\""}));
  EXPECT_EQ(records[1], (CsvRecord{"multi\nline", "x", ""}));
}

TEST(Csv, EscapeQuotesOnlyWhenNeeded) {
  EXPECT_EQ(escape_csv_field("plain"), "plain");
  EXPECT_EQ(escape_csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(escape_csv_field("q\"q"), "\"q\"\"q\"");
}

TEST(Csv, RoundTripPreservesTable) {
  const TableSchema s = vitals_schema();
  const auto t = make_table(s, {{"37.5", nullptr, "pain, \"sharp\"", "home"},
                                {nullptr, "88", nullptr, "admitted"},
                                {"1e3", "-4", "multi\nline", "home"}});
  std::ostringstream out;
  write_csv_table(t, out);
  EXPECT_EQ(read_text(out.str(), s), t);
}

TEST(Csv, RoundTripSingleColumnWithEmptyCells) {
  const TableSchema s({{"label", ColumnKind::kCategorical}}, "label",
                      {"a", "b"});
  const auto t = make_table(s, {{"a"}, {"b"}});
  std::ostringstream out;
  write_csv_table(t, out);
  EXPECT_EQ(read_text(out.str(), s), t);
}

TEST(DataTable, RejectsCellsSpellingMissing) {
  const TableSchema s = vitals_schema();
  EXPECT_THROW(make_table(s, {{"NA", "1", "x", "home"}}), DataError);
  EXPECT_THROW(make_table(s, {{"", "1", "x", "home"}}), DataError);
}

TEST(Synthetic, SameArgumentsSameTable) {
  SyntheticOptions o;
  o.rows = 1000;
  o.seed = 7;
  const auto a = generate_synthetic(default_ed_schema(), o);
  const auto b = generate_synthetic(default_ed_schema(), o);
  EXPECT_EQ(a, b);
  o.seed = 8;
  EXPECT_FALSE(a == generate_synthetic(default_ed_schema(), o));
}

TEST(Synthetic, WeightsControlClassCounts) {
  const TableSchema s = small_schema({"x"}, {"c"});
  SyntheticOptions o;
  o.rows = 1000;
  o.seed = 3;
  o.class_weights = {9, 1};
  const auto t = generate_synthetic(s, o);
  std::size_t a = 0;
  for (std::size_t r = 0; r < t.row_count(); ++r) a += t.cell(r, 2) == Cell("a");
  EXPECT_EQ(a, 900u);
  EXPECT_EQ(t.row_count() - a, 100u);
}

TEST(Synthetic, ZeroMissingFractionLeavesNoGaps) {
  SyntheticOptions o;
  o.rows = 300;
  o.missing_fraction = 0.0;
  const auto t = generate_synthetic(default_ed_schema(), o);
  for (std::size_t c = 0; c < t.column_count(); ++c) {
    EXPECT_EQ(t.missing_count(c), 0u) << t.schema().columns()[c].name;
  }
}

TEST(Synthetic, LabelsAlwaysValidAndPresent) {
  SyntheticOptions o;
  o.rows = 500;
  o.missing_fraction = 0.3;
  const TableSchema s = default_ed_schema();
  const auto t = generate_synthetic(s, o);
  EXPECT_TRUE(t.has_all_targets());
  std::set<std::string> seen;
  for (std::size_t r = 0; r < t.row_count(); ++r) {
    const auto& v = t.cell(r, s.target_index());
    ASSERT_TRUE(v.has_value());
    EXPECT_TRUE(s.find_label(*v).has_value());
    seen.insert(*v);
  }
  EXPECT_EQ(seen.size(), s.class_count());
}

TEST(Synthetic, RejectsBadOptions) {
  SyntheticOptions o;
  o.class_weights = {1, 2, 3};
  EXPECT_THROW(generate_synthetic(default_ed_schema(), o), UsageError);
  o.class_weights = {};
  o.rows = 3;
  EXPECT_THROW(generate_synthetic(default_ed_schema(), o), UsageError);
  o.rows = 100;
  o.missing_fraction = 1.0;
  EXPECT_THROW(generate_synthetic(default_ed_schema(), o), UsageError);
}

TEST(Synthetic, OutputSurvivesCsvRoundTrip) {
  SyntheticOptions o;
  o.rows = 200;
  o.missing_fraction = 0.1;
  const auto t = generate_synthetic(default_ed_schema(), o);
  std::ostringstream out;
  write_csv_table(t, out);
  EXPECT_EQ(read_text(out.str(), t.schema()), t);
}

TEST(Apportion, LargestRemainderTiesToLowerIndex) {
  EXPECT_EQ(apportion(10, {1, 1, 1}), (std::vector<std::size_t>{4, 3, 3}));
  EXPECT_EQ(apportion(100, {0.8, 0.1, 0.1}),
            (std::vector<std::size_t>{80, 10, 10}));
  EXPECT_EQ(apportion(7, {0.5, 0.5}), (std::vector<std::size_t>{4, 3}));
}

}  // namespace
}  // namespace efnet
