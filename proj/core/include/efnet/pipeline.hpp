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
#ifndef EFNET_PIPELINE_HPP_
#define EFNET_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "efnet/bundle.hpp"
#include "efnet/gbdt.hpp"
#include "efnet/metrics.hpp"
#include "efnet/preprocess.hpp"
#include "efnet/schema.hpp"
#include "efnet/training.hpp"

namespace efnet {

enum class ModelKind { kBaseline, kEfNet, kGbdt, kEnsemble };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& text);

struct RunConfig {
  std::filesystem::path schema_path;  // empty: built-in ED schema
  std::filesystem::path data_path;    // empty: generate synthetic data
  std::size_t synthetic_rows = 5000;
  std::vector<double> imbalance;      // synthetic class weights; empty uniform
  double missing_fraction = 0.02;
  std::optional<std::uint64_t> synthetic_seed;  // defaults to seed

  ModelKind model = ModelKind::kEfNet;
  std::vector<ModelKind> ensemble_members = {ModelKind::kEfNet,
                                             ModelKind::kGbdt};
  std::vector<double> ensemble_weights;  // empty: uniform
  bool parallel_members = false;

  TrainConfig train;
  GbdtConfig gbdt;
  GbdtFeatureView gbdt_view = GbdtFeatureView::kNumericTokens;
  std::size_t embed_dim = 16;
  std::size_t baseline_hidden1 = 64;
  std::size_t baseline_hidden2 = 32;
  double prelu_init = 0.25;
  SplitFractions split;

  std::uint64_t seed = 42;
  std::filesystem::path out_dir = "efnet_out";

  void validate() const;
};

nlohmann::json run_config_to_json(const RunConfig& config);
// Overlays the fields present in doc onto base. Unknown keys are rejected.
RunConfig run_config_from_json(const nlohmann::json& doc, RunConfig base = {});
RunConfig read_run_config(const std::filesystem::path& path,
                          RunConfig base = {});

struct MemberReport {
  std::string name;
  EvalReport report;
};

// Test-split evaluation of a trained bundle: every member (for ensembles)
// and the final predictor.
struct RunReport {
  std::vector<std::string> class_labels;
  std::string model_kind;
  std::vector<MemberReport> members;  // populated for ensembles
  EvalReport final;
};

std::string format_run_report(const RunReport& report);
nlohmann::json run_report_to_json(const RunReport& report);

struct MemberLog {
  std::string name;
  std::vector<EpochRecord> epochs;  // GBDT reports boosting rounds here
  std::size_t best_epoch = 0;
  std::size_t stopped_epoch = 0;
};

struct TrainOutcome {
  ModelBundle bundle;
  std::vector<MemberLog> logs;
  RunReport report;
  SplitIndices split;
};

// Output directory layout written by cmd_train.
inline constexpr const char* kBundleFile = "bundle.json";
inline constexpr const char* kTrainLogFile = "train_log.csv";
inline constexpr const char* kReportTextFile = "report.txt";
inline constexpr const char* kReportJsonFile = "report.json";
inline constexpr const char* kConfusionFile = "confusion.csv";
inline constexpr const char* kTestSplitFile = "test.csv";

// load -> fit/transform -> stratified split -> train member(s) -> evaluate on
// the test split -> write outputs. Outputs written before a failure are
// removed.
TrainOutcome cmd_train(const RunConfig& config);

// Scores input_csv (target column optional) and writes it back with K
// probability columns and a predicted-label column appended.
void cmd_predict(const std::filesystem::path& bundle_path,
                 const std::filesystem::path& input_csv,
                 const std::filesystem::path& output_csv);

// Evaluates on a labeled CSV; writes report files when out_dir is non-empty.
RunReport cmd_evaluate(const std::filesystem::path& bundle_path,
                       const std::filesystem::path& labeled_csv,
                       const std::filesystem::path& out_dir = {});

std::string cmd_inspect(const std::filesystem::path& bundle_path);

struct GenerateConfig {
  std::filesystem::path schema_path;  // empty: built-in ED schema
  std::size_t rows = 5000;
  std::uint64_t seed = 42;
  std::vector<double> imbalance;
  double missing_fraction = 0.02;
  std::filesystem::path out_dir = "efnet_data";
};

// Writes data.csv and schema.json into out_dir.
void cmd_generate(const GenerateConfig& config);

// Evaluation of a bundle on an already encoded dataset.
RunReport evaluate_bundle(const ModelBundle& bundle, const EncodedDataset& data);

}  // namespace efnet

#endif  // EFNET_PIPELINE_HPP_
