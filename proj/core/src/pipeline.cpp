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
#include "efnet/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "efnet/csv.hpp"
#include "efnet/ensemble.hpp"
#include "efnet/error.hpp"
#include "efnet/models.hpp"
#include "efnet/nn.hpp"
#include "efnet/random.hpp"
#include "efnet/synthetic.hpp"

namespace efnet {
namespace {

constexpr std::uint64_t kSplitStream = 0x5317;
constexpr std::uint64_t kMemberStream = 0x3e3b;

// Runs one pipeline stage, prefixing any toolkit error with the stage name.
template <typename F>
auto stage(const std::string& name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    const std::string message = name + ": " + e.what();
    switch (e.kind()) {
      case ErrorKind::kUsage:
        throw UsageError(message);
      case ErrorKind::kNumeric:
        throw NumericError(message);
      case ErrorKind::kData:
        break;
    }
    throw DataError(message);
  }
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

TableSchema load_schema(const std::filesystem::path& path) {
  return path.empty() ? default_ed_schema() : read_schema_file(path);
}

void check_keys(const nlohmann::json& doc, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!doc.is_object()) throw UsageError(where + " must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.count(key)) {
      throw UsageError("unknown configuration key '" + where + key + "'");
    }
  }
}

template <typename T>
void read_if(const nlohmann::json& doc, const char* key, T& out) {
  if (doc.contains(key)) out = doc.at(key).get<T>();
}

struct TrainedMember {
  std::shared_ptr<const ProbabilisticClassifier> model;
  MemberLog log;
};

TrainedMember train_member(ModelKind kind, const RunConfig& config,
                           const PreprocessState& state,
                           const DatasetSplits& splits, std::uint64_t seed) {
  TrainedMember out;
  out.log.name = to_string(kind);
  TrainConfig train_config = config.train;
  train_config.seed = derive_seed(seed, 1);

  auto record = [&out](const TrainLog& log) {
    out.log.epochs = log.epochs;
    out.log.best_epoch = log.best_epoch;
    out.log.stopped_epoch = log.stopped_epoch;
  };

  switch (kind) {
    case ModelKind::kEfNet: {
      EfNetConfig net = EfNetModel::config_for(state, config.embed_dim, seed);
      net.prelu_init = config.prelu_init;
      auto model = std::make_shared<EfNetModel>(net);
      record(train(*model, splits.train, splits.val, train_config));
      out.model = std::move(model);
      break;
    }
    case ModelKind::kBaseline: {
      BaselineConfig net;
      net.numeric_width = state.numeric_width();
      net.categorical_width = state.categorical_width();
      net.class_count = state.class_count();
      net.hidden1 = config.baseline_hidden1;
      net.hidden2 = config.baseline_hidden2;
      net.prelu_init = config.prelu_init;
      net.seed = seed;
      auto model = std::make_shared<BaselineMlp>(net);
      model->fit_encoder(splits.train);
      record(train(*model, splits.train, splits.val, train_config));
      out.model = std::move(model);
      break;
    }
    case ModelKind::kGbdt: {
      const Matrix x_train = gbdt_features(splits.train, config.gbdt_view);
      const Matrix x_val = gbdt_features(splits.val, config.gbdt_view);
      GbdtTrainLog log;
      GbdtModel model =
          gbdt_train(x_train, splits.train.labels, state.class_count(),
                     config.gbdt, &log, {&x_val, &splits.val.labels});
      for (std::size_t r = 0; r < log.train_logloss.size(); ++r) {
        EpochRecord rec;
        rec.epoch = r + 1;
        rec.train_loss = log.train_logloss[r];
        if (r < log.val_logloss.size()) {
          rec.val_loss = log.val_logloss[r];
          rec.val_accuracy = log.val_accuracy[r];
        }
        out.log.epochs.push_back(rec);
      }
      out.log.best_epoch = out.log.stopped_epoch = log.train_logloss.size();
      out.model =
          std::make_shared<GbdtClassifier>(std::move(model), config.gbdt_view);
      break;
    }
    case ModelKind::kEnsemble:
      throw UsageError("ensembles cannot be nested");
  }
  return out;
}

// Tracks files written into the output directory so a failure can remove
// them.
class OutputWriter {
 public:
  explicit OutputWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) {
      throw DataError("cannot create output directory '" + dir_.string() +
                      "'");
    }
  }
  OutputWriter(const OutputWriter&) = delete;
  OutputWriter& operator=(const OutputWriter&) = delete;
  ~OutputWriter() {
    if (committed_) return;
    for (const auto& f : written_) {
      std::error_code ec;
      std::filesystem::remove(f, ec);
    }
  }

  std::filesystem::path path(const char* name) {
    auto p = dir_ / name;
    written_.push_back(p);
    return p;
  }

  void text(const char* name, const std::string& content) {
    std::ofstream out(path(name), std::ios::binary);
    out << content;
    if (!out) {
      throw DataError("failed writing '" + (dir_ / name).string() + "'");
    }
  }

  void commit() { committed_ = true; }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
  bool committed_ = false;
};

void write_report_files(OutputWriter& out, const RunReport& report) {
  out.text(kReportTextFile, format_run_report(report));
  out.text(kReportJsonFile, run_report_to_json(report).dump(2) + "\n");
  out.text(kConfusionFile,
           confusion_to_csv(report.final.confusion, report.class_labels));
}

std::string train_log_csv(const std::vector<MemberLog>& logs) {
  std::ostringstream out;
  write_csv_record(out, {"member", "epoch", "train_loss", "val_loss",
                         "val_accuracy", "is_best"});
  for (const auto& log : logs) {
    for (const auto& e : log.epochs) {
      write_csv_record(out, {log.name, std::to_string(e.epoch),
                             number(e.train_loss), number(e.val_loss),
                             number(e.val_accuracy),
                             e.epoch == log.best_epoch ? "1" : "0"});
    }
  }
  return out.str();
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kBaseline:
      return "baseline";
    case ModelKind::kEfNet:
      return "efnet";
    case ModelKind::kGbdt:
      return "gbdt";
    case ModelKind::kEnsemble:
      return "ensemble";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& text) {
  if (text == "baseline") return ModelKind::kBaseline;
  if (text == "efnet") return ModelKind::kEfNet;
  if (text == "gbdt") return ModelKind::kGbdt;
  if (text == "ensemble") return ModelKind::kEnsemble;
  throw UsageError("unknown model kind '" + text +
                   "' (expected baseline, efnet, gbdt or ensemble)");
}

void RunConfig::validate() const {
  train.validate();
  gbdt.validate();
  if (data_path.empty() && synthetic_rows == 0) {
    throw UsageError("synthetic row count must be positive");
  }
  if (embed_dim == 0 || baseline_hidden1 == 0 || baseline_hidden2 == 0) {
    throw UsageError("layer widths must be positive");
  }
  if (model == ModelKind::kEnsemble) {
    if (ensemble_members.empty()) {
      throw UsageError("ensemble needs at least one member");
    }
    for (auto m : ensemble_members) {
      if (m == ModelKind::kEnsemble) throw UsageError("ensembles cannot be nested");
    }
    if (!ensemble_weights.empty() &&
        ensemble_weights.size() != ensemble_members.size()) {
      throw UsageError("ensemble weight count does not match member count");
    }
  }
  if (out_dir.empty()) throw UsageError("output directory must be set");
}

nlohmann::json run_config_to_json(const RunConfig& c) {
  nlohmann::json doc = {
      {"schema", c.schema_path.string()},
      {"model", to_string(c.model)},
      {"seed", c.seed},
      {"out", c.out_dir.string()},
      {"train",
       {{"learning_rate", c.train.learning_rate},
        {"batch_size", c.train.batch_size},
        {"max_epochs", c.train.max_epochs},
        {"patience", c.train.patience},
        {"min_delta", c.train.min_delta}}},
      {"gbdt",
       {{"rounds", c.gbdt.rounds},
        {"max_depth", c.gbdt.max_depth},
        {"max_leaves", c.gbdt.max_leaves},
        {"shrinkage", c.gbdt.shrinkage},
        {"l2_reg", c.gbdt.l2_reg},
        {"min_child_hessian", c.gbdt.min_child_hessian},
        {"base_score", c.gbdt.base_score},
        {"feature_view", to_string(c.gbdt_view)}}},
      {"efnet", {{"embed_dim", c.embed_dim}, {"prelu_init", c.prelu_init}}},
      {"baseline",
       {{"hidden1", c.baseline_hidden1}, {"hidden2", c.baseline_hidden2}}},
      {"split",
       {{"train", c.split.train}, {"val", c.split.val}, {"test", c.split.test}}},
  };
  std::vector<std::string> members;
  for (auto m : c.ensemble_members) members.push_back(to_string(m));
  doc["ensemble"] = {{"members", members},
                     {"weights", c.ensemble_weights},
                     {"parallel", c.parallel_members}};
  if (!c.data_path.empty()) {
    doc["data"] = c.data_path.string();
  } else {
    doc["synthetic"] = {{"rows", c.synthetic_rows},
                        {"imbalance", c.imbalance},
                        {"missing_fraction", c.missing_fraction},
                        {"seed", c.synthetic_seed.value_or(c.seed)}};
  }
  return doc;
}

RunConfig run_config_from_json(const nlohmann::json& doc, RunConfig c) {
  try {
    check_keys(doc,
               {"schema", "data", "synthetic", "model", "ensemble", "train",
                "gbdt", "efnet", "baseline", "split", "seed", "out"},
               "");
    if (doc.contains("data") && doc.contains("synthetic")) {
      throw UsageError("configure exactly one data source: 'data' or 'synthetic'");
    }
    if (doc.contains("schema")) c.schema_path = doc.at("schema").get<std::string>();
    if (doc.contains("data")) c.data_path = doc.at("data").get<std::string>();
    if (doc.contains("synthetic")) {
      const auto& s = doc.at("synthetic");
      check_keys(s, {"rows", "imbalance", "missing_fraction", "seed"},
                 "synthetic.");
      c.data_path.clear();
      read_if(s, "rows", c.synthetic_rows);
      read_if(s, "imbalance", c.imbalance);
      read_if(s, "missing_fraction", c.missing_fraction);
      if (s.contains("seed")) c.synthetic_seed = s.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("model")) {
      c.model = model_kind_from_string(doc.at("model").get<std::string>());
    }
    if (doc.contains("ensemble")) {
      const auto& e = doc.at("ensemble");
      check_keys(e, {"members", "weights", "parallel"}, "ensemble.");
      if (e.contains("members")) {
        c.ensemble_members.clear();
        for (const auto& m : e.at("members")) {
          c.ensemble_members.push_back(
              model_kind_from_string(m.get<std::string>()));
        }
      }
      read_if(e, "weights", c.ensemble_weights);
      read_if(e, "parallel", c.parallel_members);
    }
    if (doc.contains("train")) {
      const auto& t = doc.at("train");
      check_keys(t, {"learning_rate", "batch_size", "max_epochs", "patience",
                     "min_delta"},
                 "train.");
      read_if(t, "learning_rate", c.train.learning_rate);
      read_if(t, "batch_size", c.train.batch_size);
      read_if(t, "max_epochs", c.train.max_epochs);
      read_if(t, "patience", c.train.patience);
      read_if(t, "min_delta", c.train.min_delta);
    }
    if (doc.contains("gbdt")) {
      const auto& g = doc.at("gbdt");
      check_keys(g, {"rounds", "max_depth", "max_leaves", "shrinkage", "l2_reg",
                     "min_child_hessian", "base_score", "feature_view"},
                 "gbdt.");
      read_if(g, "rounds", c.gbdt.rounds);
      read_if(g, "max_depth", c.gbdt.max_depth);
      read_if(g, "max_leaves", c.gbdt.max_leaves);
      read_if(g, "shrinkage", c.gbdt.shrinkage);
      read_if(g, "l2_reg", c.gbdt.l2_reg);
      read_if(g, "min_child_hessian", c.gbdt.min_child_hessian);
      read_if(g, "base_score", c.gbdt.base_score);
      if (g.contains("feature_view")) {
        c.gbdt_view = gbdt_feature_view_from_string(
            g.at("feature_view").get<std::string>());
      }
    }
    if (doc.contains("efnet")) {
      const auto& e = doc.at("efnet");
      check_keys(e, {"embed_dim", "prelu_init"}, "efnet.");
      read_if(e, "embed_dim", c.embed_dim);
      read_if(e, "prelu_init", c.prelu_init);
    }
    if (doc.contains("baseline")) {
      const auto& b = doc.at("baseline");
      check_keys(b, {"hidden1", "hidden2"}, "baseline.");
      read_if(b, "hidden1", c.baseline_hidden1);
      read_if(b, "hidden2", c.baseline_hidden2);
    }
    if (doc.contains("split")) {
      const auto& s = doc.at("split");
      check_keys(s, {"train", "val", "test"}, "split.");
      read_if(s, "train", c.split.train);
      read_if(s, "val", c.split.val);
      read_if(s, "test", c.split.test);
    }
    read_if(doc, "seed", c.seed);
    if (doc.contains("out")) c.out_dir = doc.at("out").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("invalid configuration: ") + e.what());
  }
  return c;
}

RunConfig read_run_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file '" + path.string() + "' is not valid JSON: " +
                     e.what());
  }
  return run_config_from_json(doc, std::move(base));
}

std::string format_run_report(const RunReport& report) {
  std::ostringstream out;
  for (const auto& m : report.members) {
    out << "== member " << m.name << " ==\n"
        << format_report(m.report, report.class_labels) << '\n';
  }
  out << "== " << report.model_kind << " ==\n"
      << format_report(report.final, report.class_labels);
  return out.str();
}

nlohmann::json run_report_to_json(const RunReport& report) {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& m : report.members) {
    members.push_back({{"name", m.name},
                       {"report", report_to_json(m.report, report.class_labels)}});
  }
  return {{"model_kind", report.model_kind},
          {"class_labels", report.class_labels},
          {"members", std::move(members)},
          {"final", report_to_json(report.final, report.class_labels)}};
}

RunReport evaluate_bundle(const ModelBundle& bundle,
                          const EncodedDataset& data) {
  if (data.labels.size() != data.size() || data.size() == 0) {
    throw DataError("evaluation needs labeled, non-empty input");
  }
  RunReport report;
  report.class_labels = bundle.preprocess.schema().class_labels();
  report.model_kind = bundle.model_kind;
  if (bundle.model_kind == "ensemble") {
    std::map<std::string, int> seen;
    for (const auto& m : bundle.members) {
      std::string name = m.model->kind();
      if (++seen[name] > 1) name += "_" + std::to_string(seen[name]);
      report.members.push_back(
          {name, evaluate(m.model->predict_proba(data), data.labels)});
    }
  }
  report.final = evaluate(bundle.predict_proba(data), data.labels);
  return report;
}

TrainOutcome cmd_train(const RunConfig& config) {
  stage("config", [&] { config.validate(); });
  const TableSchema schema =
      stage("schema", [&] { return load_schema(config.schema_path); });
  const DataTable table = stage("ingest", [&] {
    if (!config.data_path.empty()) return load_csv(config.data_path, schema);
    SyntheticOptions options;
    options.rows = config.synthetic_rows;
    options.seed = config.synthetic_seed.value_or(config.seed);
    options.class_weights = config.imbalance;
    options.missing_fraction = config.missing_fraction;
    return generate_synthetic(schema, options);
  });
  const PreprocessState state =
      stage("preprocess", [&] { return fit_preprocess(table); });
  const EncodedDataset encoded =
      stage("preprocess", [&] { return transform(table, state); });
  const DatasetSplits splits = stage("split", [&] {
    return stratified_split(encoded, schema.class_count(), config.split,
                            derive_seed(config.seed, kSplitStream));
  });

  std::vector<ModelKind> kinds = {config.model};
  if (config.model == ModelKind::kEnsemble) kinds = config.ensemble_members;

  std::vector<TrainedMember> trained(kinds.size());
  auto train_one = [&](std::size_t i) {
    return stage("train " + to_string(kinds[i]), [&] {
      return train_member(kinds[i], config, state, splits,
                          derive_seed(config.seed, kMemberStream + i));
    });
  };
  if (config.parallel_members && kinds.size() > 1) {
    std::vector<std::future<TrainedMember>> futures;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      futures.push_back(std::async(std::launch::async, train_one, i));
    }
    for (std::size_t i = 0; i < kinds.size(); ++i) trained[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < kinds.size(); ++i) trained[i] = train_one(i);
  }

  TrainOutcome outcome{
      ModelBundle{state, to_string(config.model), {}, {},
                  run_config_to_json(config)},
      {},
      {},
      splits.indices};
  const std::string fingerprint = state.fingerprint();
  for (auto& t : trained) {
    outcome.bundle.members.push_back({t.model, fingerprint});
    outcome.logs.push_back(std::move(t.log));
  }
  if (config.model == ModelKind::kEnsemble) {
    outcome.bundle.weights = config.ensemble_weights;
  }

  outcome.report = stage("evaluate", [&] {
    return evaluate_bundle(outcome.bundle, splits.test);
  });

  stage("output", [&] {
    OutputWriter out(config.out_dir);
    save_bundle(outcome.bundle, out.path(kBundleFile));
    out.text(kTrainLogFile, train_log_csv(outcome.logs));
    write_report_files(out, outcome.report);
    write_csv(table.select_rows(splits.indices.test), out.path(kTestSplitFile));
    out.commit();
  });
  return outcome;
}

void cmd_predict(const std::filesystem::path& bundle_path,
                 const std::filesystem::path& input_csv,
                 const std::filesystem::path& output_csv) {
  const ModelBundle bundle =
      stage("bundle", [&] { return load_bundle(bundle_path); });
  const TableSchema& schema = bundle.preprocess.schema();
  const DataTable table = stage("ingest", [&] {
    CsvLoadOptions options;
    options.require_target = false;
    return load_csv(input_csv, schema, options);
  });
  const Matrix probs = stage("predict", [&] {
    EncodedDataset data = transform(table, bundle.preprocess);
    return bundle.predict_proba(data);
  });

  const std::size_t target = schema.target_index();
  const bool emit_target =
      table.row_count() == 0 || table.missing_count(target) < table.row_count();
  CsvRecord header;
  for (std::size_t c = 0; c < schema.column_count(); ++c) {
    if (c != target || emit_target) header.push_back(schema.columns()[c].name);
  }
  for (const auto& label : schema.class_labels()) {
    header.push_back("prob_" + label);
  }
  header.push_back("predicted_label");

  stage("output", [&] {
    if (output_csv.has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(output_csv.parent_path(), ec);
    }
    std::ofstream out(output_csv, std::ios::binary);
    if (!out) {
      throw DataError("cannot write '" + output_csv.string() + "'");
    }
    write_csv_record(out, header);
    const auto predicted = argmax_rows(probs);
    for (std::size_t r = 0; r < table.row_count(); ++r) {
      CsvRecord rec;
      for (std::size_t c = 0; c < schema.column_count(); ++c) {
        if (c == target && !emit_target) continue;
        rec.push_back(table.cell(r, c).value_or(""));
      }
      for (std::size_t k = 0; k < probs.cols(); ++k) {
        rec.push_back(number(probs(r, k)));
      }
      rec.push_back(schema.class_labels()[predicted[r]]);
      write_csv_record(out, rec);
    }
    if (!out) throw DataError("failed writing '" + output_csv.string() + "'");
  });
}

RunReport cmd_evaluate(const std::filesystem::path& bundle_path,
                       const std::filesystem::path& labeled_csv,
                       const std::filesystem::path& out_dir) {
  const ModelBundle bundle =
      stage("bundle", [&] { return load_bundle(bundle_path); });
  const DataTable table = stage("ingest", [&] {
    DataTable t = load_csv(labeled_csv, bundle.preprocess.schema());
    if (!t.has_all_targets()) {
      throw DataError("every row needs a target label for evaluation");
    }
    return t;
  });
  const RunReport report = stage("evaluate", [&] {
    return evaluate_bundle(bundle, transform(table, bundle.preprocess));
  });
  if (!out_dir.empty()) {
    stage("output", [&] {
      OutputWriter out(out_dir);
      write_report_files(out, report);
      out.commit();
    });
  }
  return report;
}

std::string cmd_inspect(const std::filesystem::path& bundle_path) {
  const ModelBundle bundle =
      stage("bundle", [&] { return load_bundle(bundle_path); });
  const PreprocessState& state = bundle.preprocess;
  const TableSchema& schema = state.schema();
  std::ostringstream out;
  out << "model: " << bundle.model_kind << '\n'
      << "bundle version: " << kBundleVersion << '\n'
      << "preprocess fingerprint: " << state.fingerprint() << '\n'
      << "target: " << schema.target() << " (" << schema.class_count()
      << " classes)\n";
  for (std::size_t k = 0; k < schema.class_count(); ++k) {
    out << "  " << k << ' ' << schema.class_labels()[k] << '\n';
  }
  out << "numerical columns: " << state.numeric_width() << '\n'
      << "categorical columns: " << state.categorical_width() << '\n'
      << "padded token width: " << state.total_padded_width() << '\n'
      << "embedding vocabulary: " << state.embedding_vocab_size() << '\n';
  for (std::size_t i = 0; i < bundle.members.size(); ++i) {
    out << "member " << i << ": " << bundle.members[i].model->kind() << '\n';
  }
  if (!bundle.weights.empty()) {
    out << "weights:";
    for (double w : bundle.weights) out << ' ' << number(w);
    out << '\n';
  }
  if (bundle.run_config.contains("seed")) {
    out << "seed: " << bundle.run_config.at("seed").dump() << '\n';
  }
  return out.str();
}

void cmd_generate(const GenerateConfig& config) {
  const TableSchema schema =
      stage("schema", [&] { return load_schema(config.schema_path); });
  const DataTable table = stage("generate", [&] {
    SyntheticOptions options;
    options.rows = config.rows;
    options.seed = config.seed;
    options.class_weights = config.imbalance;
    options.missing_fraction = config.missing_fraction;
    return generate_synthetic(schema, options);
  });
  stage("output", [&] {
    OutputWriter out(config.out_dir);
    write_csv(table, out.path("data.csv"));
    write_schema_file(schema, out.path("schema.json"));
    out.commit();
  });
}

}  // namespace efnet
