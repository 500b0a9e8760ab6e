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
// efnet command-line tool.
//
// Settings are resolved in three layers: built-in defaults, then the --config
// JSON document, then individual flags.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "efnet/error.hpp"
#include "efnet/pipeline.hpp"

namespace {

struct DataFlags {
  std::string schema;
  std::optional<std::size_t> rows;
  std::vector<double> imbalance;
  std::optional<double> missing_fraction;
};

void add_data_flags(CLI::App* cmd, DataFlags& flags) {
  cmd->add_option("--schema", flags.schema, "Schema JSON file (default: built-in ED schema)");
  cmd->add_option("--rows", flags.rows, "Synthetic row count");
  cmd->add_option("--imbalance", flags.imbalance,
                  "Synthetic class weights, one per label, comma separated")
      ->delimiter(',');
  cmd->add_option("--missing-fraction", flags.missing_fraction,
                  "Synthetic missing-cell probability");
}

struct TrainFlags {
  std::string config;
  DataFlags data;
  std::string data_path;
  std::optional<std::string> model;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> members;
  std::vector<double> weights;
  bool parallel = false;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> patience;
  std::optional<std::size_t> batch_size;
  std::optional<double> lr;
  std::optional<std::size_t> rounds;
  std::optional<std::string> gbdt_view;
};

efnet::RunConfig resolve(const TrainFlags& f) {
  efnet::RunConfig c;
  if (!f.config.empty()) c = efnet::read_run_config(f.config, c);
  if (!f.data.schema.empty()) c.schema_path = f.data.schema;
  if (!f.data_path.empty()) c.data_path = f.data_path;
  if (f.data.rows || !f.data.imbalance.empty() || f.data.missing_fraction) {
    if (!f.data_path.empty()) {
      throw efnet::UsageError(
          "--data cannot be combined with synthetic generation flags");
    }
    c.data_path.clear();
  }
  if (f.data.rows) c.synthetic_rows = *f.data.rows;
  if (!f.data.imbalance.empty()) c.imbalance = f.data.imbalance;
  if (f.data.missing_fraction) c.missing_fraction = *f.data.missing_fraction;
  if (f.model) c.model = efnet::model_kind_from_string(*f.model);
  if (f.seed) c.seed = *f.seed;
  if (!f.out.empty()) c.out_dir = f.out;
  if (!f.members.empty()) {
    c.ensemble_members.clear();
    for (const auto& m : f.members) {
      c.ensemble_members.push_back(efnet::model_kind_from_string(m));
    }
  }
  if (!f.weights.empty()) c.ensemble_weights = f.weights;
  if (f.parallel) c.parallel_members = true;
  if (f.epochs) c.train.max_epochs = *f.epochs;
  if (f.patience) c.train.patience = *f.patience;
  if (f.batch_size) c.train.batch_size = *f.batch_size;
  if (f.lr) c.train.learning_rate = *f.lr;
  if (f.rounds) c.gbdt.rounds = *f.rounds;
  if (f.gbdt_view) c.gbdt_view = efnet::gbdt_feature_view_from_string(*f.gbdt_view);
  return c;
}

int fail(std::string_view code, const std::string& message, int status) {
  std::string line = message;
  for (char& ch : line) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  std::cerr << "efnet: " << code << ": " << line << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"efnet: mixed-type tabular classification toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "efnet 1.0.0");

  // generate
  efnet::GenerateConfig gen;
  DataFlags gen_data;
  std::optional<std::uint64_t> gen_seed;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset and its schema");
  add_data_flags(generate, gen_data);
  generate->add_option("--seed", gen_seed, "Generator seed");
  generate->add_option("--out", gen_out, "Output directory (default efnet_data)");

  // train
  TrainFlags tf;
  auto* train = app.add_subcommand("train", "Train a model and evaluate it on the held-out test split");
  train->add_option("--config", tf.config, "JSON run configuration");
  add_data_flags(train, tf.data);
  train->add_option("--data", tf.data_path, "Training CSV (default: synthetic data)");
  train->add_option("--model", tf.model, "baseline | efnet | gbdt | ensemble");
  train->add_option("--seed", tf.seed, "Run seed");
  train->add_option("--out", tf.out, "Output directory (default efnet_out)");
  train->add_option("--members", tf.members, "Ensemble members, comma separated")->delimiter(',');
  train->add_option("--weights", tf.weights, "Ensemble vote weights, comma separated")->delimiter(',');
  train->add_flag("--parallel-members", tf.parallel, "Train ensemble members concurrently");
  train->add_option("--epochs", tf.epochs, "Maximum training epochs");
  train->add_option("--patience", tf.patience, "Early-stopping patience");
  train->add_option("--batch-size", tf.batch_size, "Minibatch size");
  train->add_option("--lr", tf.lr, "Adam learning rate");
  train->add_option("--rounds", tf.rounds, "GBDT boosting rounds");
  train->add_option("--gbdt-features", tf.gbdt_view, "numeric+tokens | numeric+categories");

  // evaluate
  std::string eval_bundle, eval_data, eval_out;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a bundle on a labeled CSV");
  evaluate->add_option("--bundle", eval_bundle, "Bundle file")->required();
  evaluate->add_option("--data", eval_data, "Labeled CSV")->required();
  evaluate->add_option("--out", eval_out, "Directory for report files");

  // predict
  std::string pred_bundle, pred_data, pred_out;
  auto* predict = app.add_subcommand("predict", "Append class probabilities and a predicted label");
  predict->add_option("--bundle", pred_bundle, "Bundle file")->required();
  predict->add_option("--data", pred_data, "Input CSV")->required();
  predict->add_option("--out", pred_out, "Output CSV")->required();

  // inspect
  std::string inspect_bundle;
  auto* inspect = app.add_subcommand("inspect", "Print bundle metadata");
  inspect->add_option("--bundle", inspect_bundle, "Bundle file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("E_USAGE", e.what(), 2);
  }

  try {
    if (*generate) {
      if (!gen_data.schema.empty()) gen.schema_path = gen_data.schema;
      if (gen_data.rows) gen.rows = *gen_data.rows;
      gen.imbalance = gen_data.imbalance;
      if (gen_data.missing_fraction) gen.missing_fraction = *gen_data.missing_fraction;
      if (gen_seed) gen.seed = *gen_seed;
      if (!gen_out.empty()) gen.out_dir = gen_out;
      efnet::cmd_generate(gen);
      std::cout << "wrote " << (gen.out_dir / "data.csv").string() << " and "
                << (gen.out_dir / "schema.json").string() << '\n';
    } else if (*train) {
      const efnet::RunConfig config = resolve(tf);
      const auto outcome = efnet::cmd_train(config);
      std::cout << efnet::format_run_report(outcome.report)
                << "outputs written to " << config.out_dir.string() << '\n';
    } else if (*evaluate) {
      const auto report = efnet::cmd_evaluate(eval_bundle, eval_data, eval_out);
      std::cout << efnet::format_run_report(report);
    } else if (*predict) {
      efnet::cmd_predict(pred_bundle, pred_data, pred_out);
    } else if (*inspect) {
      std::cout << efnet::cmd_inspect(inspect_bundle);
    }
  } catch (const efnet::Error& e) {
    return fail(efnet::error_code(e.kind()), e.what(), efnet::exit_code(e.kind()));
  } catch (const std::exception& e) {
    return fail("E_INTERNAL", e.what(), 1);
  }
  return 0;
}
