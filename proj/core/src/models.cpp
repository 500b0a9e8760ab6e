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
#include "efnet/models.hpp"

#include <algorithm>

#include "efnet/error.hpp"
#include "efnet/random.hpp"

namespace efnet {

void NeuralClassifier::zero_grad() {
  for (auto& p : parameters()) std::fill(p.grad.begin(), p.grad.end(), 0.0);
}

std::vector<double> snapshot_parameters(NeuralClassifier& model) {
  std::vector<double> out;
  for (const auto& p : model.parameters()) {
    out.insert(out.end(), p.value.begin(), p.value.end());
  }
  return out;
}

void restore_parameters(NeuralClassifier& model,
                        const std::vector<double>& snapshot) {
  std::size_t pos = 0;
  for (auto& p : model.parameters()) {
    if (pos + p.value.size() > snapshot.size()) {
      throw UsageError("parameter snapshot is too short");
    }
    std::copy(snapshot.begin() + static_cast<std::ptrdiff_t>(pos),
              snapshot.begin() + static_cast<std::ptrdiff_t>(pos + p.value.size()),
              p.value.begin());
    pos += p.value.size();
  }
  if (pos != snapshot.size()) throw UsageError("parameter snapshot is too long");
}

namespace {

Matrix add(const Matrix& a, const Matrix& b) {
  Matrix out = a;
  auto o = out.data();
  const auto y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += y[i];
  return out;
}

}  // namespace

EfNetModel::EfNetModel(const EfNetConfig& config)
    : embedding(config.vocab_size, config.embed_dim),
      cat_linear1(config.token_width * config.embed_dim, config.cat_hidden),
      cat_act1(config.prelu_init),
      cat_linear2(config.cat_hidden, config.fusion_width),
      cat_act2(config.prelu_init),
      num_linear(config.numeric_width, config.fusion_width),
      num_act(config.prelu_init),
      fusion_act(config.prelu_init),
      classifier(config.fusion_width, config.class_count),
      config_(config) {
  if (config.class_count < 2 || config.embed_dim == 0 ||
      config.cat_hidden == 0 || config.fusion_width == 0 ||
      config.vocab_size < 2) {
    throw UsageError("invalid EF-Net configuration");
  }
  CounterRng rng(config.seed);
  embedding.init_normal(rng, 0.01);
  cat_linear1.init_glorot(rng);
  cat_linear2.init_glorot(rng);
  num_linear.init_glorot(rng);
  classifier.init_glorot(rng);
}

EfNetConfig EfNetModel::config_for(const PreprocessState& state,
                                   std::size_t embed_dim, std::uint64_t seed) {
  EfNetConfig config;
  config.numeric_width = state.numeric_width();
  config.token_width = state.total_padded_width();
  config.vocab_size = state.embedding_vocab_size();
  config.class_count = state.class_count();
  config.embed_dim = embed_dim;
  config.seed = seed;
  return config;
}

void EfNetModel::check_inputs(const Matrix& numeric,
                              const IndexMatrix& tokens) const {
  if (numeric.cols() != config_.numeric_width ||
      tokens.cols() != config_.token_width ||
      numeric.rows() != tokens.rows()) {
    throw UsageError("EF-Net expects numeric B x " +
                     std::to_string(config_.numeric_width) + " and tokens B x " +
                     std::to_string(config_.token_width) + ", got " +
                     shape_string(numeric.rows(), numeric.cols()) + " and " +
                     shape_string(tokens.rows(), tokens.cols()));
  }
}

EfNetModel::Activations EfNetModel::run(const Matrix& numeric,
                                        const IndexMatrix& tokens) const {
  check_inputs(numeric, tokens);
  Activations a;
  a.flat = embedding.forward(tokens);
  a.cat_pre1 = cat_linear1.forward(a.flat);
  a.cat_h1 = cat_act1.forward(a.cat_pre1);
  a.cat_pre2 = cat_linear2.forward(a.cat_h1);
  a.cat_h2 = cat_act2.forward(a.cat_pre2);
  a.num_pre = num_linear.forward(numeric);
  a.num_h = num_act.forward(a.num_pre);
  a.fused_pre = add(a.cat_h2, a.num_h);
  a.fused = fusion_act.forward(a.fused_pre);
  a.logits = classifier.forward(a.fused);
  return a;
}

Matrix EfNetModel::forward(const Matrix& numeric,
                           const IndexMatrix& tokens) const {
  return run(numeric, tokens).logits;
}

void EfNetModel::backward(const Matrix& numeric, const IndexMatrix& tokens,
                          const Matrix& grad_logits) {
  backward_from(run(numeric, tokens), numeric, tokens, grad_logits);
}

void EfNetModel::backward_from(const Activations& a, const Matrix& numeric,
                               const IndexMatrix& tokens,
                               const Matrix& grad_logits) {
  if (grad_logits.rows() != a.logits.rows() ||
      grad_logits.cols() != a.logits.cols()) {
    throw UsageError("EF-Net backward: gradient shape mismatch");
  }
  const Matrix g_fused = classifier.backward(a.fused, grad_logits);
  const Matrix g_sum = fusion_act.backward(a.fused_pre, g_fused);
  // addition fans the same gradient out to both branches
  const Matrix g_num_pre = num_act.backward(a.num_pre, g_sum);
  num_linear.backward(numeric, g_num_pre, false);
  const Matrix g_cat_pre2 = cat_act2.backward(a.cat_pre2, g_sum);
  const Matrix g_cat_h1 = cat_linear2.backward(a.cat_h1, g_cat_pre2);
  const Matrix g_cat_pre1 = cat_act1.backward(a.cat_pre1, g_cat_h1);
  const Matrix g_flat = cat_linear1.backward(a.flat, g_cat_pre1);
  embedding.backward(tokens, g_flat);
}

double EfNetModel::forward_backward(const EncodedDataset& batch) {
  const Activations a = run(batch.numeric, batch.tokens);
  auto [loss, grad] = softmax_cross_entropy(a.logits, batch.labels);
  backward_from(a, batch.numeric, batch.tokens, grad);
  return loss;
}

std::vector<ParamRef> EfNetModel::parameters() {
  std::vector<ParamRef> out;
  embedding.append_params(out, "embedding");
  cat_linear1.append_params(out, "cat_linear1");
  cat_act1.append_params(out, "cat_act1");
  cat_linear2.append_params(out, "cat_linear2");
  cat_act2.append_params(out, "cat_act2");
  num_linear.append_params(out, "num_linear");
  num_act.append_params(out, "num_act");
  fusion_act.append_params(out, "fusion_act");
  classifier.append_params(out, "classifier");
  return out;
}

nlohmann::json EfNetModel::to_json() const {
  return {{"kind", kind()},
          {"config",
           {{"numeric_width", config_.numeric_width},
            {"token_width", config_.token_width},
            {"vocab_size", config_.vocab_size},
            {"class_count", config_.class_count},
            {"embed_dim", config_.embed_dim},
            {"cat_hidden", config_.cat_hidden},
            {"fusion_width", config_.fusion_width},
            {"prelu_init", config_.prelu_init},
            {"seed", config_.seed}}},
          {"embedding", matrix_to_json(embedding.weight)},
          {"cat_linear1", linear_to_json(cat_linear1)},
          {"cat_act1", cat_act1.slope},
          {"cat_linear2", linear_to_json(cat_linear2)},
          {"cat_act2", cat_act2.slope},
          {"num_linear", linear_to_json(num_linear)},
          {"num_act", num_act.slope},
          {"fusion_act", fusion_act.slope},
          {"classifier", linear_to_json(classifier)}};
}

EfNetModel EfNetModel::from_json(const nlohmann::json& doc) {
  const auto& c = doc.at("config");
  EfNetConfig config;
  config.numeric_width = c.at("numeric_width").get<std::size_t>();
  config.token_width = c.at("token_width").get<std::size_t>();
  config.vocab_size = c.at("vocab_size").get<std::size_t>();
  config.class_count = c.at("class_count").get<std::size_t>();
  config.embed_dim = c.at("embed_dim").get<std::size_t>();
  config.cat_hidden = c.at("cat_hidden").get<std::size_t>();
  config.fusion_width = c.at("fusion_width").get<std::size_t>();
  config.prelu_init = c.at("prelu_init").get<double>();
  config.seed = c.at("seed").get<std::uint64_t>();
  EfNetModel model(config);

  auto load_linear = [](LinearLayer& dst, const nlohmann::json& j) {
    LinearLayer src = linear_from_json(j);
    if (src.weight.rows() != dst.weight.rows() ||
        src.weight.cols() != dst.weight.cols()) {
      throw DataError("stored layer shape disagrees with EF-Net config");
    }
    dst = std::move(src);
  };
  Matrix emb = matrix_from_json(doc.at("embedding"));
  if (emb.rows() != model.embedding.weight.rows() ||
      emb.cols() != model.embedding.weight.cols()) {
    throw DataError("stored embedding shape disagrees with EF-Net config");
  }
  model.embedding.weight = std::move(emb);
  load_linear(model.cat_linear1, doc.at("cat_linear1"));
  load_linear(model.cat_linear2, doc.at("cat_linear2"));
  load_linear(model.num_linear, doc.at("num_linear"));
  load_linear(model.classifier, doc.at("classifier"));
  model.cat_act1.slope = doc.at("cat_act1").get<double>();
  model.cat_act2.slope = doc.at("cat_act2").get<double>();
  model.num_act.slope = doc.at("num_act").get<double>();
  model.fusion_act.slope = doc.at("fusion_act").get<double>();
  return model;
}

void FrequencyEncoder::fit(const IndexMatrix& categories) {
  frequencies_.assign(categories.cols(), {});
  if (categories.rows() == 0) return;
  const double inv = 1.0 / static_cast<double>(categories.rows());
  for (std::size_t c = 0; c < categories.cols(); ++c) {
    std::vector<std::size_t> counts;
    for (std::size_t r = 0; r < categories.rows(); ++r) {
      const auto id = static_cast<std::size_t>(std::max(0, categories(r, c)));
      if (id >= counts.size()) counts.resize(id + 1, 0);
      ++counts[id];
    }
    auto& freq = frequencies_[c];
    freq.resize(counts.size());
    for (std::size_t id = 0; id < counts.size(); ++id) {
      freq[id] = static_cast<double>(counts[id]) * inv;
    }
  }
}

Matrix FrequencyEncoder::encode(const IndexMatrix& categories) const {
  if (categories.cols() != frequencies_.size()) {
    throw UsageError("frequency encoder fitted on " +
                     std::to_string(frequencies_.size()) + " columns, given " +
                     std::to_string(categories.cols()));
  }
  Matrix out(categories.rows(), categories.cols());
  for (std::size_t r = 0; r < categories.rows(); ++r) {
    for (std::size_t c = 0; c < categories.cols(); ++c) {
      const std::int32_t id = categories(r, c);
      const auto& freq = frequencies_[c];
      // id 0 marks a value unseen at preprocessing time
      if (id > 0 && static_cast<std::size_t>(id) < freq.size()) {
        out(r, c) = freq[static_cast<std::size_t>(id)];
      }
    }
  }
  return out;
}

nlohmann::json FrequencyEncoder::to_json() const {
  return {{"frequencies", frequencies_}};
}

FrequencyEncoder FrequencyEncoder::from_json(const nlohmann::json& doc) {
  FrequencyEncoder enc;
  enc.frequencies_ =
      doc.at("frequencies").get<std::vector<std::vector<double>>>();
  return enc;
}

BaselineMlp::BaselineMlp(const BaselineConfig& config)
    : fc1(config.numeric_width + config.categorical_width, config.hidden1),
      act1(config.prelu_init),
      fc2(config.hidden1, config.hidden2),
      act2(config.prelu_init),
      fc3(config.hidden2, config.class_count),
      config_(config) {
  if (config.class_count < 2 || config.hidden1 == 0 || config.hidden2 == 0 ||
      config.numeric_width + config.categorical_width == 0) {
    throw UsageError("invalid baseline MLP configuration");
  }
  CounterRng rng(config.seed);
  fc1.init_glorot(rng);
  fc2.init_glorot(rng);
  fc3.init_glorot(rng);
  encoder_.fit(IndexMatrix(0, config.categorical_width));
}

void BaselineMlp::fit_encoder(const EncodedDataset& train) {
  if (train.categories.cols() != config_.categorical_width) {
    throw UsageError("baseline encoder expects " +
                     std::to_string(config_.categorical_width) +
                     " categorical columns");
  }
  encoder_.fit(train.categories);
}

Matrix BaselineMlp::build_input(const EncodedDataset& data) const {
  if (data.numeric.cols() != config_.numeric_width) {
    throw UsageError("baseline expects " + std::to_string(config_.numeric_width) +
                     " numerical columns, got " +
                     std::to_string(data.numeric.cols()));
  }
  const Matrix freq = encoder_.encode(data.categories);
  const std::size_t n = config_.numeric_width;
  Matrix input(data.size(), n + config_.categorical_width);
  for (std::size_t r = 0; r < data.size(); ++r) {
    auto dst = input.row(r);
    const auto num = data.numeric.row(r);
    const auto cat = freq.row(r);
    std::copy(num.begin(), num.end(), dst.begin());
    std::copy(cat.begin(), cat.end(), dst.begin() + static_cast<std::ptrdiff_t>(n));
  }
  return input;
}

Matrix BaselineMlp::forward(const Matrix& input) const {
  return fc3.forward(act2.forward(fc2.forward(act1.forward(fc1.forward(input)))));
}

double BaselineMlp::forward_backward(const EncodedDataset& batch) {
  const Matrix x = build_input(batch);
  const Matrix pre1 = fc1.forward(x);
  const Matrix h1 = act1.forward(pre1);
  const Matrix pre2 = fc2.forward(h1);
  const Matrix h2 = act2.forward(pre2);
  const Matrix out = fc3.forward(h2);
  auto [loss, grad] = softmax_cross_entropy(out, batch.labels);
  const Matrix g_h2 = fc3.backward(h2, grad);
  const Matrix g_pre2 = act2.backward(pre2, g_h2);
  const Matrix g_h1 = fc2.backward(h1, g_pre2);
  const Matrix g_pre1 = act1.backward(pre1, g_h1);
  fc1.backward(x, g_pre1, false);
  return loss;
}

std::vector<ParamRef> BaselineMlp::parameters() {
  std::vector<ParamRef> out;
  fc1.append_params(out, "fc1");
  act1.append_params(out, "act1");
  fc2.append_params(out, "fc2");
  act2.append_params(out, "act2");
  fc3.append_params(out, "fc3");
  return out;
}

nlohmann::json BaselineMlp::to_json() const {
  return {{"kind", kind()},
          {"config",
           {{"numeric_width", config_.numeric_width},
            {"categorical_width", config_.categorical_width},
            {"class_count", config_.class_count},
            {"hidden1", config_.hidden1},
            {"hidden2", config_.hidden2},
            {"prelu_init", config_.prelu_init},
            {"seed", config_.seed}}},
          {"encoder", encoder_.to_json()},
          {"fc1", linear_to_json(fc1)},
          {"act1", act1.slope},
          {"fc2", linear_to_json(fc2)},
          {"act2", act2.slope},
          {"fc3", linear_to_json(fc3)}};
}

BaselineMlp BaselineMlp::from_json(const nlohmann::json& doc) {
  const auto& c = doc.at("config");
  BaselineConfig config;
  config.numeric_width = c.at("numeric_width").get<std::size_t>();
  config.categorical_width = c.at("categorical_width").get<std::size_t>();
  config.class_count = c.at("class_count").get<std::size_t>();
  config.hidden1 = c.at("hidden1").get<std::size_t>();
  config.hidden2 = c.at("hidden2").get<std::size_t>();
  config.prelu_init = c.at("prelu_init").get<double>();
  config.seed = c.at("seed").get<std::uint64_t>();
  BaselineMlp model(config);
  model.encoder_ = FrequencyEncoder::from_json(doc.at("encoder"));
  auto load_linear = [](LinearLayer& dst, const nlohmann::json& j) {
    LinearLayer src = linear_from_json(j);
    if (src.weight.rows() != dst.weight.rows() ||
        src.weight.cols() != dst.weight.cols()) {
      throw DataError("stored layer shape disagrees with baseline config");
    }
    dst = std::move(src);
  };
  load_linear(model.fc1, doc.at("fc1"));
  load_linear(model.fc2, doc.at("fc2"));
  load_linear(model.fc3, doc.at("fc3"));
  model.act1.slope = doc.at("act1").get<double>();
  model.act2.slope = doc.at("act2").get<double>();
  return model;
}

}  // namespace efnet
