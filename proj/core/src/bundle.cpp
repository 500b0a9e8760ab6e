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
#include "efnet/bundle.hpp"

#include <algorithm>
#include <fstream>

#include "efnet/ensemble.hpp"
#include "efnet/error.hpp"
#include "efnet/gbdt.hpp"
#include "efnet/models.hpp"

namespace efnet {

std::shared_ptr<const ProbabilisticClassifier> ModelBundle::predictor() const {
  if (members.empty()) throw DataError("bundle has no models");
  if (members.size() == 1 && model_kind != "ensemble") {
    return members.front().model;
  }
  std::vector<std::shared_ptr<const ProbabilisticClassifier>> models;
  for (const auto& m : members) models.push_back(m.model);
  return std::make_shared<EnsembleModel>(std::move(models), weights);
}

std::shared_ptr<const ProbabilisticClassifier> classifier_from_json(
    const nlohmann::json& doc) {
  const auto kind = doc.at("kind").get<std::string>();
  if (kind == "efnet") {
    return std::make_shared<EfNetModel>(EfNetModel::from_json(doc));
  }
  if (kind == "baseline") {
    return std::make_shared<BaselineMlp>(BaselineMlp::from_json(doc));
  }
  if (kind == "gbdt") {
    return std::make_shared<GbdtClassifier>(GbdtClassifier::from_json(doc));
  }
  throw DataError("unknown model kind '" + kind + "' in bundle");
}

nlohmann::json bundle_to_json(const ModelBundle& bundle) {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& m : bundle.members) {
    members.push_back({{"preprocess_fingerprint", m.preprocess_fingerprint},
                       {"model", m.model->to_json()}});
  }
  return {{"format", "efnet-bundle"},
          {"version", kBundleVersion},
          {"model_kind", bundle.model_kind},
          {"preprocess_fingerprint", bundle.preprocess.fingerprint()},
          {"preprocess", state_to_json(bundle.preprocess)},
          {"weights", bundle.weights},
          {"members", std::move(members)},
          {"run_config", bundle.run_config}};
}

ModelBundle bundle_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format").get<std::string>() != "efnet-bundle") {
      throw DataError("not an efnet model bundle");
    }
    const int version = doc.at("version").get<int>();
    if (std::find(kReadableBundleVersions.begin(),
                  kReadableBundleVersions.end(),
                  version) == kReadableBundleVersions.end()) {
      throw DataError("bundle version " + std::to_string(version) +
                      " is not supported by this build");
    }
    ModelBundle bundle{state_from_json(doc.at("preprocess")),
                       doc.at("model_kind").get<std::string>(),
                       {},
                       doc.at("weights").get<std::vector<double>>(),
                       doc.value("run_config", nlohmann::json::object())};
    const std::string fingerprint = bundle.preprocess.fingerprint();
    if (doc.at("preprocess_fingerprint").get<std::string>() != fingerprint) {
      throw DataError("bundle preprocessing fingerprint mismatch");
    }
    for (const auto& m : doc.at("members")) {
      BundleMember member{classifier_from_json(m.at("model")),
                          m.at("preprocess_fingerprint").get<std::string>()};
      if (member.preprocess_fingerprint != fingerprint) {
        throw DataError("member '" + member.model->kind() +
                        "' was trained against different preprocessing");
      }
      if (member.model->class_count() != bundle.preprocess.class_count()) {
        throw DataError("member '" + member.model->kind() +
                        "' disagrees with the schema class count");
      }
      bundle.members.push_back(std::move(member));
    }
    if (bundle.members.empty()) throw DataError("bundle has no models");
    return bundle;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed bundle: ") + e.what());
  }
}

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write bundle '" + path.string() + "'");
  out << bundle_to_json(bundle).dump(1) << '\n';
  if (!out) throw DataError("failed writing bundle '" + path.string() + "'");
}

ModelBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open bundle '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bundle '" + path.string() + "' is not valid JSON: " +
                    e.what());
  }
  return bundle_from_json(doc);
}

}  // namespace efnet
