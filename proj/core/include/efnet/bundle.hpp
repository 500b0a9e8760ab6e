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
#ifndef EFNET_BUNDLE_HPP_
#define EFNET_BUNDLE_HPP_

#include <array>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "efnet/classifier.hpp"
#include "efnet/preprocess.hpp"

namespace efnet {

inline constexpr int kBundleVersion = 1;
// Bundle versions this build can read.
inline constexpr std::array<int, 1> kReadableBundleVersions = {1};

struct BundleMember {
  std::shared_ptr<const ProbabilisticClassifier> model;
  // Fingerprint of the preprocessing state the member was trained against.
  std::string preprocess_fingerprint;
};

// Everything needed to score raw rows: the fitted preprocessing, one or more
// trained members, and (for ensembles) the vote weights.
struct ModelBundle {
  PreprocessState preprocess;
  std::string model_kind;  // efnet | baseline | gbdt | ensemble
  std::vector<BundleMember> members;
  std::vector<double> weights;  // ensemble only; empty = uniform
  nlohmann::json run_config = nlohmann::json::object();

  // The single member, or a soft-voting ensemble over all members.
  std::shared_ptr<const ProbabilisticClassifier> predictor() const;
  Matrix predict_proba(const EncodedDataset& data) const {
    return predictor()->predict_proba(data);
  }
};

// Doubles are written in shortest round-trip decimal form, so a saved bundle
// reloads bit-exactly.
nlohmann::json bundle_to_json(const ModelBundle& bundle);
ModelBundle bundle_from_json(const nlohmann::json& doc);

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_bundle(const std::filesystem::path& path);

std::shared_ptr<const ProbabilisticClassifier> classifier_from_json(
    const nlohmann::json& doc);

}  // namespace efnet

#endif  // EFNET_BUNDLE_HPP_
