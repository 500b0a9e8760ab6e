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
#include "efnet/adam.hpp"

#include <cmath>

#include "efnet/error.hpp"

namespace efnet {

AdamOptimizer::AdamOptimizer(AdamConfig config) : config_(config) {
  if (!(config_.learning_rate > 0.0) || config_.beta1 < 0.0 ||
      config_.beta1 >= 1.0 || config_.beta2 < 0.0 || config_.beta2 >= 1.0 ||
      !(config_.epsilon > 0.0)) {
    throw UsageError("invalid Adam hyperparameters");
  }
}

void AdamOptimizer::step(std::span<const ParamRef> params) {
  if (step_count_ == 0) {
    first_moment_.clear();
    second_moment_.clear();
    for (const auto& p : params) {
      first_moment_.emplace_back(p.value.size(), 0.0);
      second_moment_.emplace_back(p.value.size(), 0.0);
    }
  }
  if (params.size() != first_moment_.size()) {
    throw UsageError("Adam step: parameter count changed");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].value.size() != first_moment_[i].size() ||
        params[i].grad.size() != params[i].value.size()) {
      throw UsageError("Adam step: shape mismatch for " + params[i].name);
    }
  }

  ++step_count_;
  const double t = static_cast<double>(step_count_);
  const double correction1 = 1.0 - std::pow(config_.beta1, t);
  const double correction2 = 1.0 - std::pow(config_.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto value = params[i].value;
    const auto grad = params[i].grad;
    auto& m = first_moment_[i];
    auto& v = second_moment_[i];
    for (std::size_t j = 0; j < value.size(); ++j) {
      const double g = grad[j];
      m[j] = config_.beta1 * m[j] + (1.0 - config_.beta1) * g;
      v[j] = config_.beta2 * v[j] + (1.0 - config_.beta2) * g * g;
      const double m_hat = m[j] / correction1;
      const double v_hat = v[j] / correction2;
      value[j] -= config_.learning_rate * m_hat /
                  (std::sqrt(v_hat) + config_.epsilon);
    }
  }
}

}  // namespace efnet
