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
#ifndef EFNET_ADAM_HPP_
#define EFNET_ADAM_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "efnet/nn.hpp"

namespace efnet {

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction. Moment buffers are created on the first step and
// must match the parameter list shape on every later step.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(AdamConfig config = {});

  void step(std::span<const ParamRef> params);

  std::int64_t step_count() const noexcept { return step_count_; }
  const AdamConfig& config() const noexcept { return config_; }
  const std::vector<std::vector<double>>& first_moment() const noexcept {
    return first_moment_;
  }
  const std::vector<std::vector<double>>& second_moment() const noexcept {
    return second_moment_;
  }

 private:
  AdamConfig config_;
  std::int64_t step_count_ = 0;
  std::vector<std::vector<double>> first_moment_;
  std::vector<std::vector<double>> second_moment_;
};

}  // namespace efnet

#endif  // EFNET_ADAM_HPP_
