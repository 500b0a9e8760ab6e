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
#include "efnet/gradient_check.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace efnet {

GradientCheckReport gradient_check(const LossFunction& loss,
                                   std::span<const ParamRef> params,
                                   double step) {
  for (const auto& p : params) std::fill(p.grad.begin(), p.grad.end(), 0.0);
  loss(true);
  std::vector<std::vector<double>> analytic;
  for (const auto& p : params) analytic.emplace_back(p.grad.begin(), p.grad.end());

  GradientCheckReport report;
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto value = params[i].value;
    for (std::size_t j = 0; j < value.size(); ++j) {
      const double saved = value[j];
      value[j] = saved + step;
      const double plus = loss(false);
      value[j] = saved - step;
      const double minus = loss(false);
      value[j] = saved;

      const double numeric = (plus - minus) / (2.0 * step);
      const double ga = analytic[i][j];
      const double denom = std::max({std::abs(ga), std::abs(numeric), 1e-12});
      const double rel = std::abs(ga - numeric) / denom;
      ++report.checked;
      if (rel > report.max_relative_error) {
        report.max_relative_error = rel;
        report.worst_parameter = params[i].name;
        report.worst_index = j;
        report.analytic = ga;
        report.numeric = numeric;
      }
    }
  }
  return report;
}

}  // namespace efnet
