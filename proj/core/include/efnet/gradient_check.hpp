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
#ifndef EFNET_GRADIENT_CHECK_HPP_
#define EFNET_GRADIENT_CHECK_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "efnet/nn.hpp"

namespace efnet {

struct GradientCheckReport {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t checked = 0;
};

// Returns the scalar loss; when with_gradients is true it must also
// accumulate analytic gradients into the parameters' grad buffers.
using LossFunction = std::function<double(bool with_gradients)>;

// Compares analytic gradients with central differences
// (L(p + h) - L(p - h)) / 2h for every parameter element. Relative error is
// |ga - gn| / max(|ga|, |gn|, 1e-12). Gradient buffers are zeroed first.
GradientCheckReport gradient_check(const LossFunction& loss,
                                   std::span<const ParamRef> params,
                                   double step = 1e-5);

}  // namespace efnet

#endif  // EFNET_GRADIENT_CHECK_HPP_
