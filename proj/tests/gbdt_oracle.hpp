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
#ifndef EFNET_TESTS_GBDT_ORACLE_HPP_
#define EFNET_TESTS_GBDT_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "efnet/gbdt.hpp"
#include "efnet/nn.hpp"

namespace efnet::testing {

struct OracleSplit {
  double gain = 0.0;  // 0 when no admissible split improves
  int feature = -1;
  double threshold = 0.0;
  // Admissible splits whose gain is within tolerance of the best.
  std::size_t near_ties = 0;
};

// Exhaustive enumeration of every (feature, threshold) pair. Each candidate's
// child sums are recomputed from scratch over all rows.
inline OracleSplit exhaustive_best_split(const Matrix& x,
                                         const std::vector<double>& g,
                                         const std::vector<double>& h,
                                         const GbdtConfig& config,
                                         double tie_tolerance = 1e-9) {
  double G = 0.0, H = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    G += g[i];
    H += h[i];
  }
  struct Candidate {
    double gain;
    int feature;
    double threshold;
  };
  std::vector<Candidate> all;
  for (std::size_t f = 0; f < x.cols(); ++f) {
    std::set<double> values;
    for (std::size_t i = 0; i < x.rows(); ++i) values.insert(x(i, f));
    for (auto it = values.begin(); std::next(it) != values.end(); ++it) {
      const double t = split_threshold(*it, *std::next(it));
      double gl = 0.0, hl = 0.0, gr = 0.0, hr = 0.0;
      for (std::size_t i = 0; i < x.rows(); ++i) {
        if (x(i, f) < t) {
          gl += g[i];
          hl += h[i];
        } else {
          gr += g[i];
          hr += h[i];
        }
      }
      if (hl < config.min_child_hessian || hr < config.min_child_hessian) continue;
      const double lam = config.l2_reg;
      const double gain =
          0.5 * (gl * gl / (hl + lam) + gr * gr / (hr + lam) - G * G / (H + lam));
      all.push_back({gain, static_cast<int>(f), t});
    }
  }
  OracleSplit best;
  for (const auto& c : all) {
    if (c.gain > best.gain) best = {c.gain, c.feature, c.threshold, 0};
  }
  if (best.feature < 0) return best;
  for (const auto& c : all) {
    if (std::abs(c.gain - best.gain) <= tie_tolerance * std::max(1.0, best.gain)) {
      ++best.near_ties;
    }
  }
  return best;
}

// Per-class gradients and hessians of softmax cross-entropy at the given
// margins.
inline void class_gradients(const Matrix& margins, const std::vector<int>& labels,
                            std::size_t k, std::vector<double>& g,
                            std::vector<double>& h) {
  const Matrix p = softmax(margins);
  g.assign(labels.size(), 0.0);
  h.assign(labels.size(), 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    g[i] = p(i, k) - (static_cast<std::size_t>(labels[i]) == k ? 1.0 : 0.0);
    h[i] = p(i, k) * (1.0 - p(i, k));
  }
}

}  // namespace efnet::testing

#endif  // EFNET_TESTS_GBDT_ORACLE_HPP_
