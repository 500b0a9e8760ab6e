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
#ifndef EFNET_MATRIX_INL_HPP_
#define EFNET_MATRIX_INL_HPP_

#include <algorithm>
#include <utility>

#include "efnet/error.hpp"

namespace efnet {

template <typename T>
Grid<T>::Grid(std::size_t rows, std::size_t cols, std::vector<T> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw UsageError("grid of shape " + shape_string(rows_, cols_) +
                     " given " + std::to_string(values_.size()) + " values");
  }
}

template <typename T>
Grid<T> Grid<T>::from_rows(
    std::initializer_list<std::initializer_list<T>> rows) {
  Grid out;
  out.rows_ = rows.size();
  out.cols_ = rows.size() == 0 ? 0 : rows.begin()->size();
  for (const auto& r : rows) {
    if (r.size() != out.cols_) throw UsageError("ragged grid initializer");
    out.values_.insert(out.values_.end(), r.begin(), r.end());
  }
  return out;
}

template <typename T>
Grid<T> Grid<T>::select_rows(std::span<const std::size_t> rows) const {
  Grid out(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = row(rows[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace efnet

#endif  // EFNET_MATRIX_INL_HPP_
