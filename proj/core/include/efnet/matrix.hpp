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
#ifndef EFNET_MATRIX_HPP_
#define EFNET_MATRIX_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace efnet {

// Dense row-major 2-D array.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  Grid(std::size_t rows, std::size_t cols, std::vector<T> values);

  static Grid from_rows(std::initializer_list<std::initializer_list<T>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }

  std::span<T> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }

  std::span<T> data() noexcept { return values_; }
  std::span<const T> data() const noexcept { return values_; }
  const std::vector<T>& values() const noexcept { return values_; }

  void fill(T value) { std::fill(values_.begin(), values_.end(), value); }

  // Copies of the given rows, in order.
  Grid select_rows(std::span<const std::size_t> rows) const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> values_;
};

using Matrix = Grid<double>;
using IndexMatrix = Grid<std::int32_t>;

// a (n x k) times b^T where b is (m x k); the Linear-layer product.
Matrix matmul_transposed(const Matrix& a, const Matrix& b);
// a (n x k) times b (k x m).
Matrix matmul(const Matrix& a, const Matrix& b);

bool all_finite(const Matrix& m) noexcept;

// "r x c" for diagnostics.
std::string shape_string(std::size_t rows, std::size_t cols);

}  // namespace efnet

#include "efnet/matrix_inl.hpp"

#endif  // EFNET_MATRIX_HPP_
