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

#ifndef EFNET_RANDOM_HPP_
#define EFNET_RANDOM_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace efnet {

__extension__ using uint128_t = unsigned __int128;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from a parent seed and a label.
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::uint64_t stream) noexcept {
  return mix64(seed ^ mix64(stream + 0x9e3779b97f4a7c15ULL));
}

// Counter-based generator: the i-th draw is mix64(seed + i * golden), so the
// sequence depends only on integer arithmetic and is identical on every
// platform. All derived distributions below avoid libm for the same reason;
// the standard <random> distributions are implementation-defined.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : seed_(mix64(seed)) {}

  std::uint64_t next() noexcept {
    return mix64(seed_ + (++counter_) * 0x9e3779b97f4a7c15ULL);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }

  // Uniform integer in [0, n); n must be positive. Lemire's nearly-divisionless
  // reduction with rejection, so there is no modulo bias.
  std::uint64_t below(std::uint64_t n) noexcept {
    std::uint64_t x = next();
    uint128_t m = static_cast<uint128_t>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = next();
        m = static_cast<uint128_t>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Approximately standard normal: Irwin-Hall sum of twelve uniforms minus 6.
  double normal() noexcept {
    double sum = 0.0;
    for (int i = 0; i < 12; ++i) sum += uniform();
    return sum - 6.0;
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

// Fisher-Yates shuffle driven by CounterRng.
template <typename T>
void shuffle(std::span<T> values, CounterRng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace efnet

#endif  // EFNET_RANDOM_HPP_
