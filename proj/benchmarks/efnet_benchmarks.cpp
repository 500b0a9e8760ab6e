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
#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "efnet/gbdt.hpp"
#include "efnet/metrics.hpp"
#include "efnet/models.hpp"
#include "efnet/preprocess.hpp"
#include "efnet/synthetic.hpp"

namespace efnet {
namespace {

struct Fixture {
  PreprocessState state;
  EncodedDataset data;
};

const Fixture& fixture(std::size_t rows) {
  static std::map<std::size_t, Fixture> cache;
  auto it = cache.find(rows);
  if (it == cache.end()) {
    SyntheticOptions o;
    o.rows = rows;
    o.seed = 1;
    const auto table = generate_synthetic(default_ed_schema(), o);
    auto state = fit_preprocess(table);
    auto data = transform(table, state);
    it = cache.emplace(rows, Fixture{std::move(state), std::move(data)}).first;
  }
  return it->second;
}

void BM_MatmulTransposed(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  CounterRng rng(2);
  Matrix a(n, n), b(n, n);
  for (auto& v : a.data()) v = rng.uniform();
  for (auto& v : b.data()) v = rng.uniform();
  for (auto _ : st) benchmark::DoNotOptimize(matmul_transposed(a, b));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_MatmulTransposed)->RangeMultiplier(2)->Range(32, 256)->Complexity();

void BM_EfNetForward(benchmark::State& st) {
  const auto& f = fixture(static_cast<std::size_t>(st.range(0)));
  EfNetModel model(EfNetModel::config_for(f.state, 16, 3));
  for (auto _ : st) benchmark::DoNotOptimize(model.logits(f.data));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_EfNetForward)->Arg(64)->Arg(1024);

void BM_EfNetTrainStep(benchmark::State& st) {
  const auto& f = fixture(64);
  EfNetModel model(EfNetModel::config_for(f.state, 16, 3));
  for (auto _ : st) {
    model.zero_grad();
    benchmark::DoNotOptimize(model.forward_backward(f.data));
  }
}
BENCHMARK(BM_EfNetTrainStep);

void BM_GbdtRound(benchmark::State& st) {
  const auto& f = fixture(static_cast<std::size_t>(st.range(0)));
  const Matrix x = gbdt_features(f.data, GbdtFeatureView::kNumericTokens);
  GbdtConfig c;
  c.rounds = 1;
  for (auto _ : st) {
    benchmark::DoNotOptimize(gbdt_train(x, f.data.labels, f.state.class_count(), c));
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_GbdtRound)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_Auroc(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  CounterRng rng(4);
  std::vector<double> scores(n);
  std::unique_ptr<bool[]> positive(new bool[n]);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = rng.uniform();
    positive[i] = rng.bernoulli(0.3);
  }
  for (auto _ : st) {
    benchmark::DoNotOptimize(auroc_ovr(scores, std::span<const bool>(positive.get(), n)));
  }
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_Auroc)->RangeMultiplier(4)->Range(256, 65536)->Complexity();

}  // namespace
}  // namespace efnet

BENCHMARK_MAIN();
