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
#include <gtest/gtest.h>

#include <algorithm>
#include <memory>
#include <numeric>

#include "auroc_oracle.hpp"
#include "efnet/ensemble.hpp"
#include "efnet/error.hpp"
#include "efnet/metrics.hpp"
#include "efnet/random.hpp"

namespace efnet {
namespace {

using testing::auroc_pairs;

Matrix random_probs(std::size_t rows, std::size_t k, CounterRng& rng) {
  Matrix m(rows, k);
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < k; ++c) s += (m(r, c) = rng.uniform() + 1e-3);
    for (std::size_t c = 0; c < k; ++c) m(r, c) /= s;
  }
  return m;
}

std::optional<double> auroc_of(const std::vector<double>& s, const std::vector<bool>& y) {
  std::unique_ptr<bool[]> flags(new bool[y.size()]);
  std::copy(y.begin(), y.end(), flags.get());
  return auroc_ovr(s, std::span<const bool>(flags.get(), y.size()));
}

TEST(SoftVote, ArithmeticMean) {
  const std::vector<Matrix> members = {Matrix::from_rows({{0.6, 0.4}}),
                                       Matrix::from_rows({{0.4, 0.6}})};
  EXPECT_EQ(soft_vote(members), Matrix::from_rows({{0.5, 0.5}}));
}

TEST(SoftVote, SingleMemberIsIdentity) {
  CounterRng rng(1);
  const std::vector<Matrix> one = {random_probs(9, 4, rng)};
  EXPECT_EQ(soft_vote(one), one[0]);
}

TEST(SoftVote, DegenerateWeightsSelectMember) {
  CounterRng rng(2);
  const std::vector<Matrix> members = {random_probs(5, 3, rng), random_probs(5, 3, rng)};
  EXPECT_EQ(soft_vote(members, std::vector<double>{1.0, 0.0}), members[0]);
  EXPECT_EQ(soft_vote(members, std::vector<double>{0.0, 3.0}), members[1]);
}

TEST(SoftVote, UniformEqualsSumOverM) {
  CounterRng rng(3);
  for (std::size_t m = 1; m <= 5; ++m) {
    std::vector<Matrix> members;
    for (std::size_t i = 0; i < m; ++i) members.push_back(random_probs(7, 3, rng));
    const auto out = soft_vote(members);
    for (std::size_t r = 0; r < 7; ++r) {
      double row = 0.0;
      for (std::size_t k = 0; k < 3; ++k) {
        double sum = 0.0;
        for (const auto& mem : members) sum += mem(r, k);
        EXPECT_EQ(out(r, k), sum / static_cast<double>(m));
        row += out(r, k);
      }
      EXPECT_NEAR(row, 1.0, 1e-9);
    }
  }
}

TEST(SoftVote, RejectsInvalidInput) {
  const std::vector<Matrix> bad = {Matrix::from_rows({{0.6, 0.6}})};
  EXPECT_THROW(soft_vote(bad), Error);
  const std::vector<Matrix> shapes = {Matrix(1, 2, 0.5), Matrix(2, 2, 0.5)};
  EXPECT_THROW(soft_vote(shapes), Error);
  const std::vector<Matrix> ok = {Matrix(1, 2, 0.5), Matrix(1, 2, 0.5)};
  EXPECT_THROW(soft_vote(ok, std::vector<double>{1.0}), Error);
  EXPECT_THROW(soft_vote(ok, std::vector<double>{-1.0, 2.0}), Error);
  EXPECT_THROW(soft_vote(ok, std::vector<double>{0.0, 0.0}), Error);
  EXPECT_THROW(soft_vote(std::vector<Matrix>{}), Error);
}

TEST(Evaluate, PerfectPredictions) {
  const auto probs = Matrix::from_rows({{0.9, 0.1, 0.0}, {0.2, 0.7, 0.1}, {0, 0, 1}, {0.6, 0.3, 0.1}});
  const std::vector<int> labels = {0, 1, 2, 0};
  const auto r = evaluate(probs, labels);
  EXPECT_EQ(r.accuracy, 1.0);
  for (const auto& c : r.per_class) EXPECT_EQ(c.f1, 1.0);
  EXPECT_EQ(r.macro.f1, 1.0);
  EXPECT_EQ(r.weighted.f1, 1.0);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j) {
        EXPECT_EQ(r.confusion.at(i, j), 0u);
      }
    }
  }
  EXPECT_EQ(r.auroc_macro, 1.0);
}

TEST(Evaluate, HandBuiltConfusionMatrix) {
  const auto cm = ConfusionMatrix::from_counts({{8, 2}, {3, 7}});
  const auto r = evaluate_confusion(cm);
  EXPECT_EQ(r.accuracy, 0.75);
  EXPECT_EQ(r.per_class[0].precision, 8.0 / 11.0);
  EXPECT_EQ(r.per_class[0].recall, 0.8);
  EXPECT_EQ(r.per_class[1].precision, 7.0 / 9.0);
  EXPECT_EQ(r.per_class[1].recall, 0.7);
  EXPECT_EQ(r.samples, 20u);
  EXPECT_FALSE(r.auroc_macro.has_value());
  const double f0 = 2 * (8.0 / 11.0) * 0.8 / (8.0 / 11.0 + 0.8);
  EXPECT_NEAR(r.per_class[0].f1, f0, 1e-15);
  EXPECT_NEAR(r.weighted.recall, 0.75, 1e-15);
}

TEST(Evaluate, ZeroOverZeroIsZero) {
  // class 1 never predicted and class 2 never present
  const auto cm = ConfusionMatrix::from_counts({{5, 0, 0}, {4, 0, 0}, {0, 0, 0}});
  const auto r = evaluate_confusion(cm);
  EXPECT_EQ(r.per_class[1].precision, 0.0);
  EXPECT_EQ(r.per_class[1].recall, 0.0);
  EXPECT_EQ(r.per_class[1].f1, 0.0);
  EXPECT_EQ(r.per_class[2].precision, 0.0);
  EXPECT_EQ(r.per_class[2].recall, 0.0);
  // weighted recall equals accuracy in every case
  EXPECT_NEAR(r.weighted.recall, r.accuracy, 1e-15);
  EXPECT_NEAR(r.weighted.precision, (5.0 / 9.0) * (5.0 / 9.0), 1e-15);
}

TEST(Evaluate, WeightedRecallEqualsAccuracy) {
  CounterRng rng(5);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + rng.below(100), k = 2 + rng.below(4);
    const auto probs = random_probs(n, k, rng);
    std::vector<int> labels(n);
    for (auto& l : labels) l = static_cast<int>(rng.below(k));
    const auto r = evaluate(probs, labels);
    EXPECT_NEAR(r.weighted.recall, r.accuracy, 1e-12);
  }
}

TEST(Evaluate, ArgmaxTiesGoToLowestClass) {
  const auto r = evaluate(Matrix::from_rows({{0.5, 0.5}, {0.5, 0.5}}), std::vector<int>{0, 1});
  EXPECT_EQ(r.confusion.at(0, 0), 1u);
  EXPECT_EQ(r.confusion.at(1, 0), 1u);
}

TEST(Evaluate, PermutationInvariant) {
  CounterRng rng(6);
  const auto probs = random_probs(60, 4, rng);
  std::vector<int> labels(60);
  for (auto& l : labels) l = static_cast<int>(rng.below(4));
  std::vector<std::size_t> order(60);
  std::iota(order.begin(), order.end(), 0);
  shuffle(std::span<std::size_t>(order), rng);
  std::vector<int> permuted;
  for (auto i : order) permuted.push_back(labels[i]);
  const auto a = evaluate(probs, labels);
  const auto b = evaluate(probs.select_rows(order), permuted);
  EXPECT_EQ(report_to_json(a, {"a", "b", "c", "d"}), report_to_json(b, {"a", "b", "c", "d"}));
}

TEST(Evaluate, SingleSampleHasNoAuroc) {
  const auto r = evaluate(Matrix::from_rows({{0.2, 0.8}}), std::vector<int>{1});
  EXPECT_TRUE(r.accuracy == 0.0 || r.accuracy == 1.0);
  EXPECT_FALSE(r.auroc_macro.has_value());
  for (const auto& c : r.per_class) EXPECT_FALSE(c.auroc.has_value());
}

TEST(Evaluate, MacroAurocSkipsUndefinedClasses) {
  const auto probs = Matrix::from_rows({{0.7, 0.2, 0.1}, {0.3, 0.6, 0.1}, {0.6, 0.3, 0.1}});
  const auto r = evaluate(probs, std::vector<int>{0, 1, 0});
  ASSERT_TRUE(r.per_class[0].auroc.has_value());
  ASSERT_TRUE(r.per_class[1].auroc.has_value());
  EXPECT_FALSE(r.per_class[2].auroc.has_value());
  EXPECT_EQ(*r.auroc_macro, (*r.per_class[0].auroc + *r.per_class[1].auroc) / 2.0);
}

TEST(Auroc, ReferenceCases) {
  EXPECT_EQ(auroc_of({0.9, 0.8, 0.7, 0.6}, {true, false, true, false}), 0.75);
  EXPECT_EQ(auroc_of({0.9, 0.8, 0.1, 0.2}, {true, true, false, false}), 1.0);
  EXPECT_EQ(auroc_of({0.3, 0.3, 0.3, 0.3}, {true, false, true, false}), 0.5);
  EXPECT_FALSE(auroc_of({0.1, 0.2}, {true, true}).has_value());
}

TEST(Auroc, MatchesPairCounting) {
  CounterRng rng(7);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.below(200);
    std::vector<double> s(n);
    std::vector<bool> y(n);
    const std::size_t levels = 1 + rng.below(20);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.below(levels)) / static_cast<double>(levels);
      y[i] = rng.bernoulli(0.4);
    }
    const auto got = auroc_of(s, y);
    const auto want = auroc_pairs(s, y);
    ASSERT_EQ(got.has_value(), want.has_value());
    if (want) {
      EXPECT_NEAR(*got, *want, 1e-12);
    }
  }
}

TEST(Report, TextAndCsvFormats) {
  const auto r = evaluate_confusion(ConfusionMatrix::from_counts({{8, 2}, {3, 7}}));
  const std::string csv = confusion_to_csv(r.confusion, {"yes", "no, really"});
  EXPECT_EQ(csv, "true/predicted,yes,\"no, really\"\nyes,8,2\n\"no, really\",3,7\n");
  const std::string text = format_report(r, {"yes", "no"});
  EXPECT_NE(text.find("0.7500"), std::string::npos);
  const auto j = report_to_json(r, {"yes", "no"});
  EXPECT_EQ(j.at("accuracy").get<double>(), 0.75);
}

class FixedClassifier : public ProbabilisticClassifier {
 public:
  explicit FixedClassifier(Matrix p) : p_(std::move(p)) {}
  std::string kind() const override { return "fixed"; }
  std::size_t class_count() const override { return p_.cols(); }
  Matrix predict_proba(const EncodedDataset&) const override { return p_; }
  nlohmann::json to_json() const override { return nlohmann::json::object(); }

 private:
  Matrix p_;
};

TEST(EnsembleModel, VotesOverMembers) {
  auto a = std::make_shared<FixedClassifier>(Matrix::from_rows({{1.0, 0.0}}));
  auto b = std::make_shared<FixedClassifier>(Matrix::from_rows({{0.0, 1.0}}));
  EnsembleModel uniform({a, b});
  EXPECT_EQ(uniform.predict_proba(EncodedDataset{}), Matrix::from_rows({{0.5, 0.5}}));
  EnsembleModel weighted({a, b}, {3.0, 1.0});
  EXPECT_EQ(weighted.weights(), (std::vector<double>{0.75, 0.25}));
  EXPECT_EQ(weighted.predict_proba(EncodedDataset{}), Matrix::from_rows({{0.75, 0.25}}));
  auto c = std::make_shared<FixedClassifier>(Matrix::from_rows({{0.2, 0.3, 0.5}}));
  EXPECT_THROW(EnsembleModel({a, c}), Error);
}

}  // namespace
}  // namespace efnet
