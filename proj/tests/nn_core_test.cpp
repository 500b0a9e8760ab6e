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

#include <cmath>

#include "efnet/adam.hpp"
#include "efnet/error.hpp"
#include "efnet/gradient_check.hpp"
#include "efnet/nn.hpp"

namespace efnet {
namespace {

Matrix random_matrix(std::size_t r, std::size_t c, CounterRng& rng) {
  Matrix m(r, c);
  for (auto& v : m.data()) v = rng.uniform(-1.0, 1.0);
  return m;
}

TEST(Linear, IdentityWeightsPassInputThrough) {
  LinearLayer layer(3, 3);
  for (std::size_t i = 0; i < 3; ++i) layer.weight(i, i) = 1.0;
  const auto x = Matrix::from_rows({{1, -2, 3}, {0.5, 0, -7}});
  EXPECT_EQ(layer.forward(x), x);
}

TEST(Linear, ZeroWeightsYieldBias) {
  LinearLayer layer(4, 2);
  layer.bias = {0.5, -1.5};
  const auto y = layer.forward(Matrix(3, 4, 9.0));
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_EQ(y(r, 0), 0.5);
    EXPECT_EQ(y(r, 1), -1.5);
  }
}

TEST(Linear, MatchesHandMultipliedProduct) {
  LinearLayer layer(3, 2);
  layer.weight = Matrix::from_rows({{1, 2, 3}, {-1, 0, 4}});
  layer.bias = {0.5, -0.5};
  const auto x = Matrix::from_rows({{1, 0, -1}, {2, 3, 0.5}});
  // row 0: [1 - 3 + 0.5, -1 - 4 - 0.5]; row 1: [2 + 6 + 1.5 + 0.5, -2 + 2 - 0.5]
  EXPECT_EQ(layer.forward(x), Matrix::from_rows({{-1.5, -5.5}, {10, -0.5}}));
}

TEST(Linear, RejectsShapeMismatch) {
  LinearLayer layer(3, 2);
  EXPECT_THROW(layer.forward(Matrix(1, 4)), Error);
}

TEST(Linear, GlorotStaysInRange) {
  LinearLayer layer(30, 10);
  CounterRng rng(1);
  layer.init_glorot(rng);
  const double bound = std::sqrt(6.0 / 40.0);
  for (double w : layer.weight.data()) EXPECT_LE(std::abs(w), bound);
  for (double b : layer.bias) EXPECT_EQ(b, 0.0);
}

TEST(PReLU, Definition) {
  PReLU act(0.25);
  const auto y = act.forward(Matrix::from_rows({{5, -2, 0}}));
  EXPECT_EQ(y, Matrix::from_rows({{5, -0.5, 0}}));
  PReLU ident(1.0);
  const auto x = Matrix::from_rows({{-3, 2}, {0.1, -0.1}});
  EXPECT_EQ(ident.forward(x), x);
  PReLU other(-4.0);
  EXPECT_EQ(other.forward(Matrix::from_rows({{5}}))(0, 0), 5.0);
}

TEST(Embedding, PadRowIsZeroAndLookupsRepeat) {
  EmbeddingTable table(6, 4);
  CounterRng rng(2);
  table.init_normal(rng);
  IndexMatrix tokens(2, 3, 0);
  tokens(1, 0) = 4;
  tokens(1, 2) = 4;
  const auto out = table.forward(tokens);
  ASSERT_EQ(out.rows(), 2u);
  ASSERT_EQ(out.cols(), 12u);
  for (double v : out.row(0)) EXPECT_EQ(v, 0.0);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(out(1, k), out(1, 8 + k));
    EXPECT_EQ(out(1, k), table.weight(4, k));
    EXPECT_EQ(out(1, 4 + k), 0.0);
  }
}

TEST(Embedding, OutOfRangeIndexThrows) {
  EmbeddingTable table(3, 2);
  IndexMatrix tokens(1, 1, 3);
  EXPECT_THROW(table.forward(tokens), Error);
}

TEST(Embedding, PadRowStaysZeroUnderAdam) {
  EmbeddingTable table(5, 3);
  CounterRng rng(3);
  table.init_normal(rng);
  AdamOptimizer adam({0.1});
  IndexMatrix tokens = IndexMatrix::from_rows({{0, 2, 0}, {4, 0, 1}});
  for (int step = 0; step < 25; ++step) {
    table.zero_grad();
    Matrix grad(2, 9, 1.0);
    table.backward(tokens, grad);
    std::vector<ParamRef> params;
    table.append_params(params, "emb");
    adam.step(params);
  }
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(table.weight(0, k), 0.0);
  EXPECT_NE(table.weight(2, 0), 0.0);
}

TEST(Softmax, RowsSumToOne) {
  CounterRng rng(4);
  auto logits = random_matrix(20, 7, rng);
  for (auto& v : logits.data()) v *= 40.0;
  const auto p = softmax(logits);
  for (std::size_t r = 0; r < p.rows(); ++r) {
    double s = 0.0;
    for (double v : p.row(r)) {
      EXPECT_GE(v, 0.0);
      s += v;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(CrossEntropy, UniformLogitsGiveLogK) {
  const auto r = softmax_cross_entropy(Matrix(3, 4, 0.7), std::vector<int>{0, 1, 3});
  EXPECT_NEAR(r.loss, std::log(4.0), 1e-15);
}

TEST(CrossEntropy, LargeMarginIsNearZero) {
  const auto r = softmax_cross_entropy(Matrix::from_rows({{50, 0, 0}}), std::vector<int>{0});
  EXPECT_LT(r.loss, 1e-20);
  EXPECT_GE(r.loss, 0.0);
}

TEST(CrossEntropy, HandComputedGradient) {
  const auto r = softmax_cross_entropy(Matrix::from_rows({{0, 0}}), std::vector<int>{0});
  EXPECT_EQ(r.grad_logits, Matrix::from_rows({{-0.5, 0.5}}));
  const auto r2 = softmax_cross_entropy(Matrix(2, 2, 0.0), std::vector<int>{0, 1});
  EXPECT_EQ(r2.grad_logits, Matrix::from_rows({{-0.25, 0.25}, {0.25, -0.25}}));
}

TEST(CrossEntropy, RejectsBadLabels) {
  EXPECT_THROW(softmax_cross_entropy(Matrix(1, 2), std::vector<int>{2}), Error);
  EXPECT_THROW(softmax_cross_entropy(Matrix(2, 2), std::vector<int>{0}), Error);
}

TEST(Argmax, TiesGoToLowestIndex) {
  EXPECT_EQ(argmax_rows(Matrix::from_rows({{1, 3, 3}, {2, 2, 2}, {0, -1, 5}})),
            (std::vector<int>{1, 0, 2}));
}

TEST(Adam, ZeroGradientLeavesParametersUnchanged) {
  std::vector<double> value = {1.0, -2.0}, grad = {0.0, 0.0};
  const std::vector<ParamRef> params = {{"p", value, grad}};
  AdamOptimizer adam;
  for (int i = 0; i < 10; ++i) adam.step(params);
  EXPECT_EQ(value, (std::vector<double>{1.0, -2.0}));
}

TEST(Adam, FirstStepMovesByLearningRate) {
  std::vector<double> value = {1.0, 1.0, 1.0}, grad = {0.3, -7.0, 1e-3};
  const std::vector<ParamRef> params = {{"p", value, grad}};
  AdamOptimizer adam({0.01});
  adam.step(params);
  // m_hat = g, v_hat = g^2, so the step is lr * g / (|g| + eps)
  for (std::size_t i = 0; i < 3; ++i) {
    const double expected = 0.01 * grad[i] / (std::abs(grad[i]) + 1e-8);
    EXPECT_NEAR(1.0 - value[i], expected, 1e-15);
    EXPECT_NEAR(std::abs(1.0 - value[i]), 0.01, 1e-7);
  }
}

TEST(Adam, SecondStepMatchesClosedForm) {
  std::vector<double> value = {0.0}, grad = {2.0};
  const std::vector<ParamRef> params = {{"p", value, grad}};
  AdamOptimizer adam({0.1});
  adam.step(params);
  grad[0] = -1.0;
  adam.step(params);
  const double m2 = 0.9 * (0.1 * 2.0) + 0.1 * -1.0;
  const double v2 = 0.999 * (0.001 * 4.0) + 0.001 * 1.0;
  const double mh = m2 / (1 - 0.81), vh = v2 / (1 - 0.999 * 0.999);
  const double first = -0.1 * 2.0 / (2.0 + 1e-8);
  EXPECT_NEAR(value[0], first - 0.1 * mh / (std::sqrt(vh) + 1e-8), 1e-15);
}

TEST(Adam, DeterministicFromSameState) {
  auto run = [] {
    std::vector<double> value = {0.5, 0.25}, grad = {1.0, -0.5};
    const std::vector<ParamRef> params = {{"p", value, grad}};
    AdamOptimizer adam;
    for (int i = 0; i < 5; ++i) adam.step(params);
    return value;
  };
  EXPECT_EQ(run(), run());
}

TEST(Adam, RejectsChangedParameterShape) {
  std::vector<double> a = {1, 2}, ga = {1, 1}, b = {1}, gb = {1};
  AdamOptimizer adam;
  adam.step(std::vector<ParamRef>{{"a", a, ga}});
  EXPECT_THROW(adam.step(std::vector<ParamRef>{{"b", b, gb}}), Error);
}

struct TinyNet {
  LinearLayer layer{5, 3};
  Matrix x;
  std::vector<int> labels = {0, 2, 1, 2};

  TinyNet() {
    CounterRng rng(5);
    layer.init_glorot(rng);
    for (auto& b : layer.bias) b = rng.uniform(-0.5, 0.5);
    x = random_matrix(4, 5, rng);
  }
  double loss(bool grads) {
    const auto logits = layer.forward(x);
    auto r = softmax_cross_entropy(logits, labels);
    if (grads) layer.backward(x, r.grad_logits, false);
    return r.loss;
  }
  std::vector<ParamRef> params() {
    std::vector<ParamRef> p;
    layer.append_params(p, "layer");
    return p;
  }
};

TEST(GradientCheck, LinearSoftmaxIsTight) {
  TinyNet net;
  const auto report = gradient_check([&](bool g) { return net.loss(g); }, net.params());
  EXPECT_EQ(report.checked, 18u);
  EXPECT_LT(report.max_relative_error, 1e-6);
}

TEST(GradientCheck, DetectsCorruptedBiasGradient) {
  TinyNet net;
  const auto report = gradient_check(
      [&](bool g) {
        const double l = net.loss(g);
        if (g) net.layer.grad_bias[1] *= 1.5;
        return l;
      },
      net.params());
  EXPECT_GT(report.max_relative_error, 1e-2);
  EXPECT_EQ(report.worst_parameter, "layer.bias");
}

TEST(GradientCheck, PReLUAndEmbeddingBackward) {
  CounterRng rng(6);
  EmbeddingTable emb(6, 3);
  emb.init_normal(rng, 0.5);
  PReLU act(0.3);
  LinearLayer out(6, 2);
  out.init_glorot(rng);
  const IndexMatrix tokens = IndexMatrix::from_rows({{2, 3}, {5, 0}, {1, 2}});
  const std::vector<int> labels = {1, 0, 1};
  auto loss = [&](bool grads) {
    const auto h = emb.forward(tokens);
    const auto a = act.forward(h);
    const auto logits = out.forward(a);
    auto r = softmax_cross_entropy(logits, labels);
    if (grads) {
      const auto ga = out.backward(a, r.grad_logits);
      const auto gh = act.backward(h, ga);
      emb.backward(tokens, gh);
    }
    return r.loss;
  };
  std::vector<ParamRef> params;
  emb.append_params(params, "emb");
  act.append_params(params, "act");
  out.append_params(params, "out");
  const auto report = gradient_check(loss, params);
  EXPECT_LT(report.max_relative_error, 1e-6) << report.worst_parameter;
}

TEST(Persistence, LinearJsonRoundTripIsExact) {
  CounterRng rng(7);
  LinearLayer layer(4, 3);
  layer.init_glorot(rng);
  for (auto& b : layer.bias) b = rng.normal();
  const auto back = linear_from_json(linear_to_json(layer));
  EXPECT_EQ(back.weight, layer.weight);
  EXPECT_EQ(back.bias, layer.bias);
}

}  // namespace
}  // namespace efnet
