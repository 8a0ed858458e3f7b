// Copyright 2026 The advgan Authors
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
#include <limits>
#include <random>

#include "advgan/adam.hpp"
#include "advgan/error.hpp"
#include "advgan/gradcheck.hpp"
#include "advgan/ops.hpp"

using namespace advgan;

namespace {

Tensor random_tensor(Shape shape, std::mt19937_64& rng, double lo = 0.1, double hi = 1.0) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::bernoulli_distribution sign(0.5);
  std::vector<double> v(shape_numel(shape));
  for (auto& x : v) x = sign(rng) ? mag(rng) : -mag(rng);
  return Tensor::from(std::move(shape), std::move(v));
}

double inner(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.numel(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

// Direct nested-loop cross-correlation, independent of the im2col path.
std::vector<double> naive_conv(const Tensor& x, const Tensor& w, const Tensor& b, std::size_t s,
                               std::size_t p) {
  const std::size_t N = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
  const std::size_t O = w.dim(0), k = w.dim(2);
  const std::size_t Ho = (H + 2 * p - k) / s + 1, Wo = (W + 2 * p - k) / s + 1;
  std::vector<double> out(N * O * Ho * Wo);
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t o = 0; o < O; ++o)
      for (std::size_t i = 0; i < Ho; ++i)
        for (std::size_t j = 0; j < Wo; ++j) {
          double acc = b.data()[o];
          for (std::size_t c = 0; c < C; ++c)
            for (std::size_t a = 0; a < k; ++a)
              for (std::size_t bb = 0; bb < k; ++bb) {
                const long ih = static_cast<long>(i * s + a) - static_cast<long>(p);
                const long iw = static_cast<long>(j * s + bb) - static_cast<long>(p);
                if (ih < 0 || iw < 0 || ih >= static_cast<long>(H) || iw >= static_cast<long>(W))
                  continue;
                acc += x.data()[((n * C + c) * H + ih) * W + iw] *
                       w.data()[((o * C + c) * k + a) * k + bb];
              }
          out[((n * O + o) * Ho + i) * Wo + j] = acc;
        }
  return out;
}

}  // namespace

TEST(Tensor, ShapeAndData) {
  Tensor t = Tensor::from({2, 3}, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(t.numel(), 6u);
  EXPECT_EQ(t.rank(), 2u);
  EXPECT_THROW(Tensor::from({2, 2}, {1, 2, 3}), DimensionError);
  // Non-finite values are caught by the first op that consumes them.
  const Tensor bad = Tensor::from({1, 1, 2, 2}, {1, 2, std::numeric_limits<double>::quiet_NaN(), 4});
  EXPECT_THROW(conv2d(bad, Tensor::full({1, 1, 2, 2}, 1.0), Tensor::zeros({1}), {2, 2}),
               NumericError);
}

TEST(Tensor, BackwardOnScalarLeafSeedsOne) {
  Tensor x = Tensor::scalar(3.0, true);
  x.backward();
  ASSERT_EQ(x.grad().size(), 1u);
  EXPECT_EQ(x.grad()[0], 1.0);
}

TEST(Tensor, BackwardRejectsNonScalar) {
  Tensor x = Tensor::from({2}, {1, 2}, true);
  EXPECT_THROW(relu(x).backward(), ContractError);
}

TEST(Tensor, ReluMaskGradient) {
  Tensor x = Tensor::from({2}, {-1, 2}, true);
  sum(relu(x)).backward();
  EXPECT_EQ(x.grad()[0], 0.0);
  EXPECT_EQ(x.grad()[1], 1.0);
}

TEST(Tensor, SharedNodeVisitedOnce) {
  // y = x + x reaches x twice through one node; gradient must be exactly 2.
  Tensor x = Tensor::from({3}, {1, 2, 3}, true);
  Tensor h = scale(x, 1.0);
  sum(add(h, h)).backward();
  for (double g : x.grad()) EXPECT_EQ(g, 2.0);
}

TEST(Tensor, StopGradientBlocksAncestors) {
  Tensor x = Tensor::from({2}, {1, 2}, true);
  Tensor y = Tensor::from({2}, {3, 4}, true);
  sum(add(stop_gradient(scale(x, 5.0)), y)).backward();
  EXPECT_TRUE(x.grad().empty() || (x.grad()[0] == 0.0 && x.grad()[1] == 0.0));
  EXPECT_EQ(y.grad()[0], 1.0);
}

TEST(Tensor, NonFiniteForwardIsAnError) {
  Tensor x = Tensor::from({1}, {1e308});
  EXPECT_THROW(scale(x, 1e10), NumericError);
}

TEST(Conv2d, HandComputedDotProduct) {
  Tensor x = Tensor::from({1, 1, 2, 2}, {1, 2, 3, 4});
  Tensor w = Tensor::full({1, 1, 2, 2}, 1.0);
  Tensor y = conv2d(x, w, Tensor::zeros({1}), {2, 2});
  ASSERT_EQ(y.shape(), (Shape{1, 1, 1, 1}));
  EXPECT_EQ(y.data()[0], 10.0);
}

TEST(Conv2d, ZeroWeightGivesZero) {
  std::mt19937_64 rng(1);
  Tensor y = conv2d(random_tensor({2, 3, 4, 4}, rng), Tensor::zeros({5, 3, 3, 3}),
                    Tensor::zeros({5}), {1, 1});
  for (double v : y.data()) EXPECT_EQ(v, 0.0);
}

TEST(Conv2d, IdentityKernelPreservesInput) {
  std::vector<double> ramp(16);
  for (std::size_t i = 0; i < 16; ++i) ramp[i] = static_cast<double>(i);
  Tensor x = Tensor::from({1, 1, 4, 4}, ramp);
  std::vector<double> k(9, 0.0);
  k[4] = 1.0;
  Tensor y = conv2d(x, Tensor::from({1, 1, 3, 3}, k), Tensor::zeros({1}), {1, 1});
  for (std::size_t i = 0; i < 16; ++i) EXPECT_EQ(y.data()[i], ramp[i]);
}

TEST(Conv2d, MatchesNaiveLoops) {
  std::mt19937_64 rng(2);
  Tensor x = random_tensor({2, 3, 6, 8}, rng);
  for (auto [k, s, p] : {std::tuple{2u, 2u, 0u}, std::tuple{3u, 1u, 1u}}) {
    Tensor w = random_tensor({4, 3, k, k}, rng);
    Tensor b = random_tensor({4}, rng);
    Tensor y = conv2d(x, w, b, {s, s});
    const auto ref = naive_conv(x, w, b, s, p);
    ASSERT_EQ(y.numel(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(y.data()[i], ref[i], 1e-12);
  }
}

TEST(Conv2d, RejectsUnsupportedGeometryAndShapes) {
  Tensor x = Tensor::zeros({1, 1, 4, 4});
  EXPECT_THROW(conv2d(x, Tensor::zeros({1, 1, 3, 3}), Tensor::zeros({1}), {2, 2}), ConfigError);
  EXPECT_THROW(conv2d(x, Tensor::zeros({1, 2, 2, 2}), Tensor::zeros({1}), {2, 2}),
               DimensionError);
  EXPECT_THROW(conv2d(Tensor::zeros({1, 1, 5, 4}), Tensor::zeros({1, 1, 2, 2}),
                      Tensor::zeros({1}), {2, 2}),
               DimensionError);
}

TEST(ConvTranspose2d, SinglePixelBroadcast) {
  Tensor y = conv_transpose2d(Tensor::from({1, 1, 1, 1}, {1}), Tensor::full({1, 1, 2, 2}, 1.0),
                              Tensor::zeros({1}));
  ASSERT_EQ(y.shape(), (Shape{1, 1, 2, 2}));
  for (double v : y.data()) EXPECT_EQ(v, 1.0);
}

TEST(ConvTranspose2d, ZeroInputGivesBias) {
  Tensor y = conv_transpose2d(Tensor::zeros({2, 3, 2, 3}), Tensor::full({3, 2, 2, 2}, 0.7),
                              Tensor::from({2}, {0.5, -1.5}));
  ASSERT_EQ(y.shape(), (Shape{2, 2, 4, 6}));
  for (std::size_t i = 0; i < y.numel(); ++i) {
    const std::size_t c = (i / 24) % 2;
    EXPECT_EQ(y.data()[i], c == 0 ? 0.5 : -1.5);
  }
}

TEST(ConvTranspose2d, AdjointOfStridedConv) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    Tensor x = random_tensor({2, 3, 4, 6}, rng);
    Tensor w = random_tensor({5, 3, 2, 2}, rng);  // conv: 3 -> 5; transpose: 5 -> 3
    Tensor y = random_tensor({2, 5, 2, 3}, rng);
    const double lhs = inner(conv2d(x, w, Tensor::zeros({5}), {2, 2}), y);
    const double rhs = inner(x, conv_transpose2d(y, w, Tensor::zeros({3})));
    EXPECT_NEAR(lhs, rhs, 1e-10);
  }
}

TEST(ConvTranspose2d, RejectsOtherKernels) {
  EXPECT_THROW(conv_transpose2d(Tensor::zeros({1, 1, 2, 2}), Tensor::zeros({1, 1, 3, 3}),
                                Tensor::zeros({1})),
               ConfigError);
}

TEST(InstanceNorm, ConstantChannelGivesZeros) {
  Tensor y = instance_norm2d(Tensor::full({1, 2, 3, 3}, 4.0), Tensor::full({2}, 1.0),
                             Tensor::zeros({2}));
  for (double v : y.data()) EXPECT_EQ(v, 0.0);
}

TEST(InstanceNorm, AlreadyStandardChannel) {
  Tensor y = instance_norm2d(Tensor::from({1, 1, 1, 2}, {-1, 1}), Tensor::full({1}, 1.0),
                             Tensor::zeros({1}), 1e-14);
  EXPECT_NEAR(y.data()[0], -1.0, 1e-12);
  EXPECT_NEAR(y.data()[1], 1.0, 1e-12);
}

TEST(InstanceNorm, ZeroGainGivesOffset) {
  std::mt19937_64 rng(4);
  Tensor y = instance_norm2d(random_tensor({2, 3, 4, 4}, rng), Tensor::zeros({3}),
                             Tensor::full({3}, 3.0));
  for (double v : y.data()) EXPECT_EQ(v, 3.0);
}

TEST(InstanceNorm, MeanZeroVarianceOne) {
  std::mt19937_64 rng(5);
  Tensor x = random_tensor({2, 3, 8, 8}, rng, 1.0, 10.0);
  Tensor y = instance_norm2d(x, Tensor::full({3}, 1.0), Tensor::zeros({3}));
  for (std::size_t nc = 0; nc < 6; ++nc) {
    double m = 0, v = 0;
    for (std::size_t i = 0; i < 64; ++i) m += y.data()[nc * 64 + i];
    m /= 64;
    for (std::size_t i = 0; i < 64; ++i) v += std::pow(y.data()[nc * 64 + i] - m, 2);
    v /= 64;
    EXPECT_LE(std::abs(m), 1e-10);
    EXPECT_NEAR(v, 1.0, 1e-6);
  }
}

TEST(Activations, Values) {
  Tensor x = Tensor::from({2}, {-1, 2});
  EXPECT_EQ(relu(x).data()[0], 0.0);
  EXPECT_EQ(relu(x).data()[1], 2.0);
  EXPECT_DOUBLE_EQ(leaky_relu(x, 0.2).data()[0], -0.2);
  EXPECT_EQ(leaky_relu(x, 0.2).data()[1], 2.0);
  EXPECT_THROW(leaky_relu(x, 1.0), ConfigError);
  EXPECT_THROW(leaky_relu(x, 0.0), ConfigError);
}

TEST(Activations, SubgradientAtZeroIsZero) {
  Tensor x = Tensor::from({1}, {0.0}, true);
  sum(relu(x)).backward();
  EXPECT_EQ(x.grad()[0], 0.0);
}

TEST(Dense, Values) {
  Tensor y = dense(Tensor::from({1, 2}, {1, 2}), Tensor::from({2, 1}, {1, 1}), Tensor::zeros({1}));
  EXPECT_EQ(y.data()[0], 3.0);
  Tensor b = dense(Tensor::from({2, 2}, {1, 2, 3, 4}), Tensor::zeros({2, 3}),
                   Tensor::from({3}, {1, 2, 3}));
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(b.data()[i], static_cast<double>(i % 3 + 1));
  Tensor id = dense(Tensor::from({1, 2}, {5, 6}), Tensor::from({2, 2}, {1, 0, 0, 1}),
                    Tensor::zeros({2}));
  EXPECT_EQ(id.data()[0], 5.0);
  EXPECT_EQ(id.data()[1], 6.0);
  EXPECT_THROW(dense(Tensor::zeros({1, 3}), Tensor::zeros({2, 1}), Tensor::zeros({1})),
               DimensionError);
}

TEST(Reductions, Values) {
  std::mt19937_64 rng(6);
  Tensor x = random_tensor({3, 4}, rng);
  EXPECT_EQ(l1_distance(x, x).item(), 0.0);
  EXPECT_DOUBLE_EQ(square_error(Tensor::from({1}, {0.5}), 1.0).item(), 0.25);
  std::vector<double> v(2 * 4 * 3);
  for (std::size_t n = 0; n < 2; ++n)
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t t = 0; t < 3; ++t) v[(n * 4 + b) * 3 + t] = static_cast<double>(t + 10 * n);
  Tensor fm = frame_mean(Tensor::from({2, 1, 4, 3}, v));
  ASSERT_EQ(fm.shape(), (Shape{2, 3}));
  for (std::size_t n = 0; n < 2; ++n)
    for (std::size_t t = 0; t < 3; ++t) EXPECT_DOUBLE_EQ(fm.data()[n * 3 + t], t + 10.0 * n);
  EXPECT_THROW(l1_distance(x, Tensor::zeros({4, 3})), DimensionError);
}

TEST(GradCheck, SpecExamples) {
  std::mt19937_64 rng(7);
  using V = std::vector<Tensor>;
  auto conv = grad_check([](const V& t) { return conv2d(t[0], t[1], t[2], {2, 2}); },
                         {random_tensor({1, 2, 4, 6}, rng), random_tensor({3, 2, 2, 2}, rng),
                          random_tensor({3}, rng)});
  EXPECT_TRUE(conv.passed) << conv.max_rel_error;
  auto in = grad_check([](const V& t) { return instance_norm2d(t[0], t[1], t[2]); },
                       {random_tensor({1, 3, 4, 4}, rng), random_tensor({3}, rng),
                        random_tensor({3}, rng)});
  EXPECT_TRUE(in.passed) << in.max_rel_error;
  auto d = grad_check([](const V& t) { return dense(t[0], t[1], t[2]); },
                      {random_tensor({2, 5}, rng), random_tensor({5, 3}, rng),
                       random_tensor({3}, rng)});
  EXPECT_TRUE(d.passed) << d.max_rel_error;
}

TEST(GradCheck, DetectsAWrongGradient) {
  // A function whose backward is deliberately wrong: a detached factor makes
  // the analytic gradient half of the true one.
  auto bad = grad_check(
      [](const std::vector<Tensor>& t) {
        return add(scale(t[0], 1.0), stop_gradient(scale(t[0], 1.0)));
      },
      {Tensor::from({3}, {0.3, -0.7, 1.1})});
  EXPECT_FALSE(bad.passed);
  EXPECT_NEAR(bad.max_rel_error, 0.5, 1e-6);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  Tensor p = Tensor::from({1}, {0.0}, true);
  std::vector<Tensor> params{p};
  AdamState st = AdamState::for_params(params);
  p.mutable_grad()[0] = 1.0;
  adam_step(params, st, 0.0002);
  EXPECT_NEAR(p.data()[0], -0.0002 / (1.0 + 1e-8), 1e-15);
  EXPECT_EQ(st.step, 1u);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  Tensor p = Tensor::from({2}, {1.5, -2.5}, true);
  std::vector<Tensor> params{p};
  AdamState st = AdamState::for_params(params);
  adam_step(params, st, 0.1);
  EXPECT_EQ(p.data()[0], 1.5);
  EXPECT_EQ(p.data()[1], -2.5);
  EXPECT_EQ(st.step, 1u);
}

TEST(Adam, RepeatedPositiveGradientDecreasesMonotonically) {
  Tensor p = Tensor::from({1}, {1.0}, true);
  std::vector<Tensor> params{p};
  AdamState st = AdamState::for_params(params);
  double prev = p.data()[0];
  for (int i = 0; i < 2; ++i) {
    p.zero_grad();
    p.mutable_grad()[0] = 1.0;
    adam_step(params, st, 0.01);
    EXPECT_LT(p.data()[0], prev);
    prev = p.data()[0];
  }
  for (const auto& v : st.v) {
    for (double x : v) EXPECT_GE(x, 0.0);
  }
}

TEST(Adam, RejectsNonPositiveRate) {
  Tensor p = Tensor::from({1}, {1.0}, true);
  std::vector<Tensor> params{p};
  AdamState st = AdamState::for_params(params);
  EXPECT_THROW(adam_step(params, st, 0.0), ConfigError);
}
