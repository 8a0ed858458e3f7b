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

#include <random>

#include "advgan/error.hpp"
#include "advgan/networks.hpp"

using namespace advgan;

namespace {

const NetScale kSmall{1.0 / 32.0, 32, 128};

Tensor random_patch(std::size_t n, std::size_t bins, std::size_t frames, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n * bins * frames);
  for (auto& x : v) x = d(rng);
  return Tensor::from({n, 1, bins, frames}, std::move(v));
}

// Counts from the layer list, independent of the implementation.
std::size_t expected_generator(const NetScale& s) {
  const std::size_t c1 = s.scaled(256), c2 = s.scaled(512);
  auto conv = [](std::size_t cin, std::size_t cout, std::size_t k, bool norm) {
    return cin * cout * k * k + cout + (norm ? 2 * cout : 0);
  };
  return conv(1, c1, 2, true) + conv(c1, c2, 2, true) + 2 * conv(c2, c2, 3, true) +
         conv(c2, c1, 2, true) + conv(c1, 1, 2, false);
}

std::size_t expected_discriminator(const NetScale& s) {
  const std::size_t c[] = {1, s.scaled(64), s.scaled(128), s.scaled(256), s.scaled(512)};
  std::size_t n = 0;
  for (int i = 0; i < 4; ++i) n += c[i] * c[i + 1] * 4 + 3 * c[i + 1];
  const std::size_t flat = c[4] * (s.bins / 16) * (s.frames / 16);
  const std::size_t hidden = s.scaled(512);
  return n + flat * hidden + hidden + hidden + 1;
}

}  // namespace

TEST(NetScale, ScaledRoundsUp) {
  const NetScale s{1.0 / 8.0, 32, 128};
  EXPECT_EQ(s.scaled(256), 32u);
  EXPECT_EQ(s.scaled(64), 8u);
  EXPECT_EQ((NetScale{0.3, 32, 128}.scaled(10)), 3u);
  EXPECT_EQ((NetScale{0.01, 32, 128}.scaled(64)), 1u);
  EXPECT_THROW(NetScale({0.0, 32, 128}).validate(), ConfigError);
  EXPECT_THROW(NetScale({1.5, 32, 128}).validate(), ConfigError);
  EXPECT_THROW(NetScale({1.0, 30, 128}).validate(), ConfigError);
}

TEST(Generator, PreservesPatchShape) {
  const Generator g = Generator::build(kSmall, 1);
  EXPECT_EQ(g.forward(random_patch(1, 32, 128, 2)).shape(), (Shape{1, 1, 32, 128}));
  EXPECT_EQ(g.forward(random_patch(2, 32, 256, 3)).shape(), (Shape{2, 1, 32, 256}));
}

TEST(Generator, RejectsIndivisibleInput) {
  const Generator g = Generator::build(kSmall, 1);
  EXPECT_THROW(g.forward(random_patch(1, 32, 130, 2)), DimensionError);
  EXPECT_THROW(g.forward(Tensor::zeros({1, 2, 32, 128})), DimensionError);
}

TEST(Generator, ZeroOutputLayerGivesZeros) {
  Generator g = Generator::build(kSmall, 4);
  g.zero_output_layer();
  const Tensor out = g.forward(random_patch(2, 32, 64, 5));
  for (double v : out.data()) EXPECT_EQ(v, 0.0);
}

TEST(Generator, SameSeedSameParameters) {
  const auto a = Generator::build(kSmall, 9).named_parameters("g");
  const auto b = Generator::build(kSmall, 9).named_parameters("g");
  const auto c = Generator::build(kSmall, 10).named_parameters("g");
  ASSERT_EQ(a.size(), b.size());
  bool any_diff = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].name, b[i].name);
    ASSERT_EQ(a[i].tensor.numel(), b[i].tensor.numel());
    for (std::size_t j = 0; j < a[i].tensor.numel(); ++j) {
      EXPECT_EQ(a[i].tensor.data()[j], b[i].tensor.data()[j]);
      any_diff |= a[i].tensor.data()[j] != c[i].tensor.data()[j];
    }
  }
  EXPECT_TRUE(any_diff);
}

TEST(Generator, InitializationStatistics) {
  // normal(0, 0.02) weights, unit gain, zero offset and bias.
  const Generator g = Generator::build({1.0 / 4.0, 32, 128}, 3);
  for (const auto& p : g.named_parameters("g")) {
    const auto d = p.tensor.data();
    if (p.name.ends_with(".weight")) {
      double s = 0.0, q = 0.0;
      for (double v : d) {
        s += v;
        q += v * v;
      }
      const double n = static_cast<double>(d.size());
      if (n < 1000) continue;
      EXPECT_NEAR(s / n, 0.0, 0.003) << p.name;
      EXPECT_NEAR(std::sqrt(q / n), 0.02, 0.002) << p.name;
    } else if (p.name.ends_with(".gain")) {
      for (double v : d) EXPECT_EQ(v, 1.0);
    } else {
      for (double v : d) EXPECT_EQ(v, 0.0) << p.name;
    }
  }
}

TEST(Discriminator, OneScorePerSample) {
  const Discriminator d = Discriminator::build(kSmall, 1);
  EXPECT_EQ(d.forward(random_patch(3, 32, 128, 6)).shape(), (Shape{3}));
}

TEST(Discriminator, RejectsWrongPatch) {
  const Discriminator d = Discriminator::build(kSmall, 1);
  EXPECT_THROW(d.forward(random_patch(1, 32, 64, 6)), DimensionError);
}

TEST(Discriminator, ZeroOutputLayerGivesZeros) {
  Discriminator d = Discriminator::build(kSmall, 7);
  d.zero_output_layer();
  const Tensor out = d.forward(random_patch(2, 32, 128, 8));
  for (double v : out.data()) EXPECT_EQ(v, 0.0);
}

TEST(ParameterCount, MatchesLayerArithmetic) {
  for (double w : {1.0 / 32.0, 1.0 / 8.0, 0.3}) {
    const NetScale s{w, 32, 128};
    EXPECT_EQ(Generator::build(s, 0).parameter_count(), expected_generator(s)) << w;
    EXPECT_EQ(Discriminator::build(s, 0).parameter_count(), expected_discriminator(s)) << w;
  }
}

TEST(ParameterCount, FullWidthValues) {
  const NetScale full{1.0, 32, 128};
  EXPECT_EQ(expected_generator(full), 5775361u);
  EXPECT_EQ(expected_discriminator(full), 4886593u);
  EXPECT_EQ(Generator::build(full, 0).parameter_count(), 5775361u);
  EXPECT_EQ(Discriminator::build(full, 0).parameter_count(), 4886593u);
}

TEST(ParameterCount, ReferenceGeneratorIsLarger) {
  EXPECT_EQ(reference_cyclegan_vc_generator_params(24), 38058776u);
}
