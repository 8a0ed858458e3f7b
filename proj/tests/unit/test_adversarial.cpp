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
#include <numeric>
#include <random>

#include "advgan/adversarial.hpp"
#include "advgan/error.hpp"
#include "advgan/ops.hpp"

using namespace advgan;

namespace {

VariantSelector vanilla() { return VariantSelector::with_defaults(Variant::kVanilla); }

VariantSelector wegan(double eta) {
  auto v = VariantSelector::with_defaults(Variant::kWeGan);
  v.eta_gen = eta;
  return v;
}

VariantSelector gewegan(double eta_gen, double eta_dis) {
  auto v = VariantSelector::with_defaults(Variant::kGeweGan);
  v.eta_gen = eta_gen;
  v.eta_dis = eta_dis;
  return v;
}

VariantSelector gimgan(double rho) {
  auto v = VariantSelector::with_defaults(Variant::kGimGan);
  v.rho_gen = rho;
  return v;
}

// Independent evaluation of exp(eta * min(0, d)) / sum.
std::vector<double> oracle_weights(const std::vector<double>& d, double eta) {
  std::vector<double> w(d.size());
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) s += w[i] = std::exp(eta * std::min(0.0, d[i]));
  for (auto& x : w) x /= s;
  return w;
}

Tensor leaf(std::vector<double> v) {
  const std::size_t n = v.size();
  return Tensor::from({n}, std::move(v), true);
}

Tensor patch(std::size_t n, std::size_t b, std::size_t t, std::uint64_t seed, bool grad = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n * b * t);
  for (auto& x : v) x = d(rng);
  return Tensor::from({n, 1, b, t}, std::move(v), grad);
}

}  // namespace

TEST(Variant, NamesRoundTrip) {
  for (Variant v : {Variant::kVanilla, Variant::kWeGan, Variant::kGeweGan, Variant::kGimGan}) {
    EXPECT_EQ(parse_variant(variant_name(v)), v);
  }
  EXPECT_THROW(parse_variant("lsgan"), ConfigError);
}

TEST(Variant, DefaultsAndValidation) {
  EXPECT_EQ(VariantSelector::with_defaults(Variant::kWeGan).eta_gen, 0.1);
  EXPECT_EQ(VariantSelector::with_defaults(Variant::kGeweGan).eta_dis, 0.9);
  EXPECT_EQ(VariantSelector::with_defaults(Variant::kGimGan).rho_gen, 0.9);
  EXPECT_THROW(gimgan(1.5).validate(), ConfigError);
  EXPECT_THROW(gimgan(-0.1).validate(), ConfigError);
  EXPECT_THROW(wegan(-1.0).validate(), ConfigError);
}

TEST(GenWeights, HandComputedExample) {
  const auto w = gen_weights(std::vector<double>{-1.0, 0.5}, 0.1);
  EXPECT_NEAR(w[0], 0.475021, 1e-6);
  EXPECT_NEAR(w[1], 0.524979, 1e-6);
}

TEST(GenWeights, DegenerateCases) {
  for (double x : gen_weights(std::vector<double>{-3.0, 0.2, 5.0, -0.1}, 0.0)) EXPECT_EQ(x, 0.25);
  EXPECT_EQ(gen_weights(std::vector<double>{-7.0}, 0.5)[0], 1.0);
  for (double x : dis_weights(std::vector<double>{0.1, 0.0, 3.0}, 0.9)) {
    EXPECT_DOUBLE_EQ(x, 1.0 / 3.0);
  }
  for (double x : dis_weights(std::vector<double>{-2.0, -2.0}, 0.9)) EXPECT_EQ(x, 0.5);
  EXPECT_THROW(gen_weights(std::vector<double>{}, 0.1), DimensionError);
}

TEST(GenWeights, RandomizedMatchesOracleAndSumsToOne) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> score(-5.0, 5.0), eta(0.0, 3.0);
  std::uniform_int_distribution<int> size(1, 16);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> d(static_cast<std::size_t>(size(rng)));
    for (auto& x : d) x = score(rng);
    const double e = eta(rng);
    const auto w = gen_weights(d, e);
    const auto ref = oracle_weights(d, e);
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      EXPECT_NEAR(w[i], ref[i], 1e-14);
      EXPECT_GT(w[i], 0.0);
      s += w[i];
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(GenWeights, MonotoneInScore) {
  // A lower (more negative) score never gets more weight than a higher one.
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> score(-4.0, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> d(6);
    for (auto& x : d) x = score(rng);
    const auto w = gen_weights(d, 0.7);
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (std::size_t j = 0; j < d.size(); ++j) {
        if (d[i] <= d[j]) {
          EXPECT_LE(w[i], w[j] + 1e-15);
        }
      }
    }
  }
}

TEST(GenWeights, SmallEtaIsNearlyUniform) {
  const std::vector<double> d{-3.0, -1.0, 0.5, 2.0};
  for (const auto& w : {gen_weights(d, 1e-7), dis_weights(d, 1e-7)}) {
    for (double x : w) EXPECT_LE(std::abs(x - 0.25), 1e-6);
  }
}

TEST(WeightEntropy, UniformIsLogM) {
  EXPECT_NEAR(weight_entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}), std::log(4.0), 1e-15);
  EXPECT_EQ(weight_entropy(std::vector<double>{1.0}), 0.0);
  EXPECT_EQ(weight_entropy(std::vector<double>{1.0, 0.0}), 0.0);
}

TEST(SoftLabels, Examples) {
  for (double x : soft_labels(std::vector<double>{-1.0, 0.3, 2.0}, 1.0)) EXPECT_EQ(x, 0.0);
  EXPECT_EQ(soft_labels(std::vector<double>{0.8}, 0.0)[0], 0.8);
  EXPECT_NEAR(soft_labels(std::vector<double>{0.8}, 0.9)[0], 0.08, 1e-12);
  const auto clamped = soft_labels(std::vector<double>{-0.5, 1.7}, 0.5);
  EXPECT_EQ(clamped[0], 0.0);
  EXPECT_EQ(clamped[1], 0.5);
}

TEST(SoftLabels, RangeProperty) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> score(-3.0, 3.0), rho(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double r = rho(rng);
    std::vector<double> d(5);
    for (auto& x : d) x = score(rng);
    for (double l : soft_labels(d, r)) {
      EXPECT_GE(l, 0.0);
      EXPECT_LE(l, 1.0 - r + 1e-15);
    }
  }
  EXPECT_THROW(soft_labels(std::vector<double>{0.5}, 1.2), ConfigError);
}

TEST(DLoss, Examples) {
  EXPECT_EQ(d_loss(leaf({1.0}), leaf({0.0}), vanilla()).loss.item(), 0.0);
  EXPECT_DOUBLE_EQ(d_loss(leaf({0.5}), leaf({0.5}), vanilla()).loss.item(), 0.5);
}

TEST(DLoss, GimGanUsesSoftTarget) {
  // real [1] contributes 0; fake 0.8 against 0.08 gives 0.72^2.
  EXPECT_NEAR(d_loss(leaf({1.0}), leaf({0.8}), gimgan(0.9)).loss.item(), 0.72 * 0.72, 1e-15);
  EXPECT_EQ(d_loss(leaf({1.0}), leaf({0.8}), gimgan(0.0)).loss.item(), 0.0);
}

TEST(DLoss, GeweGanWeightsFakeTerm) {
  const std::vector<double> fake{-1.0, 0.5};
  const auto w = oracle_weights(fake, 0.9);
  const double expect = w[0] * 1.0 + w[1] * 0.25;
  const auto r = d_loss(leaf({1.0, 1.0}), leaf(fake), gewegan(0.1, 0.9));
  EXPECT_NEAR(r.loss.item(), expect, 1e-15);
  EXPECT_NEAR(r.fake_weights[0], w[0], 1e-15);
}

TEST(DLoss, WeGanLeavesDiscriminatorUnweighted) {
  const std::vector<double> real{0.3, 1.2}, fake{-1.0, 0.5};
  EXPECT_EQ(d_loss(leaf(real), leaf(fake), wegan(0.1)).loss.item(),
            d_loss(leaf(real), leaf(fake), vanilla()).loss.item());
}

TEST(DLoss, ShapeMismatchIsRejected) {
  EXPECT_THROW(d_loss(Tensor::zeros({2, 1}), leaf({0.0}), vanilla()), DimensionError);
}

TEST(GAdvLoss, Examples) {
  EXPECT_EQ(g_adv_loss(leaf({1.0}), vanilla()).loss.item(), 0.0);
  EXPECT_EQ(g_adv_loss(leaf({-0.3}), wegan(0.1)).loss.item(),
            g_adv_loss(leaf({-0.3}), vanilla()).loss.item());
  EXPECT_NEAR(g_adv_loss(leaf({-1.0, 0.5}), wegan(0.1)).loss.item(), 2.031329, 1e-6);
}

TEST(GAdvLoss, GimGanMatchesVanilla) {
  // The soft label only touches the discriminator.
  const std::vector<double> d{-0.4, 0.9, 1.3};
  EXPECT_EQ(g_adv_loss(leaf(d), gimgan(0.9)).loss.item(), g_adv_loss(leaf(d), vanilla()).loss.item());
}

TEST(GAdvLoss, WeightedGradientEqualsFrozenWeights) {
  // With the weights treated as constants, dL/dD_j = 2 w_j (D_j - 1).
  const std::vector<double> d{-1.5, -0.2, 0.7, 1.1};
  for (const auto& sel : {wegan(0.4), gewegan(0.4, 0.9)}) {
    Tensor s = leaf(d);
    g_adv_loss(s, sel).loss.backward();
    const auto w = oracle_weights(d, 0.4);
    for (std::size_t j = 0; j < d.size(); ++j) {
      EXPECT_NEAR(s.grad()[j], 2.0 * w[j] * (d[j] - 1.0), 1e-14);
    }
  }
}

TEST(DFakeTerm, FrozenConstantGradients) {
  const std::vector<double> d{-0.5, 0.2, 0.6, 1.4};
  {
    Tensor s = leaf(d);
    d_fake_term(s, gimgan(0.9)).loss.backward();
    const auto l = soft_labels(d, 0.9);
    for (std::size_t j = 0; j < d.size(); ++j) {
      EXPECT_NEAR(s.grad()[j], 2.0 * (d[j] - l[j]) / 4.0, 1e-14);
    }
  }
  {
    Tensor s = leaf(d);
    d_fake_term(s, gewegan(0.1, 0.9)).loss.backward();
    const auto w = oracle_weights(d, 0.9);
    for (std::size_t j = 0; j < d.size(); ++j) {
      EXPECT_NEAR(s.grad()[j], 2.0 * w[j] * d[j], 1e-14);
    }
  }
}

TEST(DFakeTerm, GimGanValueIsRhoSquaredTimesVanilla) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> d(4);
    for (auto& x : d) x = u(rng);
    const double rho = u(rng);
    const double soft = d_fake_term(leaf(d), gimgan(rho)).loss.item();
    const double hard = d_fake_term(leaf(d), vanilla()).loss.item();
    EXPECT_NEAR(soft, rho * rho * hard, 1e-14);
  }
}

TEST(CycleLoss, Examples) {
  const Tensor x = patch(2, 4, 8, 1), y = patch(2, 4, 8, 2);
  EXPECT_EQ(cycle_loss(x, x, y, y).item(), 0.0);
  EXPECT_NEAR(cycle_loss(x, add_scalar(x, 1.0), y, y).item(), 1.0, 1e-15);
  EXPECT_THROW(cycle_loss(x, patch(2, 4, 4, 3), y, y), DimensionError);
}

TEST(EnergyLoss, Examples) {
  const Tensor x = patch(2, 4, 8, 1), y = patch(2, 4, 8, 2);
  EXPECT_EQ(energy_loss(x, x, y, y, 1.0).item(), 0.0);
  EXPECT_NEAR(energy_loss(x, add_scalar(x, -0.7), y, y, 1.0).item(), 0.7, 1e-14);
  EXPECT_NEAR(energy_loss(x, add_scalar(x, -0.7), y, y, 0.5).item(), 0.35, 1e-14);

  // Permuting bins within each frame leaves frame means unchanged.
  std::vector<double> v(x.data().begin(), x.data().end()), p(v.size());
  for (std::size_t n = 0; n < 2; ++n)
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t t = 0; t < 8; ++t) p[((n * 4 + (3 - b)) * 8) + t] = v[(n * 4 + b) * 8 + t];
  const Tensor xp = Tensor::from(x.shape(), p);
  EXPECT_NEAR(energy_loss(x, xp, y, y, 1.0).item(), 0.0, 1e-15);
}

TEST(TotalLoss, Examples) {
  const GeneratorLossParts parts{Tensor::scalar(0.5), Tensor::scalar(0.5), Tensor::scalar(2.0),
                                 Tensor::scalar(0.1)};
  EXPECT_NEAR(total_generator_loss(parts, {0.3, 1.0}).item(), 1.7, 1e-15);
  EXPECT_NEAR(total_generator_loss(parts, {0.0, 1.0}).item(), 1.1, 1e-15);
  const GeneratorLossParts zero{Tensor::scalar(0.0), Tensor::scalar(0.0), Tensor::scalar(0.0),
                                Tensor::scalar(0.0)};
  EXPECT_EQ(total_generator_loss(zero, {}).item(), 0.0);
}

TEST(Losses, NoGradientThroughScoreDerivedConstants) {
  // Changing a constant through a detached path must not alter the graph's
  // dependence: d_loss on detached fakes yields no gradient for their source.
  Tensor src = patch(1, 2, 2, 5, true);
  Tensor fake_scores = reshape(stop_gradient(sum(src)), {1});
  Tensor real_scores = leaf({0.7});
  d_loss(real_scores, fake_scores, gimgan(0.9)).loss.backward();
  for (double g : src.grad()) EXPECT_EQ(g, 0.0);
  EXPECT_NE(real_scores.grad()[0], 0.0);
}
