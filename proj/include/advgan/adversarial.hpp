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

#pragma once

#include <span>
#include <string>
#include <vector>

#include "advgan/tensor.hpp"

namespace advgan {

// Adversarial training regime.
//
//   vanilla  least-squares cycleGAN (real target 1, fake target 0)
//   wegan    generator loss reweighted sample-wise by gen_weights(eta_gen)
//   gewegan  wegan plus the discriminator's fake term reweighted by
//            dis_weights(eta_dis)
//   gimgan   discriminator's fake target replaced by the soft label
//            (1 - rho_gen) * clamp(D(G(x)), 0, 1)
enum class Variant { kVanilla, kWeGan, kGeweGan, kGimGan };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& name);

struct VariantSelector {
  Variant variant = Variant::kVanilla;
  double eta_gen = 0.0;
  double eta_dis = 0.0;
  double rho_gen = 1.0;

  // Hyperparameters used for each regime when none are given explicitly:
  // eta_gen 0.1 (wegan), eta_gen = eta_dis = 0.9 (gewegan), rho_gen 0.9
  // (gimgan).
  static VariantSelector with_defaults(Variant v);
  void validate() const;
};

struct LossWeights {
  double lambda_cycle = 0.3;
  double lambda_energy = 1.0;
};

// w_j = exp(eta * min(0, D_j)) normalized to unit sum. The result is a plain
// vector of constants, never part of the graph.
std::vector<double> gen_weights(std::span<const double> scores, double eta_gen);
std::vector<double> dis_weights(std::span<const double> fake_scores, double eta_dis);

// (1 - rho) * clamp(D_j, 0, 1); rho must lie in [0, 1].
std::vector<double> soft_labels(std::span<const double> fake_scores, double rho_gen);

// Shannon entropy (nats) of a weight vector; ln(m) for uniform weights.
double weight_entropy(std::span<const double> weights);

struct DiscriminatorLoss {
  Tensor loss;
  std::vector<double> fake_weights;  // effective per-sample fake-term weights
};

// The fake-sample half of d_loss on its own.
DiscriminatorLoss d_fake_term(const Tensor& fake_scores, const VariantSelector& variant);

// Least-squares discriminator loss for one discriminator. `fake_scores` must
// come from detached generator outputs.
DiscriminatorLoss d_loss(const Tensor& real_scores, const Tensor& fake_scores,
                         const VariantSelector& variant);

struct GeneratorAdvLoss {
  Tensor loss;
  std::vector<double> weights;  // effective per-sample weights
};

// Least-squares generator adversarial loss (target 1); `fake_scores` carry
// gradients into the generator.
GeneratorAdvLoss g_adv_loss(const Tensor& fake_scores, const VariantSelector& variant);

// mean|x_cyc - x| + mean|y_cyc - y|.
Tensor cycle_loss(const Tensor& x, const Tensor& x_cyc, const Tensor& y, const Tensor& y_cyc);

// lambda_e * (mean_t |frame_mean(gx) - frame_mean(x)| + same for y, gy).
Tensor energy_loss(const Tensor& x, const Tensor& gx, const Tensor& y, const Tensor& gy,
                   double lambda_energy);

struct GeneratorLossParts {
  Tensor adv_xy;  // G_{X->Y} against D_Y
  Tensor adv_yx;  // G_{Y->X} against D_X
  Tensor cycle;   // unweighted cycle loss
  Tensor energy;  // energy loss, lambda_e already applied
};

// adv_xy + adv_yx + lambda_c * cycle + energy.
Tensor total_generator_loss(const GeneratorLossParts& parts, const LossWeights& weights);

}  // namespace advgan
