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

#include "advgan/adversarial.hpp"

#include <algorithm>
#include <cmath>

#include "advgan/error.hpp"
#include "advgan/ops.hpp"

namespace advgan {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::kVanilla: return "vanilla";
    case Variant::kWeGan: return "wegan";
    case Variant::kGeweGan: return "gewegan";
    case Variant::kGimGan: return "gimgan";
  }
  return "unknown";
}

Variant parse_variant(const std::string& name) {
  if (name == "vanilla") return Variant::kVanilla;
  if (name == "wegan") return Variant::kWeGan;
  if (name == "gewegan") return Variant::kGeweGan;
  if (name == "gimgan") return Variant::kGimGan;
  throw ConfigError("unknown variant '" + name + "' (expected vanilla, wegan, gewegan, gimgan)");
}

VariantSelector VariantSelector::with_defaults(Variant v) {
  VariantSelector s;
  s.variant = v;
  switch (v) {
    case Variant::kVanilla: break;
    case Variant::kWeGan: s.eta_gen = 0.1; break;
    case Variant::kGeweGan: s.eta_gen = 0.9; s.eta_dis = 0.9; break;
    case Variant::kGimGan: s.rho_gen = 0.9; break;
  }
  return s;
}

void VariantSelector::validate() const {
  if (!(eta_gen >= 0.0) || !(eta_dis >= 0.0)) {
    throw ConfigError("eta_gen and eta_dis must be nonnegative");
  }
  if (!(rho_gen >= 0.0 && rho_gen <= 1.0)) {
    throw ConfigError("rho_gen must lie in [0, 1], got " + std::to_string(rho_gen));
  }
}

namespace {

std::vector<double> exp_min_weights(std::span<const double> scores, double eta) {
  if (scores.empty()) throw DimensionError("weights need at least one score");
  std::vector<double> w(scores.size());
  for (std::size_t j = 0; j < scores.size(); ++j) {
    w[j] = std::exp(eta * std::min(0.0, scores[j]));
  }
  double total = 0.0;
  for (double v : w) total += v;
  for (auto& v : w) v /= total;
  return w;
}

std::vector<double> uniform(std::size_t m) {
  return std::vector<double>(m, 1.0 / static_cast<double>(m));
}

std::vector<double> scores_of(const Tensor& t) { return {t.data().begin(), t.data().end()}; }

}  // namespace

std::vector<double> gen_weights(std::span<const double> scores, double eta_gen) {
  return exp_min_weights(scores, eta_gen);
}

std::vector<double> dis_weights(std::span<const double> fake_scores, double eta_dis) {
  return exp_min_weights(fake_scores, eta_dis);
}

std::vector<double> soft_labels(std::span<const double> fake_scores, double rho_gen) {
  if (!(rho_gen >= 0.0 && rho_gen <= 1.0)) {
    throw ConfigError("rho_gen must lie in [0, 1], got " + std::to_string(rho_gen));
  }
  std::vector<double> labels(fake_scores.size());
  for (std::size_t j = 0; j < labels.size(); ++j) {
    labels[j] = (1.0 - rho_gen) * std::clamp(fake_scores[j], 0.0, 1.0);
  }
  return labels;
}

double weight_entropy(std::span<const double> weights) {
  double h = 0.0;
  for (double w : weights) {
    if (w > 0.0) h -= w * std::log(w);
  }
  return std::max(0.0, h);
}

DiscriminatorLoss d_fake_term(const Tensor& fake_scores, const VariantSelector& variant) {
  if (fake_scores.rank() != 1) throw DimensionError("d_fake_term: scores must be a vector");
  const std::size_t m = fake_scores.numel();
  const auto fake = scores_of(fake_scores);
  std::vector<double> weights = uniform(m);
  std::vector<double> targets(m, 0.0);
  switch (variant.variant) {
    case Variant::kVanilla:
    case Variant::kWeGan: break;
    case Variant::kGeweGan: weights = dis_weights(fake, variant.eta_dis); break;
    case Variant::kGimGan: targets = soft_labels(fake, variant.rho_gen); break;
  }
  Tensor loss = weighted_square_error(fake_scores, targets, weights);
  return {std::move(loss), std::move(weights)};
}

DiscriminatorLoss d_loss(const Tensor& real_scores, const Tensor& fake_scores,
                         const VariantSelector& variant) {
  if (real_scores.rank() != 1 || fake_scores.rank() != 1) {
    throw DimensionError("d_loss: scores must be vectors");
  }
  const std::size_t m_real = real_scores.numel();
  const Tensor real_term = weighted_square_error(real_scores, std::vector<double>(m_real, 1.0),
                                                 uniform(m_real));
  DiscriminatorLoss fake = d_fake_term(fake_scores, variant);
  return {add(real_term, fake.loss), std::move(fake.fake_weights)};
}

GeneratorAdvLoss g_adv_loss(const Tensor& fake_scores, const VariantSelector& variant) {
  if (fake_scores.rank() != 1) throw DimensionError("g_adv_loss: scores must be a vector");
  const std::size_t m = fake_scores.numel();
  std::vector<double> weights = uniform(m);
  if (variant.variant == Variant::kWeGan || variant.variant == Variant::kGeweGan) {
    weights = gen_weights(scores_of(fake_scores), variant.eta_gen);
  }
  Tensor loss = weighted_square_error(fake_scores, std::vector<double>(m, 1.0), weights);
  return {std::move(loss), std::move(weights)};
}

Tensor cycle_loss(const Tensor& x, const Tensor& x_cyc, const Tensor& y, const Tensor& y_cyc) {
  return add(l1_distance(x_cyc, x), l1_distance(y_cyc, y));
}

Tensor energy_loss(const Tensor& x, const Tensor& gx, const Tensor& y, const Tensor& gy,
                   double lambda_energy) {
  if (!(lambda_energy >= 0.0)) throw ConfigError("lambda_e must be nonnegative");
  const Tensor ex = l1_distance(frame_mean(gx), frame_mean(x));
  const Tensor ey = l1_distance(frame_mean(gy), frame_mean(y));
  return scale(add(ex, ey), lambda_energy);
}

Tensor total_generator_loss(const GeneratorLossParts& parts, const LossWeights& weights) {
  if (!(weights.lambda_cycle >= 0.0)) throw ConfigError("lambda_c must be nonnegative");
  return add(add(add(parts.adv_xy, parts.adv_yx), scale(parts.cycle, weights.lambda_cycle)),
             parts.energy);
}

}  // namespace advgan
