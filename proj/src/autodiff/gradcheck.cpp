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

#include "advgan/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "advgan/ops.hpp"

namespace advgan {

namespace {

// Gradients that are identically zero (a bias feeding instance norm, say)
// leave only rounding noise; below this magnitude the difference is judged
// in absolute terms.
constexpr double kAbsoluteBelow = 1e-6;

GradCheckReport compare(const std::function<Tensor()>& fn, std::vector<Tensor>& leaves,
                        double tolerance, double step, std::uint64_t seed) {
  const Tensor probe_shape = fn();
  std::vector<double> coeffs(probe_shape.numel());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  std::bernoulli_distribution sign(0.5);
  for (auto& c : coeffs) c = sign(rng) ? unif(rng) : -unif(rng);

  auto objective = [&] { return dot_const(fn(), coeffs); };

  for (auto& leaf : leaves) leaf.zero_grad();
  objective().backward();

  GradCheckReport report;
  report.tolerance = tolerance;
  for (auto& leaf : leaves) {
    std::vector<double> analytic(leaf.numel(), 0.0);
    if (!leaf.grad().empty()) std::copy(leaf.grad().begin(), leaf.grad().end(), analytic.begin());

    double max_diff = 0.0, max_mag = 0.0;
    auto values = leaf.mutable_data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double orig = values[i];
      values[i] = orig + step;
      const double plus = objective().item();
      values[i] = orig - step;
      const double minus = objective().item();
      values[i] = orig;
      const double numeric = (plus - minus) / (2.0 * step);
      max_diff = std::max(max_diff, std::abs(analytic[i] - numeric));
      max_mag = std::max({max_mag, std::abs(analytic[i]), std::abs(numeric)});
    }
    const double rel = max_mag > kAbsoluteBelow ? max_diff / max_mag : max_diff;
    report.rel_error.push_back(rel);
    report.max_rel_error = std::max(report.max_rel_error, rel);
  }
  for (auto& leaf : leaves) leaf.zero_grad();
  report.passed = report.max_rel_error <= tolerance;
  return report;
}

}  // namespace

GradCheckReport grad_check(const std::function<Tensor(const std::vector<Tensor>&)>& fn,
                           const std::vector<Tensor>& inputs, double tolerance, double step,
                           std::uint64_t seed) {
  std::vector<Tensor> leaves;
  leaves.reserve(inputs.size());
  for (const auto& in : inputs) leaves.push_back(in.clone(true));
  return compare([&] { return fn(leaves); }, leaves, tolerance, step, seed);
}

GradCheckReport grad_check_leaves(const std::function<Tensor()>& fn,
                                  const std::vector<Tensor>& leaves, double tolerance,
                                  double step, std::uint64_t seed) {
  std::vector<Tensor> handles = leaves;
  return compare(fn, handles, tolerance, step, seed);
}

}  // namespace advgan
