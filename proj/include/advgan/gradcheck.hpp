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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "advgan/tensor.hpp"

namespace advgan {

struct GradCheckReport {
  // Per input: max_i |analytic_i - numeric_i| / max_i max(|analytic_i|, |numeric_i|),
  // or the plain difference when that denominator is below 1e-6.
  std::vector<double> rel_error;
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

// Compares backward() against central finite differences.
//
// `fn` maps the inputs to any tensor; a fixed random projection reduces it to
// a scalar so every output element contributes. Inputs are cloned into leaves
// that require gradients, and only those are perturbed.
GradCheckReport grad_check(const std::function<Tensor(const std::vector<Tensor>&)>& fn,
                           const std::vector<Tensor>& inputs, double tolerance = 1e-4,
                           double step = 1e-5, std::uint64_t seed = 17);

// Same comparison for tensors that are already gradient leaves, such as the
// parameters of a network: `fn` closes over them and they are perturbed in
// place (and restored). Used for whole generator and discriminator passes.
GradCheckReport grad_check_leaves(const std::function<Tensor()>& fn,
                                  const std::vector<Tensor>& leaves, double tolerance = 1e-4,
                                  double step = 1e-5, std::uint64_t seed = 17);

}  // namespace advgan
