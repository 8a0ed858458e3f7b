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
#include <span>
#include <vector>

#include "advgan/tensor.hpp"

namespace advgan {

struct AdamHyper {
  double beta1 = 0.5;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Moments for one parameter group, index-aligned with the group's tensors.
struct AdamState {
  AdamHyper hyper;
  std::uint64_t step = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;

  static AdamState for_params(std::span<const Tensor> params, AdamHyper hyper = {});
};

// One bias-corrected Adam update of every parameter from its accumulated
// gradient. Parameters without a gradient buffer are treated as zero-grad.
void adam_step(std::span<Tensor> params, AdamState& state, double lr);

}  // namespace advgan
