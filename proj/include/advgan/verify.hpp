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
#include <string>
#include <vector>

#include "advgan/config.hpp"
#include "advgan/data.hpp"
#include "advgan/trainer.hpp"

namespace advgan {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool passed() const;
  // One JSON object per check, then a summary object, newline separated.
  std::string json_lines() const;
};

// Finite-difference checks of every differentiable op, the composed losses,
// and whole generator / discriminator passes at a reduced width.
SuiteReport gradcheck_suite(double tolerance = 1e-4, double step = 1e-5);

// Closed-form loss examples and randomized weight-normalization trials.
SuiteReport formula_suite(std::size_t trials = 1000, std::uint64_t seed = 5);

// gimGAN fake term against the vanilla one on random discriminators whose
// scores lie in [0, 1]. Reports the loss ratio and the parameter-gradient
// ratio, each compared with rho^2.
SuiteReport gim_scaling_suite(std::size_t states = 8, std::uint64_t seed = 11);

// Runs `steps` updates for both configs from identical seeds and data, and
// compares every metrics row and final tensor bit for bit.
struct CollapseResult {
  bool identical = false;
  std::uint64_t first_mismatch = 0;  // 0 when identical
  std::string detail;
};
CollapseResult compare_runs(const TrainConfig& a, const TrainConfig& b, const ToyCorpora& data,
                            std::uint64_t steps);

// The three variant-collapse identities over `steps` updates.
SuiteReport collapse_suite(std::uint64_t steps, const NetScale& scale, std::uint64_t seed = 3);

// formula + gim scaling (value and rho-gradient identities) + short collapse
// runs at a reduced width.
SuiteReport invariants_suite();

// Held-out toy evaluation of a trained state.
struct ToyEvalReport {
  std::size_t patches = 0;  // per direction
  std::size_t matched_xy = 0;
  std::size_t matched_yx = 0;
  double accuracy = 0.0;          // pooled over both directions
  double energy_deviation = 0.0;  // mean |frame energy(converted) - frame energy(source)|
};
inline constexpr std::uint64_t kToyEvalSeed = 900001;
ToyEvalReport toy_eval(const TrainerState& state, std::size_t patches = 100,
                       std::uint64_t seed = kToyEvalSeed);
SuiteReport toyeval_suite(const TrainerState& state, double threshold = 0.8);

struct ParamReport {
  double width = 1.0;
  std::size_t generator = 0;
  std::size_t discriminator = 0;
  std::size_t reference_generator = 0;  // 1-D gated-CNN generator on 24 MCEPs
  double reference_ratio = 0.0;         // reference / generator
};
ParamReport param_report(double width = 1.0);
std::string param_report_json(const ParamReport& r);

}  // namespace advgan
