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
#include <map>
#include <string>
#include <vector>

#include "advgan/adversarial.hpp"
#include "advgan/networks.hpp"

namespace advgan {

struct TrainConfig {
  VariantSelector variant;
  LossWeights loss;
  double lr_g = 0.0002;
  double lr_d = 0.0001;
  std::size_t batch = 1;
  std::uint64_t iterations = 5000;
  std::uint64_t seed = 0;
  NetScale scale{0.125, 32, 128};
  bool deterministic = true;
  std::uint64_t checkpoint_every = 1000;

  void validate() const;
};

// key=value configuration, one entry per line, '#' starts a comment.
//
// Keys: variant, eta_gen, eta_dis, rho_gen, lambda_c, lambda_e, lr_g, lr_d,
// batch, iterations, seed, width, patch_width, deterministic,
// checkpoint_every. Unknown keys are rejected. Variant hyperparameters that
// are not set explicitly take the selected variant's defaults.
class RunConfig {
 public:
  static const std::vector<std::string>& known_keys();

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void load_text(const std::string& text, const std::string& origin = "<text>");
  void load_file(const std::string& path);

  TrainConfig resolve() const;

 private:
  std::map<std::string, std::string> values_;
};

// Every key of a resolved config, in known_keys() order, as key=value lines.
std::string format_config(const TrainConfig& config);

// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

}  // namespace advgan
