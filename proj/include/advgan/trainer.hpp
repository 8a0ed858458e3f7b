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
#include <random>
#include <string>
#include <vector>

#include "advgan/adam.hpp"
#include "advgan/config.hpp"
#include "advgan/data.hpp"
#include "advgan/features.hpp"
#include "advgan/networks.hpp"

namespace advgan {

// Everything needed to continue a run bit-identically.
struct TrainerState {
  TrainConfig config;
  Generator g_xy, g_yx;
  Discriminator d_x, d_y;
  AdamState adam_g_xy, adam_g_yx, adam_d_x, adam_d_y;
  std::uint64_t iteration = 0;
  std::mt19937_64 rng;
  NormStats stats_x, stats_y;

  static TrainerState initialize(const TrainConfig& config, NormStats stats_x, NormStats stats_y);

  // Checkpoint names: g_xy.*, g_yx.*, d_x.*, d_y.*.
  std::vector<NamedTensor> named_tensors() const;
};

struct StepMetrics {
  std::uint64_t iter = 0;
  double d_x = 0, d_y = 0;
  double g_adv_xy = 0, g_adv_yx = 0;
  double cycle = 0;   // without lambda_c
  double energy = 0;  // without lambda_e
  double mean_d_real_x = 0, mean_d_fake_x = 0;
  double mean_d_real_y = 0, mean_d_fake_y = 0;
  double w_entropy_g = 0, w_entropy_d = 0;
};

inline constexpr const char* kMetricsHeader =
    "iter,d_x,d_y,g_adv_xy,g_adv_yx,cycle,energy,mean_d_real_x,mean_d_fake_x,"
    "mean_d_real_y,mean_d_fake_y,w_entropy_g,w_entropy_d";

std::string format_metrics_row(const StepMetrics& m);

// One alternating update: both discriminators on real and detached fake
// patches, then both generators on the full objective. `batch_x` and
// `batch_y` are normalized [m, 1, bins, frames] patches.
StepMetrics train_step(TrainerState& state, const Tensor& batch_x, const Tensor& batch_y);

// Uniformly random crops of the configured width from normalized grams.
class CropSampler {
 public:
  CropSampler(const Corpus& corpus, std::size_t width);
  Tensor sample(std::size_t m, std::mt19937_64& rng) const;

 private:
  std::vector<EnvelopeGram> normalized_;
  std::size_t width_;
  std::size_t bins_;
};

using StepObserver = std::function<void(const StepMetrics&, const TrainerState&)>;

// Runs from state.iteration up to config.iterations, calling `observer`
// after every step.
void train(TrainerState& state, const Corpus& corpus_x, const Corpus& corpus_y,
           const StepObserver& observer = {});

// Training with a run directory: config.txt, metrics.csv and checkpoints
// (ckpt_<iter>.cgvc every checkpoint_every steps, plus latest.cgvc). When the
// state was restored from a checkpoint, metrics rows past its iteration are
// dropped before new rows are appended.
void train_to_dir(TrainerState& state, const Corpus& corpus_x, const Corpus& corpus_y,
                  const std::string& run_dir);

enum class Direction { kXtoY, kYtoX };

Direction parse_direction(const std::string& s);

// Whole-utterance conversion. Raw grams are normalized with the source
// domain's stats first; frames are edge-padded to a multiple of 4, passed
// through the generator once, trimmed, and de-normalized with the target
// domain's stats.
EnvelopeGram convert(const TrainerState& state, const EnvelopeGram& gram, Direction direction);

// "CGVC" v1 binary checkpoint, written atomically.
void save_checkpoint(const TrainerState& state, const std::string& path);
TrainerState load_checkpoint(const std::string& path);

// Loads `path` into an existing state, requiring identical tensor names and
// shapes (e.g. the same width multiplier).
void restore_checkpoint(TrainerState& state, const std::string& path);

}  // namespace advgan
