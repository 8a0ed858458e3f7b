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

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "advgan/features.hpp"

namespace advgan {

struct ManifestEntry {
  std::string relative_path;
  std::size_t frames = 0;
  std::string status;  // "ok" or "error: <reason>"
};

// Grams of one speaker (or toy domain) plus the statistics fitted on them.
struct Corpus {
  std::string speaker;
  std::vector<std::string> names;  // gram file stems, index-aligned with grams
  std::vector<EnvelopeGram> grams;
  NormStats stats;
  std::vector<ManifestEntry> manifest;

  std::size_t min_frames() const;
};

// On-disk layout: <dir>/manifest.tsv, <dir>/stats.nsta, <dir>/grams/<stem>.egrm.
void save_corpus(const std::string& dir, const Corpus& corpus);
Corpus load_corpus(const std::string& dir);

struct IngestResult {
  Corpus corpus;
  std::size_t failures = 0;
};

// Runs the analysis chain over every regular file below `wav_dir` (sorted by
// relative path). Files that fail are recorded in the manifest and skipped.
// Throws when the directory is missing or yields no usable clip.
IngestResult ingest(const std::string& wav_dir, NormMode mode = NormMode::kPooled);

// Two Gaussian formant bumps over a flat log-amplitude floor.
//
//   value[b, t] = floor_u + sum_k a_k(t) * exp(-(b - mu_k - j_k)^2 / (2 sigma^2))
//   a_k(t)      = a_k * (1 + depth * sin(2 pi t / period + phi_k))
//
// floor_u, a_k, j_k and phi_k are drawn once per utterance. The defaults keep
// the floor fixed and the amplitude spread narrow: the networks normalize every
// hidden channel per instance, so a per-utterance offset or overall gain of the
// input never reaches the output and could not be converted back.
struct ToyDomainSpec {
  std::array<double, 2> centers{6.0, 20.0};
  double sigma = 2.0;
  double amp_min = 1.8;
  double amp_max = 2.2;
  double floor = -1.0;
  double floor_jitter = 0.0;
  double modulation_depth = 0.2;
  double modulation_period = 64.0;  // frames
  double center_jitter = 0.5;       // bins, uniform +/-
  std::size_t bins = kMelBins;

  void validate() const;
};

ToyDomainSpec toy_domain_x();
ToyDomainSpec toy_domain_y();

inline constexpr std::size_t kToyPatches = 200;
inline constexpr std::size_t kToyFrames = 128;

EnvelopeGram synth_sample(const ToyDomainSpec& spec, std::size_t frames, std::mt19937_64& rng);

struct ToyCorpora {
  Corpus x;
  Corpus y;
};

ToyCorpora make_toy_corpora(std::uint64_t seed, std::size_t patches = kToyPatches,
                            std::size_t frames = kToyFrames);

// Two highest local maxima of the frame-averaged envelope, ascending by bin.
std::array<std::size_t, 2> dominant_peaks(const EnvelopeGram& gram);

// Both dominant peaks within `tolerance` bins of the given centers.
bool peaks_match(const EnvelopeGram& gram, const std::array<double, 2>& centers,
                 double tolerance = 1.0);

}  // namespace advgan
