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

#include "advgan/data.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "../common/binio.hpp"
#include "advgan/error.hpp"
#include "advgan/log.hpp"

namespace fs = std::filesystem;

namespace advgan {

std::size_t Corpus::min_frames() const {
  std::size_t m = grams.empty() ? 0 : grams.front().frames;
  for (const auto& g : grams) m = std::min(m, g.frames);
  return m;
}

namespace {

std::string gram_stem(const std::string& relative_path) {
  std::string stem = fs::path(relative_path).replace_extension().generic_string();
  std::replace(stem.begin(), stem.end(), '/', '_');
  return stem;
}

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries) {
  std::string text;
  for (const auto& e : entries) {
    text += e.relative_path + '\t' + std::to_string(e.frames) + '\t' + e.status + '\n';
  }
  binio::write_file_atomic(path, text);
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::istringstream in(binio::read_file(path));
  std::vector<ManifestEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto a = line.find('\t');
    const auto b = a == std::string::npos ? a : line.find('\t', a + 1);
    if (b == std::string::npos) throw FormatError(path + ": malformed manifest line '" + line + "'");
    ManifestEntry e;
    e.relative_path = line.substr(0, a);
    try {
      e.frames = std::stoul(line.substr(a + 1, b - a - 1));
    } catch (const std::exception&) {
      throw FormatError(path + ": bad frame count in '" + line + "'");
    }
    e.status = line.substr(b + 1);
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace

void save_corpus(const std::string& dir, const Corpus& corpus) {
  std::error_code ec;
  fs::create_directories(fs::path(dir) / "grams", ec);
  if (ec) throw IoError("cannot create corpus directory '" + dir + "': " + ec.message());
  for (std::size_t i = 0; i < corpus.grams.size(); ++i) {
    write_gram((fs::path(dir) / "grams" / (corpus.names[i] + ".egrm")).string(), corpus.grams[i]);
  }
  write_stats((fs::path(dir) / "stats.nsta").string(), corpus.stats);
  write_manifest((fs::path(dir) / "manifest.tsv").string(), corpus.manifest);
}

Corpus load_corpus(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("corpus directory '" + dir + "' does not exist");
  Corpus corpus;
  corpus.speaker = fs::path(dir).filename().string();
  corpus.manifest = read_manifest((fs::path(dir) / "manifest.tsv").string());
  corpus.stats = read_stats((fs::path(dir) / "stats.nsta").string());
  for (const auto& e : corpus.manifest) {
    if (e.status != "ok") continue;
    const std::string stem = gram_stem(e.relative_path);
    EnvelopeGram g = read_gram((fs::path(dir) / "grams" / (stem + ".egrm")).string());
    g.speaker = corpus.speaker;
    corpus.names.push_back(stem);
    corpus.grams.push_back(std::move(g));
  }
  if (corpus.grams.empty()) throw ConfigError("corpus '" + dir + "' contains no grams");
  std::size_t frames = 0;
  for (const auto& g : corpus.grams) frames += g.frames;
  corpus.stats.count = frames;
  return corpus;
}

IngestResult ingest(const std::string& wav_dir, NormMode mode) {
  if (!fs::is_directory(wav_dir)) throw IoError("input directory '" + wav_dir + "' does not exist");
  std::vector<std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(wav_dir)) {
    if (entry.is_regular_file()) {
      files.push_back(fs::relative(entry.path(), wav_dir).generic_string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("input directory '" + wav_dir + "' is empty");

  IngestResult result;
  result.corpus.speaker = fs::path(wav_dir).filename().string();
  const MelFilterbank fb = build_mel_filterbank();
  for (const auto& rel : files) {
    ManifestEntry e;
    e.relative_path = rel;
    try {
      const AudioClip clip = read_wav((fs::path(wav_dir) / rel).string());
      EnvelopeGram g = extract_gram(clip, fb);
      g.speaker = result.corpus.speaker;
      e.frames = g.frames;
      e.status = "ok";
      result.corpus.names.push_back(gram_stem(rel));
      result.corpus.grams.push_back(std::move(g));
      log_debug("ingested " + rel + " (" + std::to_string(e.frames) + " frames)");
    } catch (const Error& err) {
      e.status = std::string("error: ") + err.what();
      ++result.failures;
      log_error("skipping " + rel + ": " + err.what());
    }
    result.corpus.manifest.push_back(std::move(e));
  }
  if (result.corpus.grams.empty()) {
    throw ConfigError("no usable audio in '" + wav_dir + "'");
  }
  result.corpus.stats = fit_norm(result.corpus.grams, mode);
  return result;
}

// ---------------------------------------------------------------------------
// Toy domains

void ToyDomainSpec::validate() const {
  if (!(centers[0] > 0.0 && centers[0] < centers[1] &&
        centers[1] < static_cast<double>(bins))) {
    throw ConfigError("toy domain centers must satisfy 0 < mu1 < mu2 < bins");
  }
  if (!(sigma > 0.0)) throw ConfigError("toy domain sigma must be positive");
  if (!(amp_min <= amp_max) || !(modulation_period > 0.0)) {
    throw ConfigError("toy domain amplitude range or modulation period invalid");
  }
}

ToyDomainSpec toy_domain_x() { return {}; }

ToyDomainSpec toy_domain_y() {
  ToyDomainSpec s;
  s.centers = {10.0, 24.0};
  return s;
}

EnvelopeGram synth_sample(const ToyDomainSpec& spec, std::size_t frames, std::mt19937_64& rng) {
  spec.validate();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  const double floor = spec.floor + uniform(-spec.floor_jitter, spec.floor_jitter);
  std::array<double, 2> mu{}, amp{}, phase{};
  for (std::size_t k = 0; k < 2; ++k) {
    mu[k] = spec.centers[k] + uniform(-spec.center_jitter, spec.center_jitter);
    amp[k] = uniform(spec.amp_min, spec.amp_max);
    phase[k] = uniform(0.0, 2.0 * std::numbers::pi);
  }

  EnvelopeGram g;
  g.bins = spec.bins;
  g.frames = frames;
  g.values.resize(g.bins * frames);
  const double inv_2s2 = 1.0 / (2.0 * spec.sigma * spec.sigma);
  for (std::size_t t = 0; t < frames; ++t) {
    std::array<double, 2> a{};
    for (std::size_t k = 0; k < 2; ++k) {
      a[k] = amp[k] * (1.0 + spec.modulation_depth *
                                 std::sin(2.0 * std::numbers::pi * static_cast<double>(t) /
                                              spec.modulation_period +
                                          phase[k]));
    }
    for (std::size_t b = 0; b < g.bins; ++b) {
      double v = floor;
      for (std::size_t k = 0; k < 2; ++k) {
        const double d = static_cast<double>(b) - mu[k];
        v += a[k] * std::exp(-d * d * inv_2s2);
      }
      g.at(b, t) = v;
    }
  }
  return g;
}

namespace {

Corpus make_toy_domain(const ToyDomainSpec& spec, const std::string& name, std::uint64_t seed,
                       std::uint64_t stream, std::size_t patches, std::size_t frames) {
  std::seed_seq seq{seed, stream};
  std::mt19937_64 rng(seq);
  Corpus c;
  c.speaker = name;
  for (std::size_t i = 0; i < patches; ++i) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "%s_%04zu", name.c_str(), i);
    EnvelopeGram g = synth_sample(spec, frames, rng);
    g.speaker = name;
    c.names.emplace_back(stem);
    c.manifest.push_back({std::string(stem), frames, "ok"});
    c.grams.push_back(std::move(g));
  }
  c.stats = fit_norm(c.grams, NormMode::kPooled);
  return c;
}

}  // namespace

ToyCorpora make_toy_corpora(std::uint64_t seed, std::size_t patches, std::size_t frames) {
  return {make_toy_domain(toy_domain_x(), "toy_x", seed, 1, patches, frames),
          make_toy_domain(toy_domain_y(), "toy_y", seed, 2, patches, frames)};
}

std::array<std::size_t, 2> dominant_peaks(const EnvelopeGram& gram) {
  std::vector<double> avg(gram.bins, 0.0);
  for (std::size_t t = 0; t < gram.frames; ++t) {
    for (std::size_t b = 0; b < gram.bins; ++b) avg[b] += gram.at(b, t);
  }
  std::vector<std::size_t> maxima;
  for (std::size_t b = 0; b < gram.bins; ++b) {
    const bool left = b == 0 || avg[b] > avg[b - 1];
    const bool right = b + 1 == gram.bins || avg[b] >= avg[b + 1];
    if (left && right) maxima.push_back(b);
  }
  std::sort(maxima.begin(), maxima.end(),
            [&](std::size_t i, std::size_t j) { return avg[i] > avg[j] || (avg[i] == avg[j] && i < j); });
  std::array<std::size_t, 2> peaks{};
  if (maxima.size() == 1) {
    peaks = {maxima[0], maxima[0]};
  } else {
    peaks = {std::min(maxima[0], maxima[1]), std::max(maxima[0], maxima[1])};
  }
  return peaks;
}

bool peaks_match(const EnvelopeGram& gram, const std::array<double, 2>& centers,
                 double tolerance) {
  const auto p = dominant_peaks(gram);
  return std::abs(static_cast<double>(p[0]) - centers[0]) <= tolerance &&
         std::abs(static_cast<double>(p[1]) - centers[1]) <= tolerance;
}

}  // namespace advgan
