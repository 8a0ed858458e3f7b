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

#include <algorithm>
#include <cmath>
#include <cstring>

#include "../common/binio.hpp"
#include "advgan/error.hpp"
#include "advgan/features.hpp"

namespace advgan {

NormStats fit_norm(std::span<const EnvelopeGram> grams, NormMode mode) {
  if (grams.empty()) throw ConfigError("fit_norm: empty corpus");
  const std::size_t bins = grams.front().bins;
  std::vector<double> sum(bins, 0.0);
  std::size_t frames = 0;
  for (const auto& g : grams) {
    if (g.bins != bins) throw DimensionError("fit_norm: grams disagree on bin count");
    for (std::size_t t = 0; t < g.frames; ++t) {
      for (std::size_t b = 0; b < bins; ++b) sum[b] += g.at(b, t);
    }
    frames += g.frames;
  }
  NormStats stats;
  stats.count = frames;
  stats.mean.assign(bins, 0.0);
  stats.stddev.assign(bins, 1.0);
  const double nf = static_cast<double>(frames);

  if (mode == NormMode::kPerBin) {
    for (std::size_t b = 0; b < bins; ++b) stats.mean[b] = sum[b] / nf;
    std::vector<double> sq(bins, 0.0);
    for (const auto& g : grams) {
      for (std::size_t t = 0; t < g.frames; ++t) {
        for (std::size_t b = 0; b < bins; ++b) {
          const double d = g.at(b, t) - stats.mean[b];
          sq[b] += d * d;
        }
      }
    }
    for (std::size_t b = 0; b < bins; ++b) {
      stats.stddev[b] = std::max(std::sqrt(sq[b] / nf), kStdFloor);
    }
    return stats;
  }

  double total = 0.0;
  for (double s : sum) total += s;
  const double n = nf * static_cast<double>(bins);
  const double mu = total / n;
  double sq = 0.0;
  for (const auto& g : grams) {
    for (double v : g.values) sq += (v - mu) * (v - mu);
  }
  const double sd = std::max(std::sqrt(sq / n), kStdFloor);
  std::fill(stats.mean.begin(), stats.mean.end(), mu);
  std::fill(stats.stddev.begin(), stats.stddev.end(), sd);
  return stats;
}

namespace {

void check_stats(const EnvelopeGram& gram, const NormStats& stats) {
  if (stats.mean.size() != gram.bins || stats.stddev.size() != gram.bins) {
    throw DimensionError("normalization stats cover " + std::to_string(stats.mean.size()) +
                         " bins, gram has " + std::to_string(gram.bins));
  }
}

}  // namespace

EnvelopeGram apply_norm(const EnvelopeGram& gram, const NormStats& stats) {
  check_stats(gram, stats);
  EnvelopeGram out = gram;
  for (std::size_t t = 0; t < gram.frames; ++t) {
    for (std::size_t b = 0; b < gram.bins; ++b) {
      out.at(b, t) = (gram.at(b, t) - stats.mean[b]) / stats.stddev[b];
    }
  }
  out.normalized = true;
  return out;
}

EnvelopeGram invert_norm(const EnvelopeGram& gram, const NormStats& stats) {
  check_stats(gram, stats);
  EnvelopeGram out = gram;
  for (std::size_t t = 0; t < gram.frames; ++t) {
    for (std::size_t b = 0; b < gram.bins; ++b) {
      out.at(b, t) = gram.at(b, t) * stats.stddev[b] + stats.mean[b];
    }
  }
  out.normalized = false;
  return out;
}

// ---------------------------------------------------------------------------
// WAV

namespace {

std::uint16_t le16(const char* p) {
  std::uint16_t v;
  std::memcpy(&v, p, 2);
  return v;
}
std::uint32_t le32(const char* p) {
  std::uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

}  // namespace

AudioClip read_wav(const std::string& path) {
  const std::string data = binio::read_file(path);
  auto fail = [&](const std::string& why) { return FormatError(path + ": " + why); };
  if (data.size() < 12 || data.compare(0, 4, "RIFF") != 0 || data.compare(8, 4, "WAVE") != 0) {
    throw fail("not a RIFF/WAVE file");
  }
  std::size_t pos = 12;
  bool have_fmt = false;
  const char* pcm = nullptr;
  std::size_t pcm_bytes = 0;
  while (pos + 8 <= data.size()) {
    const std::string id = data.substr(pos, 4);
    const std::size_t len = le32(data.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (len > data.size() - body) throw fail("chunk '" + id + "' runs past end of file");
    if (id == "fmt ") {
      if (len < 16) throw fail("fmt chunk too short");
      const auto format = le16(data.data() + body);
      const auto channels = le16(data.data() + body + 2);
      const auto rate = le32(data.data() + body + 4);
      const auto bits = le16(data.data() + body + 14);
      if (format != 1) throw fail("only PCM WAV is supported (format tag " + std::to_string(format) + ")");
      if (channels != 1) throw fail("expected mono, got " + std::to_string(channels) + " channels");
      if (rate != static_cast<std::uint32_t>(kSampleRate)) {
        throw fail("expected 16000 Hz, got " + std::to_string(rate));
      }
      if (bits != 16) throw fail("expected 16-bit samples, got " + std::to_string(bits));
      have_fmt = true;
    } else if (id == "data") {
      pcm = data.data() + body;
      pcm_bytes = len;
    }
    pos = body + len + (len & 1);
  }
  if (!have_fmt) throw fail("missing fmt chunk");
  if (pcm == nullptr) throw fail("missing data chunk");
  AudioClip clip;
  clip.sample_rate = kSampleRate;
  clip.samples.resize(pcm_bytes / 2);
  for (std::size_t i = 0; i < clip.samples.size(); ++i) {
    std::int16_t s;
    std::memcpy(&s, pcm + 2 * i, 2);
    clip.samples[i] = static_cast<double>(s) / 32768.0;
  }
  return clip;
}

void write_wav(const std::string& path, const AudioClip& clip) {
  if (clip.sample_rate != kSampleRate) throw ConfigError("write_wav: only 16 kHz is supported");
  const auto n = static_cast<std::uint32_t>(clip.samples.size());
  binio::Writer w;
  w.magic("RIFF");
  w.u32(36 + 2 * n);
  w.magic("WAVE");
  w.magic("fmt ");
  w.u32(16);
  const std::uint16_t format = 1, channels = 1, block = 2, bits = 16;
  w.bytes(&format, 2);
  w.bytes(&channels, 2);
  w.u32(kSampleRate);
  w.u32(kSampleRate * 2);
  w.bytes(&block, 2);
  w.bytes(&bits, 2);
  w.magic("data");
  w.u32(2 * n);
  for (double v : clip.samples) {
    const double c = std::clamp(v, -1.0, 1.0);
    const auto s = static_cast<std::int16_t>(std::lround(std::clamp(c * 32768.0, -32768.0, 32767.0)));
    w.bytes(&s, 2);
  }
  binio::write_file_atomic(path, w.buffer());
}

// ---------------------------------------------------------------------------
// Gram / stats files

void write_gram(const std::string& path, const EnvelopeGram& gram) {
  gram.validate();
  binio::Writer w;
  w.magic("EGRM");
  w.u32(1);
  w.u32(static_cast<std::uint32_t>(gram.bins));
  w.u32(static_cast<std::uint32_t>(gram.frames));
  w.f64(gram.hop_seconds);
  w.f64s(gram.values.data(), gram.values.size());
  binio::write_file_atomic(path, w.buffer());
}

EnvelopeGram read_gram(const std::string& path) {
  binio::Reader r(binio::read_file(path), path);
  r.expect_magic("EGRM");
  const auto version = r.u32();
  if (version != 1) throw FormatError(path + ": unsupported gram version " + std::to_string(version));
  EnvelopeGram gram;
  gram.bins = r.u32();
  gram.frames = r.u32();
  gram.hop_seconds = r.f64();
  if (gram.bins == 0 || gram.frames == 0) throw FormatError(path + ": empty gram");
  gram.values = r.f64s(gram.bins * gram.frames);
  if (!r.at_end()) throw FormatError(path + ": trailing bytes after gram data");
  gram.validate();
  return gram;
}

void write_stats(const std::string& path, const NormStats& stats) {
  if (stats.mean.size() != kMelBins || stats.stddev.size() != kMelBins) {
    throw DimensionError("stats file format holds exactly 32 bins");
  }
  binio::Writer w;
  w.magic("NSTA");
  w.u32(1);
  w.f64s(stats.mean.data(), kMelBins);
  w.f64s(stats.stddev.data(), kMelBins);
  binio::write_file_atomic(path, w.buffer());
}

NormStats read_stats(const std::string& path) {
  binio::Reader r(binio::read_file(path), path);
  r.expect_magic("NSTA");
  const auto version = r.u32();
  if (version != 1) throw FormatError(path + ": unsupported stats version " + std::to_string(version));
  NormStats stats;
  stats.mean = r.f64s(kMelBins);
  stats.stddev = r.f64s(kMelBins);
  if (!r.at_end()) throw FormatError(path + ": trailing bytes after stats");
  for (double s : stats.stddev) {
    if (!(s > 0.0) || !std::isfinite(s)) throw FormatError(path + ": nonpositive standard deviation");
  }
  return stats;
}

}  // namespace advgan
