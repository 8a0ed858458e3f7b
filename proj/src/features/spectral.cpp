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

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include "advgan/error.hpp"
#include "advgan/features.hpp"
#include "advgan/tensor.hpp"

namespace advgan {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Real <-> half-complex transform pair of a fixed size.
class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    real_ = fftw_alloc_real(n);
    spec_ = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_, spec_, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec_, real_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
    fftw_free(real_);
    fftw_free(spec_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }
  double* real() { return real_; }
  std::complex<double>* spectrum() { return reinterpret_cast<std::complex<double>*>(spec_); }

  void forward() { fftw_execute(forward_); }
  // Unnormalized: result is n times the true inverse.
  void inverse() { fftw_execute(inverse_); }

 private:
  std::size_t n_;
  double* real_;
  fftw_complex* spec_;
  fftw_plan forward_;
  fftw_plan inverse_;
};

}  // namespace

std::vector<double> Spectrogram::magnitude(std::size_t t) const {
  const auto f = frame(t);
  std::vector<double> mag(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) mag[i] = std::abs(f[i]);
  return mag;
}

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n));
  }
  return w;
}

Spectrogram stft(const AudioClip& clip, std::size_t n_fft, std::size_t hop) {
  const std::size_t len = clip.samples.size();
  if (len < n_fft) {
    throw ConfigError("stft: clip of " + std::to_string(len) + " samples is shorter than n_fft " +
                      std::to_string(n_fft));
  }
  check_finite(clip.samples, "stft input");
  const std::size_t pad = n_fft / 2;
  std::vector<double> padded(len + 2 * pad);
  for (std::size_t i = 0; i < padded.size(); ++i) {
    auto j = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(pad);
    if (j < 0) j = -j;
    const auto last = static_cast<std::ptrdiff_t>(len) - 1;
    if (j > last) j = 2 * last - j;
    padded[i] = clip.samples[static_cast<std::size_t>(j)];
  }

  Spectrogram spec;
  spec.n_fft = n_fft;
  spec.hop = hop;
  spec.signal_length = len;
  spec.frames = (len + hop - 1) / hop;
  spec.bins.resize(spec.frames * spec.n_bins());

  const auto window = hann_window(n_fft);
  RealFft fft(n_fft);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    const double* src = padded.data() + t * hop;
    for (std::size_t i = 0; i < n_fft; ++i) fft.real()[i] = src[i] * window[i];
    fft.forward();
    std::copy(fft.spectrum(), fft.spectrum() + spec.n_bins(),
              spec.bins.begin() + static_cast<std::ptrdiff_t>(t * spec.n_bins()));
  }
  return spec;
}

std::vector<double> istft(const Spectrogram& spec) {
  const std::size_t n_fft = spec.n_fft;
  const std::size_t pad = n_fft / 2;
  const std::size_t total = (spec.frames - 1) * spec.hop + n_fft;
  std::vector<double> acc(total, 0.0), norm(total, 0.0);
  const auto window = hann_window(n_fft);
  RealFft fft(n_fft);
  const double inv_n = 1.0 / static_cast<double>(n_fft);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    const auto f = spec.frame(t);
    std::copy(f.begin(), f.end(), fft.spectrum());
    fft.inverse();
    const std::size_t start = t * spec.hop;
    for (std::size_t i = 0; i < n_fft; ++i) {
      acc[start + i] += fft.real()[i] * inv_n * window[i];
      norm[start + i] += window[i] * window[i];
    }
  }
  std::vector<double> out(spec.signal_length, 0.0);
  for (std::size_t i = 0; i < out.size() && i + pad < total; ++i) {
    const double w = norm[i + pad];
    out[i] = w > 1e-12 ? acc[i + pad] / w : 0.0;
  }
  return out;
}

std::vector<double> cepstral_lifter(std::span<const double> log_spectrum, std::size_t order) {
  const std::size_t n_bins = log_spectrum.size();
  if (n_bins < 2) throw DimensionError("cepstral_lifter: spectrum too short");
  const std::size_t n = 2 * (n_bins - 1);
  if (2 * order >= n) return {log_spectrum.begin(), log_spectrum.end()};
  RealFft fft(n);
  for (std::size_t i = 0; i < n_bins; ++i) fft.spectrum()[i] = {log_spectrum[i], 0.0};
  fft.inverse();
  const double inv_n = 1.0 / static_cast<double>(n);
  double* c = fft.real();
  for (std::size_t i = 0; i < n; ++i) {
    const bool keep = i <= order || i >= n - order;
    c[i] = keep ? c[i] * inv_n : 0.0;
  }
  fft.forward();
  std::vector<double> out(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) out[i] = fft.spectrum()[i].real();
  return out;
}

std::vector<double> estimate_envelope(std::span<const double> magnitude,
                                      std::size_t cepstral_order, std::size_t iterations) {
  std::vector<double> log_spec(magnitude.size());
  for (std::size_t i = 0; i < magnitude.size(); ++i) {
    if (magnitude[i] < 0.0 || !std::isfinite(magnitude[i])) {
      throw NumericError("estimate_envelope: magnitudes must be finite and nonnegative");
    }
    log_spec[i] = std::log(std::max(magnitude[i], kMagnitudeFloor));
  }
  std::vector<double> env = cepstral_lifter(log_spec, cepstral_order);
  if (iterations == 0) return env;

  std::vector<double> work(log_spec.size());
  for (std::size_t it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < work.size(); ++i) work[i] = std::max(log_spec[i], env[i]);
    env = cepstral_lifter(work, cepstral_order);
  }
  double deficit = 0.0;
  for (std::size_t i = 0; i < env.size(); ++i) deficit = std::max(deficit, log_spec[i] - env[i]);
  for (auto& v : env) v += deficit;
  return env;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank build_mel_filterbank(std::size_t n_mels, std::size_t n_fft, int sample_rate,
                                   double fmin, double fmax) {
  if (n_mels < 2) throw ConfigError("mel filterbank needs at least 2 filters");
  if (!(fmax > fmin && fmin >= 0.0)) throw ConfigError("mel filterbank: need 0 <= fmin < fmax");
  MelFilterbank fb;
  fb.n_mels = n_mels;
  fb.n_fft = n_fft;
  fb.sample_rate = sample_rate;
  const std::size_t n_bins = fb.n_bins();
  const double mel_lo = hz_to_mel(fmin), mel_hi = hz_to_mel(fmax);
  std::vector<double> edges(n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                      static_cast<double>(n_mels + 1));
  }
  fb.center_hz.assign(edges.begin() + 1, edges.end() - 1);
  fb.weights.assign(n_mels * n_bins, 0.0);
  const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(n_fft);
  for (std::size_t k = 0; k < n_mels; ++k) {
    const double lo = edges[k], c = edges[k + 1], hi = edges[k + 2];
    double total = 0.0;
    for (std::size_t f = 0; f < n_bins; ++f) {
      const double hz = static_cast<double>(f) * bin_hz;
      const double w = std::max(0.0, std::min((hz - lo) / (c - lo), (hi - hz) / (hi - c)));
      fb.weights[k * n_bins + f] = w;
      total += w;
    }
    if (total <= 0.0) {
      throw ConfigError("mel filter " + std::to_string(k) + " covers no FFT bin; raise n_fft");
    }
    for (std::size_t f = 0; f < n_bins; ++f) fb.weights[k * n_bins + f] /= total;
  }
  return fb;
}

std::vector<double> mel_envelope(std::span<const double> log_env, const MelFilterbank& fb) {
  if (log_env.size() != fb.n_bins()) {
    throw DimensionError("mel_envelope: envelope has " + std::to_string(log_env.size()) +
                         " bins, filterbank expects " + std::to_string(fb.n_bins()));
  }
  std::vector<double> out(fb.n_mels);
  for (std::size_t k = 0; k < fb.n_mels; ++k) {
    const auto row = fb.row(k);
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < row.size(); ++f) {
      if (row[f] > 0.0) peak = std::max(peak, log_env[f]);
    }
    double acc = 0.0;
    for (std::size_t f = 0; f < row.size(); ++f) {
      if (row[f] > 0.0) acc += row[f] * std::exp(log_env[f] - peak);
    }
    out[k] = peak + std::log(acc);
  }
  return out;
}

void EnvelopeGram::validate() const {
  if (bins == 0 || frames == 0) throw DimensionError("envelope gram must have bins and frames");
  if (values.size() != bins * frames) {
    throw DimensionError("envelope gram holds " + std::to_string(values.size()) +
                         " values for " + std::to_string(bins) + "x" + std::to_string(frames));
  }
  check_finite(values, "envelope gram");
}

EnvelopeGram extract_gram(const AudioClip& clip, const MelFilterbank& fb) {
  if (clip.sample_rate != kSampleRate) {
    throw ConfigError("expected " + std::to_string(kSampleRate) + " Hz audio, got " +
                      std::to_string(clip.sample_rate));
  }
  const Spectrogram spec = stft(clip, fb.n_fft, kHop);
  EnvelopeGram gram;
  gram.bins = fb.n_mels;
  gram.frames = spec.frames;
  gram.hop_seconds = static_cast<double>(kHop) / static_cast<double>(clip.sample_rate);
  gram.values.resize(gram.bins * gram.frames);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    const auto env = estimate_envelope(spec.magnitude(t));
    const auto mel = mel_envelope(env, fb);
    std::copy(mel.begin(), mel.end(), gram.values.begin() + static_cast<std::ptrdiff_t>(t * gram.bins));
  }
  return gram;
}

std::vector<double> mel_to_linear_gain(std::span<const double> mel_diff, const MelFilterbank& fb) {
  if (mel_diff.size() != fb.n_mels) throw DimensionError("mel_to_linear_gain: bin count mismatch");
  const std::size_t n_bins = fb.n_bins();
  const double bin_hz = static_cast<double>(fb.sample_rate) / static_cast<double>(fb.n_fft);
  const auto& c = fb.center_hz;
  std::vector<double> out(n_bins);
  std::size_t k = 0;
  for (std::size_t f = 0; f < n_bins; ++f) {
    const double hz = static_cast<double>(f) * bin_hz;
    if (hz <= c.front()) {
      out[f] = mel_diff.front();
    } else if (hz >= c.back()) {
      out[f] = mel_diff.back();
    } else {
      while (c[k + 1] < hz) ++k;
      const double a = (hz - c[k]) / (c[k + 1] - c[k]);
      out[f] = (1.0 - a) * mel_diff[k] + a * mel_diff[k + 1];
    }
  }
  return out;
}

AudioClip resynthesize(const AudioClip& clip, const EnvelopeGram& src_gram,
                       const EnvelopeGram& conv_gram, const MelFilterbank& fb) {
  Spectrogram spec = stft(clip, fb.n_fft, kHop);
  if (src_gram.frames != spec.frames || conv_gram.frames != spec.frames ||
      src_gram.bins != fb.n_mels || conv_gram.bins != fb.n_mels) {
    throw DimensionError("resynthesize: grams (" + std::to_string(src_gram.frames) + ", " +
                         std::to_string(conv_gram.frames) + " frames) are not aligned with " +
                         std::to_string(spec.frames) + " STFT frames");
  }
  std::vector<double> diff(fb.n_mels);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    for (std::size_t b = 0; b < fb.n_mels; ++b) diff[b] = conv_gram.at(b, t) - src_gram.at(b, t);
    const auto gain = mel_to_linear_gain(diff, fb);
    auto* frame = spec.bins.data() + t * spec.n_bins();
    for (std::size_t f = 0; f < spec.n_bins(); ++f) frame[f] *= std::exp(gain[f]);
  }
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples = istft(spec);
  return out;
}

}  // namespace advgan
