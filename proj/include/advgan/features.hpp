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

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace advgan {

inline constexpr int kSampleRate = 16000;
inline constexpr std::size_t kFftSize = 1024;
inline constexpr std::size_t kHop = 160;
inline constexpr std::size_t kMelBins = 32;
inline constexpr std::size_t kCepstralOrder = 64;
inline constexpr std::size_t kEnvelopeIterations = 20;
inline constexpr double kMagnitudeFloor = 1e-10;
inline constexpr double kStdFloor = 1e-6;

struct AudioClip {
  std::vector<double> samples;
  int sample_rate = kSampleRate;
};

// Complex spectrogram, frame-major: frames x (n_fft / 2 + 1).
struct Spectrogram {
  std::size_t frames = 0;
  std::size_t n_fft = kFftSize;
  std::size_t hop = kHop;
  std::size_t signal_length = 0;
  std::vector<std::complex<double>> bins;

  std::size_t n_bins() const { return n_fft / 2 + 1; }
  std::span<const std::complex<double>> frame(std::size_t t) const {
    return {bins.data() + t * n_bins(), n_bins()};
  }
  std::vector<double> magnitude(std::size_t t) const;
};

std::vector<double> hann_window(std::size_t n);

// Centered frames (reflect padding of n_fft / 2), Hann window,
// frames = ceil(len / hop). Requires len >= n_fft.
Spectrogram stft(const AudioClip& clip, std::size_t n_fft = kFftSize, std::size_t hop = kHop);

// Weighted overlap-add inverse; returns spec.signal_length samples.
std::vector<double> istft(const Spectrogram& spec);

// Iterative cepstral smoothing: start from the log spectrum, lifter to
// `cepstral_order`, replace the working spectrum by max(log spectrum,
// smoothed) and repeat. With iterations > 0 the result is lifted by its
// largest remaining deficit so it upper-bounds the log spectrum exactly
// (a constant shift keeps the cepstrum band-limited). iterations == 0 returns
// the plain liftered log spectrum.
std::vector<double> estimate_envelope(std::span<const double> magnitude,
                                      std::size_t cepstral_order = kCepstralOrder,
                                      std::size_t iterations = kEnvelopeIterations);

// Low-pass lifter of a real log spectrum (n_fft / 2 + 1 bins).
std::vector<double> cepstral_lifter(std::span<const double> log_spectrum, std::size_t order);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

struct MelFilterbank {
  std::size_t n_mels = 0;
  std::size_t n_fft = 0;
  int sample_rate = 0;
  std::vector<double> center_hz;  // n_mels
  std::vector<double> weights;    // n_mels x (n_fft / 2 + 1), rows sum to 1

  std::size_t n_bins() const { return n_fft / 2 + 1; }
  std::span<const double> row(std::size_t k) const {
    return {weights.data() + k * n_bins(), n_bins()};
  }
};

// Triangular filters with centers uniform on the mel scale
// (2595 log10(1 + f / 700)); each row is divided by its own sum.
MelFilterbank build_mel_filterbank(std::size_t n_mels = kMelBins, std::size_t n_fft = kFftSize,
                                   int sample_rate = kSampleRate, double fmin = 0.0,
                                   double fmax = 8000.0);

// out[k] = log(sum_f fb[k, f] * exp(log_env[f])), evaluated as a log-sum-exp.
std::vector<double> mel_envelope(std::span<const double> log_env, const MelFilterbank& fb);

// bins x frames log-amplitude matrix, stored frame-contiguous.
struct EnvelopeGram {
  std::size_t bins = kMelBins;
  std::size_t frames = 0;
  double hop_seconds = static_cast<double>(kHop) / kSampleRate;
  std::string speaker;
  bool normalized = false;
  std::vector<double> values;  // values[t * bins + b]

  double& at(std::size_t b, std::size_t t) { return values[t * bins + b]; }
  double at(std::size_t b, std::size_t t) const { return values[t * bins + b]; }
  void validate() const;
};

// Full analysis chain: stft -> estimate_envelope -> mel_envelope per frame.
EnvelopeGram extract_gram(const AudioClip& clip, const MelFilterbank& fb);

// Per-bin mean and standard deviation.
struct NormStats {
  std::vector<double> mean = std::vector<double>(kMelBins, 0.0);
  std::vector<double> stddev = std::vector<double>(kMelBins, 1.0);
  std::size_t count = 0;
};

enum class NormMode {
  kPerBin,  // independent statistics for every bin
  kPooled,  // one mean/std over all bins, replicated per bin
};

NormStats fit_norm(std::span<const EnvelopeGram> grams, NormMode mode = NormMode::kPooled);
EnvelopeGram apply_norm(const EnvelopeGram& gram, const NormStats& stats);
EnvelopeGram invert_norm(const EnvelopeGram& gram, const NormStats& stats);

// Interpolates a per-frame mel-domain log difference onto linear-frequency
// bins (piecewise linear between mel centers, constant beyond the edges).
std::vector<double> mel_to_linear_gain(std::span<const double> mel_diff, const MelFilterbank& fb);

// Applies exp(conv - src) as a per-frame spectral filter to the source STFT,
// keeps the source phase and overlap-adds back to audio.
AudioClip resynthesize(const AudioClip& clip, const EnvelopeGram& src_gram,
                       const EnvelopeGram& conv_gram, const MelFilterbank& fb);

// PCM 16-bit mono 16 kHz WAV only.
AudioClip read_wav(const std::string& path);
void write_wav(const std::string& path, const AudioClip& clip);

// "EGRM" v1 and "NSTA" v1 little-endian binary files.
void write_gram(const std::string& path, const EnvelopeGram& gram);
EnvelopeGram read_gram(const std::string& path);
void write_stats(const std::string& path, const NormStats& stats);
NormStats read_stats(const std::string& path);

}  // namespace advgan
