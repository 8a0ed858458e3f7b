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

#include "advgan/tensor.hpp"

namespace advgan {

// Width multiplier and patch geometry. width = 1 is the published topology;
// the desk-scale default is 1/8.
struct NetScale {
  double width = 1.0;
  std::size_t bins = 32;
  std::size_t frames = 128;

  // ceil(channels * width), never below 1.
  std::size_t scaled(std::size_t channels) const;
  void validate() const;
};

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

// Encoder (2 x conv k2 s2), bottleneck (2 x conv k3 s1 p1), decoder
// (2 x conv-transpose k2 s2) with 256, 512, 512, 512, 256, 1 filters at full
// width. Hidden layers: instance norm + ReLU. The output layer is linear.
class Generator {
 public:
  static Generator build(const NetScale& scale, std::uint64_t seed);

  // [N, 1, B, T] -> [N, 1, B, T]; B and T must be divisible by 4.
  Tensor forward(const Tensor& x) const;

  std::vector<NamedTensor> named_parameters(const std::string& prefix) const;
  std::vector<Tensor> parameters() const;
  std::size_t parameter_count() const;
  const NetScale& scale() const { return scale_; }

  // Zeroes the output layer's weight and bias.
  void zero_output_layer();

 private:
  struct Layer {
    std::string name;
    bool transposed = false;
    std::size_t kernel = 2, stride = 2;
    Tensor weight, bias;
    Tensor gain, offset;  // undefined for the output layer
  };
  NetScale scale_;
  std::vector<Layer> layers_;
};

// Four conv k2 s2 layers (64, 128, 256, 512 filters at full width), each with
// instance norm + LeakyReLU(0.2), then dense(512) + LeakyReLU and a linear
// dense(1). Emits one raw score per sample.
class Discriminator {
 public:
  static Discriminator build(const NetScale& scale, std::uint64_t seed);

  // [N, 1, bins, frames] -> [N]. Spatial dims must equal the configured patch.
  Tensor forward(const Tensor& x) const;

  std::vector<NamedTensor> named_parameters(const std::string& prefix) const;
  std::vector<Tensor> parameters() const;
  std::size_t parameter_count() const;
  const NetScale& scale() const { return scale_; }

  void zero_output_layer();

 private:
  struct ConvBlock {
    Tensor weight, bias, gain, offset;
  };
  NetScale scale_;
  std::vector<ConvBlock> convs_;
  Tensor fc1_w_, fc1_b_, fc2_w_, fc2_b_;
};

// Parameter count of a 1-D gated-CNN generator in the style of the original
// cycleGAN-VC (two downsampling stages, six residual blocks, two pixel-shuffle
// upsampling stages) operating on `feature_dim` input features. Only used for
// the size comparison report.
std::size_t reference_cyclegan_vc_generator_params(std::size_t feature_dim);

}  // namespace advgan
