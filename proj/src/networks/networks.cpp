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

#include "advgan/networks.hpp"

#include <cmath>
#include <random>

#include "advgan/error.hpp"
#include "advgan/ops.hpp"

namespace advgan {

namespace {

constexpr double kInitStd = 0.02;

Tensor normal_param(Shape shape, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, kInitStd);
  std::vector<double> data(shape_numel(shape));
  for (auto& v : data) v = dist(rng);
  return Tensor::from(std::move(shape), std::move(data), true);
}

Tensor zeros_param(std::size_t n) { return Tensor::zeros({n}, true); }
Tensor ones_param(std::size_t n) { return Tensor::full({n}, 1.0, true); }

void zero_tensor(Tensor& t) {
  for (auto& v : t.mutable_data()) v = 0.0;
}

void require_patch(const Tensor& x, const char* who) {
  if (x.rank() != 4 || x.dim(1) != 1) {
    throw DimensionError(std::string(who) + ": expected [N, 1, bins, frames], got " +
                         shape_str(x.shape()));
  }
}

}  // namespace

std::size_t NetScale::scaled(std::size_t channels) const {
  const auto c = static_cast<std::size_t>(std::ceil(static_cast<double>(channels) * width - 1e-9));
  return c < 1 ? 1 : c;
}

void NetScale::validate() const {
  if (!(width > 0.0 && width <= 1.0)) {
    throw ConfigError("width multiplier must lie in (0, 1], got " + std::to_string(width));
  }
  if (bins % 16 != 0 || frames % 16 != 0) {
    // The discriminator halves the patch four times.
    throw ConfigError("patch " + std::to_string(bins) + "x" + std::to_string(frames) +
                      " must be divisible by 16 in both dimensions");
  }
}

// ---------------------------------------------------------------------------
// Generator

Generator Generator::build(const NetScale& scale, std::uint64_t seed) {
  scale.validate();
  std::mt19937_64 rng(seed);
  Generator g;
  g.scale_ = scale;
  const std::size_t c1 = scale.scaled(256), c2 = scale.scaled(512);
  struct Spec {
    const char* name;
    bool transposed;
    std::size_t k, s, cin, cout;
    bool norm;
  };
  const Spec specs[] = {
      {"enc1", false, 2, 2, 1, c1, true},  {"enc2", false, 2, 2, c1, c2, true},
      {"res1", false, 3, 1, c2, c2, true}, {"res2", false, 3, 1, c2, c2, true},
      {"dec1", true, 2, 2, c2, c1, true},  {"dec2", true, 2, 2, c1, 1, false},
  };
  for (const auto& s : specs) {
    Layer layer;
    layer.name = s.name;
    layer.transposed = s.transposed;
    layer.kernel = s.k;
    layer.stride = s.s;
    layer.weight = s.transposed ? normal_param({s.cin, s.cout, s.k, s.k}, rng)
                                : normal_param({s.cout, s.cin, s.k, s.k}, rng);
    layer.bias = zeros_param(s.cout);
    if (s.norm) {
      layer.gain = ones_param(s.cout);
      layer.offset = zeros_param(s.cout);
    }
    g.layers_.push_back(std::move(layer));
  }
  return g;
}

Tensor Generator::forward(const Tensor& x) const {
  require_patch(x, "generator");
  if (x.dim(2) % 4 != 0 || x.dim(3) % 4 != 0) {
    throw DimensionError("generator: spatial dims of " + shape_str(x.shape()) +
                         " must be divisible by 4");
  }
  Tensor h = x;
  for (const auto& layer : layers_) {
    h = layer.transposed ? conv_transpose2d(h, layer.weight, layer.bias)
                         : conv2d(h, layer.weight, layer.bias, {layer.stride, layer.stride});
    if (layer.gain.defined()) {
      h = relu(instance_norm2d(h, layer.gain, layer.offset));
    }
  }
  return h;
}

std::vector<NamedTensor> Generator::named_parameters(const std::string& prefix) const {
  std::vector<NamedTensor> out;
  for (const auto& layer : layers_) {
    const std::string base = prefix + "." + layer.name + ".";
    out.push_back({base + "weight", layer.weight});
    out.push_back({base + "bias", layer.bias});
    if (layer.gain.defined()) {
      out.push_back({base + "gain", layer.gain});
      out.push_back({base + "offset", layer.offset});
    }
  }
  return out;
}

std::vector<Tensor> Generator::parameters() const {
  std::vector<Tensor> out;
  for (auto& nt : named_parameters("g")) out.push_back(nt.tensor);
  return out;
}

std::size_t Generator::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : parameters()) n += t.numel();
  return n;
}

void Generator::zero_output_layer() {
  zero_tensor(layers_.back().weight);
  zero_tensor(layers_.back().bias);
}

// ---------------------------------------------------------------------------
// Discriminator

Discriminator Discriminator::build(const NetScale& scale, std::uint64_t seed) {
  scale.validate();
  std::mt19937_64 rng(seed);
  Discriminator d;
  d.scale_ = scale;
  std::size_t cin = 1;
  for (std::size_t base : {64u, 128u, 256u, 512u}) {
    const std::size_t cout = scale.scaled(base);
    d.convs_.push_back({normal_param({cout, cin, 2, 2}, rng), zeros_param(cout),
                        ones_param(cout), zeros_param(cout)});
    cin = cout;
  }
  const std::size_t flat = cin * (scale.bins / 16) * (scale.frames / 16);
  const std::size_t hidden = scale.scaled(512);
  d.fc1_w_ = normal_param({flat, hidden}, rng);
  d.fc1_b_ = zeros_param(hidden);
  d.fc2_w_ = normal_param({hidden, 1}, rng);
  d.fc2_b_ = zeros_param(1);
  return d;
}

Tensor Discriminator::forward(const Tensor& x) const {
  require_patch(x, "discriminator");
  if (x.dim(2) != scale_.bins || x.dim(3) != scale_.frames) {
    throw DimensionError("discriminator: patch " + shape_str(x.shape()) + " does not match " +
                         std::to_string(scale_.bins) + "x" + std::to_string(scale_.frames));
  }
  Tensor h = x;
  for (const auto& c : convs_) {
    h = leaky_relu(instance_norm2d(conv2d(h, c.weight, c.bias, {2, 2}), c.gain, c.offset));
  }
  h = leaky_relu(dense(flatten(h), fc1_w_, fc1_b_));
  return reshape(dense(h, fc2_w_, fc2_b_), {x.dim(0)});
}

std::vector<NamedTensor> Discriminator::named_parameters(const std::string& prefix) const {
  std::vector<NamedTensor> out;
  for (std::size_t i = 0; i < convs_.size(); ++i) {
    const std::string base = prefix + ".conv" + std::to_string(i + 1) + ".";
    out.push_back({base + "weight", convs_[i].weight});
    out.push_back({base + "bias", convs_[i].bias});
    out.push_back({base + "gain", convs_[i].gain});
    out.push_back({base + "offset", convs_[i].offset});
  }
  out.push_back({prefix + ".fc1.weight", fc1_w_});
  out.push_back({prefix + ".fc1.bias", fc1_b_});
  out.push_back({prefix + ".fc2.weight", fc2_w_});
  out.push_back({prefix + ".fc2.bias", fc2_b_});
  return out;
}

std::vector<Tensor> Discriminator::parameters() const {
  std::vector<Tensor> out;
  for (auto& nt : named_parameters("d")) out.push_back(nt.tensor);
  return out;
}

std::size_t Discriminator::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : parameters()) n += t.numel();
  return n;
}

void Discriminator::zero_output_layer() {
  zero_tensor(fc2_w_);
  zero_tensor(fc2_b_);
}

// ---------------------------------------------------------------------------

std::size_t reference_cyclegan_vc_generator_params(std::size_t feature_dim) {
  // Gated conv: value and gate branches, each with weights + bias.
  auto gated = [](std::size_t cin, std::size_t cout, std::size_t k, bool norm) {
    std::size_t n = 2 * (cin * cout * k + cout);
    if (norm) n += 2 * 2 * cout;
    return n;
  };
  auto plain = [](std::size_t cin, std::size_t cout, std::size_t k, bool norm) {
    return cin * cout * k + cout + (norm ? 2 * cout : 0);
  };
  std::size_t n = gated(feature_dim, 128, 15, false);
  n += gated(128, 256, 5, true);
  n += gated(256, 512, 5, true);
  for (int i = 0; i < 6; ++i) n += gated(512, 1024, 3, true) + plain(1024, 512, 3, true);
  // Pixel shuffle by 2 halves the channel count after each upsampling conv.
  n += gated(512, 1024, 5, true);
  n += gated(512, 512, 5, true);
  n += plain(256, feature_dim, 15, false);
  return n;
}

}  // namespace advgan
