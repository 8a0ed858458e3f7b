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

#include <span>

#include "advgan/tensor.hpp"

namespace advgan {

struct Stride2d {
  std::size_t h = 1;
  std::size_t w = 1;
};

// Cross-correlation over NCHW input with an [Cout, Cin, k, k] weight.
// Supported geometries: kernel 2 / stride 2 (padding 0, exact halving) and
// kernel 3 / stride 1 (padding 1, shape preserving).
Tensor conv2d(const Tensor& input, const Tensor& weight, const Tensor& bias,
              Stride2d stride);

// Transpose of conv2d with kernel 2 / stride 2; weight is [Cin, Cout, 2, 2].
// Each output pixel receives exactly one tap, so the spatial size doubles.
Tensor conv_transpose2d(const Tensor& input, const Tensor& weight, const Tensor& bias,
                        Stride2d stride = {2, 2});

inline constexpr double kInstanceNormEps = 1e-5;

// Per (sample, channel) normalization over H x W with learned gain/offset.
Tensor instance_norm2d(const Tensor& input, const Tensor& gain, const Tensor& offset,
                       double eps = kInstanceNormEps);

Tensor relu(const Tensor& x);

inline constexpr double kLeakySlope = 0.2;
// slope must lie in (0, 1).
Tensor leaky_relu(const Tensor& x, double slope = kLeakySlope);

// [N, F] x [F, O] + [O].
Tensor dense(const Tensor& input, const Tensor& weight, const Tensor& bias);

// Same values, new shape with equal element count.
Tensor reshape(const Tensor& x, Shape shape);

// [N, ...] -> [N, prod(...)].
Tensor flatten(const Tensor& x);

// Mean over elements of |a - b|.
Tensor l1_distance(const Tensor& a, const Tensor& b);

// Mean over elements of (a - target)^2.
Tensor square_error(const Tensor& a, const Tensor& target);
Tensor square_error(const Tensor& a, double target);

// Sum_j w_j (s_j - t_j)^2 over a score vector. Targets and weights are
// constants: no gradient reaches them.
Tensor weighted_square_error(const Tensor& scores, std::span<const double> targets,
                             std::span<const double> weights);

// [N, 1, B, T] -> [N, T]: mean over the B frequency bins of every frame.
Tensor frame_mean(const Tensor& patch);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor add_scalar(const Tensor& a, double value);
Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);

// Sum_i c_i x_i with constant coefficients; turns any tensor into a scalar
// probe for gradient checks.
Tensor dot_const(const Tensor& x, std::span<const double> coeffs);

}  // namespace advgan
