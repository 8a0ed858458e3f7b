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

#include "advgan/ops.hpp"

#include <Eigen/Core>
#include <cmath>
#include <string>

#include "advgan/error.hpp"

namespace advgan {

namespace {

using MatRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRM = Eigen::Map<MatRM>;
using CMapRM = Eigen::Map<const MatRM>;

void require(bool cond, const std::string& msg) {
  if (!cond) throw DimensionError(msg);
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  require(a.shape() == b.shape(), std::string(op) + ": shape mismatch " +
                                      shape_str(a.shape()) + " vs " + shape_str(b.shape()));
}

void require_rank(const Tensor& t, std::size_t rank, const char* op, const char* what) {
  require(t.rank() == rank, std::string(op) + ": " + what + " must have rank " +
                                std::to_string(rank) + ", got " + shape_str(t.shape()));
}

struct ConvGeometry {
  std::size_t n, cin, h, w;
  std::size_t cout, k, stride, pad;
  std::size_t ho, wo;
};

// col[(ci*k + ki)*k + kj, n*Ho*Wo + oh*Wo + ow]
void im2col(const double* x, const ConvGeometry& g, double* col) {
  const std::size_t hwo = g.ho * g.wo;
  const std::size_t cols = g.n * hwo;
  for (std::size_t ci = 0; ci < g.cin; ++ci) {
    for (std::size_t ki = 0; ki < g.k; ++ki) {
      for (std::size_t kj = 0; kj < g.k; ++kj) {
        double* row = col + ((ci * g.k + ki) * g.k + kj) * cols;
        for (std::size_t n = 0; n < g.n; ++n) {
          const double* plane = x + (n * g.cin + ci) * g.h * g.w;
          for (std::size_t oh = 0; oh < g.ho; ++oh) {
            const auto ih = static_cast<std::ptrdiff_t>(oh * g.stride + ki) -
                            static_cast<std::ptrdiff_t>(g.pad);
            double* dst = row + n * hwo + oh * g.wo;
            if (ih < 0 || ih >= static_cast<std::ptrdiff_t>(g.h)) {
              std::fill(dst, dst + g.wo, 0.0);
              continue;
            }
            const double* src = plane + static_cast<std::size_t>(ih) * g.w;
            for (std::size_t ow = 0; ow < g.wo; ++ow) {
              const auto iw = static_cast<std::ptrdiff_t>(ow * g.stride + kj) -
                              static_cast<std::ptrdiff_t>(g.pad);
              dst[ow] = (iw < 0 || iw >= static_cast<std::ptrdiff_t>(g.w))
                            ? 0.0
                            : src[static_cast<std::size_t>(iw)];
            }
          }
        }
      }
    }
  }
}

void col2im_add(const double* col, const ConvGeometry& g, double* dx) {
  const std::size_t hwo = g.ho * g.wo;
  const std::size_t cols = g.n * hwo;
  for (std::size_t ci = 0; ci < g.cin; ++ci) {
    for (std::size_t ki = 0; ki < g.k; ++ki) {
      for (std::size_t kj = 0; kj < g.k; ++kj) {
        const double* row = col + ((ci * g.k + ki) * g.k + kj) * cols;
        for (std::size_t n = 0; n < g.n; ++n) {
          double* plane = dx + (n * g.cin + ci) * g.h * g.w;
          for (std::size_t oh = 0; oh < g.ho; ++oh) {
            const auto ih = static_cast<std::ptrdiff_t>(oh * g.stride + ki) -
                            static_cast<std::ptrdiff_t>(g.pad);
            if (ih < 0 || ih >= static_cast<std::ptrdiff_t>(g.h)) continue;
            const double* src = row + n * hwo + oh * g.wo;
            double* dst = plane + static_cast<std::size_t>(ih) * g.w;
            for (std::size_t ow = 0; ow < g.wo; ++ow) {
              const auto iw = static_cast<std::ptrdiff_t>(ow * g.stride + kj) -
                              static_cast<std::ptrdiff_t>(g.pad);
              if (iw < 0 || iw >= static_cast<std::ptrdiff_t>(g.w)) continue;
              dst[static_cast<std::size_t>(iw)] += src[ow];
            }
          }
        }
      }
    }
  }
}

}  // namespace

Tensor conv2d(const Tensor& input, const Tensor& weight, const Tensor& bias,
              Stride2d stride) {
  require_rank(input, 4, "conv2d", "input");
  require_rank(weight, 4, "conv2d", "weight");
  require_rank(bias, 1, "conv2d", "bias");
  const std::size_t k = weight.dim(2);
  require(weight.dim(3) == k, "conv2d: only square kernels are supported");
  require(stride.h == stride.w, "conv2d: only equal strides are supported");
  std::size_t pad = 0;
  if (k == 2 && stride.h == 2) {
    pad = 0;
  } else if (k == 3 && stride.h == 1) {
    pad = 1;
  } else {
    throw ConfigError("conv2d: unsupported kernel " + std::to_string(k) + " / stride " +
                      std::to_string(stride.h));
  }
  require(weight.dim(1) == input.dim(1),
          "conv2d: weight expects " + std::to_string(weight.dim(1)) + " input channels, got " +
              std::to_string(input.dim(1)));
  require(bias.dim(0) == weight.dim(0), "conv2d: bias length must equal output channels");

  ConvGeometry g{input.dim(0), input.dim(1), input.dim(2), input.dim(3),
                 weight.dim(0), k,           stride.h,      pad,
                 0,             0};
  if (k == stride.h) {
    require(g.h % k == 0 && g.w % k == 0,
            "conv2d: spatial dims " + shape_str(input.shape()) + " not divisible by stride");
  }
  g.ho = (g.h + 2 * pad - k) / stride.h + 1;
  g.wo = (g.w + 2 * pad - k) / stride.w + 1;
  const std::size_t hwo = g.ho * g.wo;
  const std::size_t rows = g.cin * k * k;
  const std::size_t cols = g.n * hwo;

  MatRM col(rows, cols);  // fully overwritten by im2col
  im2col(input.data().data(), g, col.data());

  MatRM out_mat = CMapRM(weight.data().data(), g.cout, rows) * col;

  std::vector<double> out(g.n * g.cout * hwo);
  const double* b = bias.data().data();
  for (std::size_t n = 0; n < g.n; ++n) {
    for (std::size_t co = 0; co < g.cout; ++co) {
      const double* src = out_mat.data() + co * cols + n * hwo;
      double* dst = out.data() + (n * g.cout + co) * hwo;
      for (std::size_t i = 0; i < hwo; ++i) dst[i] = src[i] + b[co];
    }
  }

  return Tensor::make_result(
      {g.n, g.cout, g.ho, g.wo}, std::move(out), {input, weight, bias}, "conv2d",
      [g, rows, cols, hwo, col = std::move(col)](detail::Node& self) {
        MatRM dout(g.cout, cols);
        for (std::size_t n = 0; n < g.n; ++n) {
          for (std::size_t co = 0; co < g.cout; ++co) {
            const double* src = self.grad.data() + (n * g.cout + co) * hwo;
            std::copy(src, src + hwo, dout.data() + co * cols + n * hwo);
          }
        }
        auto& x = *self.inputs[0];
        auto& w = *self.inputs[1];
        auto& b = *self.inputs[2];
        if (w.requires_grad) {
          MapRM(w.grad.data(), g.cout, rows).noalias() +=
              dout * col.transpose();
        }
        if (b.requires_grad) {
          for (std::size_t co = 0; co < g.cout; ++co) b.grad[co] += dout.row(co).sum();
        }
        if (x.requires_grad) {
          MatRM dcol = CMapRM(w.value.data(), g.cout, rows).transpose() * dout;
          col2im_add(dcol.data(), g, x.grad.data());
        }
      });
}

Tensor conv_transpose2d(const Tensor& input, const Tensor& weight, const Tensor& bias,
                        Stride2d stride) {
  require_rank(input, 4, "conv_transpose2d", "input");
  require_rank(weight, 4, "conv_transpose2d", "weight");
  require_rank(bias, 1, "conv_transpose2d", "bias");
  if (weight.dim(2) != 2 || weight.dim(3) != 2 || stride.h != 2 || stride.w != 2) {
    throw ConfigError("conv_transpose2d: only kernel 2 / stride 2 is supported");
  }
  const std::size_t n_batch = input.dim(0), cin = input.dim(1), h = input.dim(2),
                    w = input.dim(3);
  require(weight.dim(0) == cin, "conv_transpose2d: weight expects " +
                                    std::to_string(weight.dim(0)) + " input channels, got " +
                                    std::to_string(cin));
  const std::size_t cout = weight.dim(1);
  require(bias.dim(0) == cout, "conv_transpose2d: bias length must equal output channels");
  const std::size_t hw = h * w;
  const std::size_t cols = n_batch * hw;
  const std::size_t taps = cout * 4;

  // X[ci, n*hw + p]
  MatRM xmat(cin, cols);
  for (std::size_t n = 0; n < n_batch; ++n) {
    for (std::size_t ci = 0; ci < cin; ++ci) {
      const double* src = input.data().data() + (n * cin + ci) * hw;
      std::copy(src, src + hw, xmat.data() + ci * cols + n * hw);
    }
  }
  // Y[(co*2 + a)*2 + b, n*hw + p] = sum_ci W[ci, (co,a,b)] X[ci, .]
  MatRM ymat = CMapRM(weight.data().data(), cin, taps).transpose() * xmat;

  const std::size_t ho = 2 * h, wo = 2 * w;
  std::vector<double> out(n_batch * cout * ho * wo);
  const double* bptr = bias.data().data();
  for (std::size_t n = 0; n < n_batch; ++n) {
    for (std::size_t co = 0; co < cout; ++co) {
      double* plane = out.data() + (n * cout + co) * ho * wo;
      for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
          const double* src = ymat.data() + ((co * 2 + a) * 2 + b) * cols + n * hw;
          for (std::size_t i = 0; i < h; ++i) {
            for (std::size_t j = 0; j < w; ++j) {
              plane[(2 * i + a) * wo + 2 * j + b] = src[i * w + j] + bptr[co];
            }
          }
        }
      }
    }
  }

  return Tensor::make_result(
      {n_batch, cout, ho, wo}, std::move(out), {input, weight, bias}, "conv_transpose2d",
      [=, xmat = std::move(xmat)](detail::Node& self) {
        MatRM dy(taps, cols);
        for (std::size_t n = 0; n < n_batch; ++n) {
          for (std::size_t co = 0; co < cout; ++co) {
            const double* plane = self.grad.data() + (n * cout + co) * ho * wo;
            for (std::size_t a = 0; a < 2; ++a) {
              for (std::size_t b = 0; b < 2; ++b) {
                double* dst = dy.data() + ((co * 2 + a) * 2 + b) * cols + n * hw;
                for (std::size_t i = 0; i < h; ++i) {
                  for (std::size_t j = 0; j < w; ++j) {
                    dst[i * w + j] = plane[(2 * i + a) * wo + 2 * j + b];
                  }
                }
              }
            }
          }
        }
        auto& x = *self.inputs[0];
        auto& wt = *self.inputs[1];
        auto& bs = *self.inputs[2];
        if (wt.requires_grad) {
          MapRM(wt.grad.data(), cin, taps).noalias() += xmat * dy.transpose();
        }
        if (bs.requires_grad) {
          for (std::size_t co = 0; co < cout; ++co) {
            bs.grad[co] += dy.middleRows(co * 4, 4).sum();
          }
        }
        if (x.requires_grad) {
          MatRM dx = CMapRM(wt.value.data(), cin, taps) * dy;
          for (std::size_t n = 0; n < n_batch; ++n) {
            for (std::size_t ci = 0; ci < cin; ++ci) {
              double* dst = x.grad.data() + (n * cin + ci) * hw;
              const double* src = dx.data() + ci * cols + n * hw;
              for (std::size_t p = 0; p < hw; ++p) dst[p] += src[p];
            }
          }
        }
      });
}

Tensor instance_norm2d(const Tensor& input, const Tensor& gain, const Tensor& offset,
                       double eps) {
  require_rank(input, 4, "instance_norm2d", "input");
  if (!(eps > 0.0)) throw ConfigError("instance_norm2d: eps must be positive");
  const std::size_t n_batch = input.dim(0), channels = input.dim(1);
  const std::size_t hw = input.dim(2) * input.dim(3);
  require(gain.numel() == channels && offset.numel() == channels,
          "instance_norm2d: gain/offset length must equal channel count");

  std::vector<double> xhat(input.numel());
  std::vector<double> inv_std(n_batch * channels);
  std::vector<double> out(input.numel());
  const double* x = input.data().data();
  for (std::size_t nc = 0; nc < n_batch * channels; ++nc) {
    const double* src = x + nc * hw;
    double mu = 0.0;
    for (std::size_t i = 0; i < hw; ++i) mu += src[i];
    mu /= static_cast<double>(hw);
    double var = 0.0;
    for (std::size_t i = 0; i < hw; ++i) var += (src[i] - mu) * (src[i] - mu);
    var /= static_cast<double>(hw);
    const double is = 1.0 / std::sqrt(var + eps);
    inv_std[nc] = is;
    const std::size_t c = nc % channels;
    const double g = gain.data()[c], o = offset.data()[c];
    for (std::size_t i = 0; i < hw; ++i) {
      const double v = (src[i] - mu) * is;
      xhat[nc * hw + i] = v;
      out[nc * hw + i] = g * v + o;
    }
  }

  return Tensor::make_result(
      input.shape(), std::move(out), {input, gain, offset}, "instance_norm2d",
      [=, xhat = std::move(xhat), inv_std = std::move(inv_std)](detail::Node& self) {
        auto& xn = *self.inputs[0];
        auto& gn = *self.inputs[1];
        auto& on = *self.inputs[2];
        const double inv_hw = 1.0 / static_cast<double>(hw);
        for (std::size_t nc = 0; nc < n_batch * channels; ++nc) {
          const std::size_t c = nc % channels;
          const double* dy = self.grad.data() + nc * hw;
          const double* xh = xhat.data() + nc * hw;
          double sum_dy = 0.0, sum_dy_xh = 0.0;
          for (std::size_t i = 0; i < hw; ++i) {
            sum_dy += dy[i];
            sum_dy_xh += dy[i] * xh[i];
          }
          if (gn.requires_grad) gn.grad[c] += sum_dy_xh;
          if (on.requires_grad) on.grad[c] += sum_dy;
          if (xn.requires_grad) {
            const double g = gn.value[c];
            const double mean_dy = sum_dy * inv_hw;
            const double mean_dy_xh = sum_dy_xh * inv_hw;
            double* dx = xn.grad.data() + nc * hw;
            for (std::size_t i = 0; i < hw; ++i) {
              dx[i] += g * inv_std[nc] * (dy[i] - mean_dy - xh[i] * mean_dy_xh);
            }
          }
        }
      });
}

Tensor relu(const Tensor& x) {
  std::vector<double> out(x.numel());
  const auto in = x.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
  return Tensor::make_result(x.shape(), std::move(out), {x}, "relu", [](detail::Node& self) {
    auto& xn = *self.inputs[0];
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      if (xn.value[i] > 0.0) xn.grad[i] += self.grad[i];
    }
  });
}

Tensor leaky_relu(const Tensor& x, double slope) {
  if (!(slope > 0.0 && slope < 1.0)) {
    throw ConfigError("leaky_relu: slope must lie in (0, 1), got " + std::to_string(slope));
  }
  std::vector<double> out(x.numel());
  const auto in = x.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = in[i] > 0.0 ? in[i] : slope * in[i];
  return Tensor::make_result(
      x.shape(), std::move(out), {x}, "leaky_relu", [slope](detail::Node& self) {
        auto& xn = *self.inputs[0];
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
          xn.grad[i] += xn.value[i] > 0.0 ? self.grad[i] : slope * self.grad[i];
        }
      });
}

Tensor dense(const Tensor& input, const Tensor& weight, const Tensor& bias) {
  require_rank(input, 2, "dense", "input");
  require_rank(weight, 2, "dense", "weight");
  require_rank(bias, 1, "dense", "bias");
  const std::size_t n = input.dim(0), f = input.dim(1), o = weight.dim(1);
  require(weight.dim(0) == f, "dense: inner dimensions disagree " + shape_str(input.shape()) +
                                  " x " + shape_str(weight.shape()));
  require(bias.dim(0) == o, "dense: bias length must equal output features");

  MatRM out = CMapRM(input.data().data(), n, f) * CMapRM(weight.data().data(), f, o);
  out.rowwise() += Eigen::Map<const Eigen::RowVectorXd>(bias.data().data(), o);
  std::vector<double> data(out.data(), out.data() + n * o);
  return Tensor::make_result(
      {n, o}, std::move(data), {input, weight, bias}, "dense",
      [n, f, o](detail::Node& self) {
        CMapRM dout(self.grad.data(), n, o);
        auto& x = *self.inputs[0];
        auto& w = *self.inputs[1];
        auto& b = *self.inputs[2];
        if (w.requires_grad) {
          MapRM(w.grad.data(), f, o).noalias() += CMapRM(x.value.data(), n, f).transpose() * dout;
        }
        if (b.requires_grad) {
          for (std::size_t j = 0; j < o; ++j) b.grad[j] += dout.col(j).sum();
        }
        if (x.requires_grad) {
          MapRM(x.grad.data(), n, f).noalias() += dout * CMapRM(w.value.data(), f, o).transpose();
        }
      });
}

Tensor reshape(const Tensor& x, Shape shape) {
  require(shape_numel(shape) == x.numel(),
          "reshape: cannot view " + shape_str(x.shape()) + " as " + shape_str(shape));
  std::vector<double> data(x.data().begin(), x.data().end());
  return Tensor::make_result(std::move(shape), std::move(data), {x}, "reshape",
                             [](detail::Node& self) {
                               auto& xn = *self.inputs[0];
                               for (std::size_t i = 0; i < self.grad.size(); ++i) {
                                 xn.grad[i] += self.grad[i];
                               }
                             });
}

Tensor flatten(const Tensor& x) { return reshape(x, {x.dim(0), x.numel() / x.dim(0)}); }

Tensor l1_distance(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "l1_distance");
  const auto av = a.data(), bv = b.data();
  double acc = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) acc += std::abs(av[i] - bv[i]);
  const double inv_n = 1.0 / static_cast<double>(av.size());
  return Tensor::make_result({1}, {acc * inv_n}, {a, b}, "l1_distance",
                             [inv_n](detail::Node& self) {
                               auto& an = *self.inputs[0];
                               auto& bn = *self.inputs[1];
                               const double g = self.grad[0] * inv_n;
                               for (std::size_t i = 0; i < an.value.size(); ++i) {
                                 const double d = an.value[i] - bn.value[i];
                                 const double s = d > 0.0 ? g : (d < 0.0 ? -g : 0.0);
                                 if (an.requires_grad) an.grad[i] += s;
                                 if (bn.requires_grad) bn.grad[i] -= s;
                               }
                             });
}

Tensor square_error(const Tensor& a, const Tensor& target) {
  require_same_shape(a, target, "square_error");
  const auto av = a.data(), tv = target.data();
  double acc = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) acc += (av[i] - tv[i]) * (av[i] - tv[i]);
  const double inv_n = 1.0 / static_cast<double>(av.size());
  return Tensor::make_result({1}, {acc * inv_n}, {a, target}, "square_error",
                             [inv_n](detail::Node& self) {
                               auto& an = *self.inputs[0];
                               auto& tn = *self.inputs[1];
                               const double g = 2.0 * self.grad[0] * inv_n;
                               for (std::size_t i = 0; i < an.value.size(); ++i) {
                                 const double d = g * (an.value[i] - tn.value[i]);
                                 if (an.requires_grad) an.grad[i] += d;
                                 if (tn.requires_grad) tn.grad[i] -= d;
                               }
                             });
}

Tensor square_error(const Tensor& a, double target) {
  return square_error(a, Tensor::full(a.shape(), target));
}

Tensor weighted_square_error(const Tensor& scores, std::span<const double> targets,
                             std::span<const double> weights) {
  require(scores.numel() == targets.size() && scores.numel() == weights.size(),
          "weighted_square_error: " + std::to_string(scores.numel()) + " scores, " +
              std::to_string(targets.size()) + " targets, " + std::to_string(weights.size()) +
              " weights");
  const auto s = scores.data();
  double acc = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    acc += weights[j] * (s[j] - targets[j]) * (s[j] - targets[j]);
  }
  std::vector<double> t(targets.begin(), targets.end());
  std::vector<double> w(weights.begin(), weights.end());
  return Tensor::make_result({1}, {acc}, {scores}, "weighted_square_error",
                             [t = std::move(t), w = std::move(w)](detail::Node& self) {
                               auto& sn = *self.inputs[0];
                               for (std::size_t j = 0; j < t.size(); ++j) {
                                 sn.grad[j] += self.grad[0] * 2.0 * w[j] * (sn.value[j] - t[j]);
                               }
                             });
}

Tensor frame_mean(const Tensor& patch) {
  require_rank(patch, 4, "frame_mean", "patch");
  require(patch.dim(1) == 1, "frame_mean: expects a single channel, got " +
                                 shape_str(patch.shape()));
  const std::size_t n = patch.dim(0), bins = patch.dim(2), frames = patch.dim(3);
  std::vector<double> out(n * frames, 0.0);
  const auto x = patch.data();
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t b = 0; b < bins; ++b) {
      const double* row = x.data() + (s * bins + b) * frames;
      for (std::size_t t = 0; t < frames; ++t) out[s * frames + t] += row[t];
    }
  }
  const double inv_b = 1.0 / static_cast<double>(bins);
  for (auto& v : out) v *= inv_b;
  return Tensor::make_result({n, frames}, std::move(out), {patch}, "frame_mean",
                             [n, bins, frames, inv_b](detail::Node& self) {
                               auto& xn = *self.inputs[0];
                               for (std::size_t s = 0; s < n; ++s) {
                                 for (std::size_t b = 0; b < bins; ++b) {
                                   double* row = xn.grad.data() + (s * bins + b) * frames;
                                   for (std::size_t t = 0; t < frames; ++t) {
                                     row[t] += self.grad[s * frames + t] * inv_b;
                                   }
                                 }
                               }
                             });
}

namespace {

Tensor linear_combine(const Tensor& a, const Tensor& b, double cb, const char* op) {
  require_same_shape(a, b, op);
  std::vector<double> out(a.numel());
  const auto av = a.data(), bv = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] + cb * bv[i];
  return Tensor::make_result(a.shape(), std::move(out), {a, b}, op, [cb](detail::Node& self) {
    auto& an = *self.inputs[0];
    auto& bn = *self.inputs[1];
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      if (an.requires_grad) an.grad[i] += self.grad[i];
      if (bn.requires_grad) bn.grad[i] += cb * self.grad[i];
    }
  });
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) { return linear_combine(a, b, 1.0, "add"); }
Tensor sub(const Tensor& a, const Tensor& b) { return linear_combine(a, b, -1.0, "sub"); }

Tensor scale(const Tensor& a, double factor) {
  std::vector<double> out(a.data().begin(), a.data().end());
  for (auto& v : out) v *= factor;
  return Tensor::make_result(a.shape(), std::move(out), {a}, "scale",
                             [factor](detail::Node& self) {
                               auto& an = *self.inputs[0];
                               for (std::size_t i = 0; i < self.grad.size(); ++i) {
                                 an.grad[i] += factor * self.grad[i];
                               }
                             });
}

Tensor add_scalar(const Tensor& a, double value) {
  std::vector<double> out(a.data().begin(), a.data().end());
  for (auto& v : out) v += value;
  return Tensor::make_result(a.shape(), std::move(out), {a}, "add_scalar",
                             [](detail::Node& self) {
                               auto& an = *self.inputs[0];
                               for (std::size_t i = 0; i < self.grad.size(); ++i) {
                                 an.grad[i] += self.grad[i];
                               }
                             });
}

Tensor sum(const Tensor& x) {
  double acc = 0.0;
  for (double v : x.data()) acc += v;
  return Tensor::make_result({1}, {acc}, {x}, "sum", [](detail::Node& self) {
    auto& xn = *self.inputs[0];
    for (auto& g : xn.grad) g += self.grad[0];
  });
}

Tensor mean(const Tensor& x) { return scale(sum(x), 1.0 / static_cast<double>(x.numel())); }

Tensor dot_const(const Tensor& x, std::span<const double> coeffs) {
  require(coeffs.size() == x.numel(), "dot_const: coefficient count mismatch");
  double acc = 0.0;
  const auto xv = x.data();
  for (std::size_t i = 0; i < xv.size(); ++i) acc += coeffs[i] * xv[i];
  std::vector<double> c(coeffs.begin(), coeffs.end());
  return Tensor::make_result({1}, {acc}, {x}, "dot_const",
                             [c = std::move(c)](detail::Node& self) {
                               auto& xn = *self.inputs[0];
                               for (std::size_t i = 0; i < c.size(); ++i) {
                                 xn.grad[i] += self.grad[0] * c[i];
                               }
                             });
}

}  // namespace advgan
