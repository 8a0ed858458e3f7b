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

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace advgan {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

namespace detail {

// One vertex of the reverse-mode graph. Results of differentiable ops keep
// shared references to their inputs, so a graph lives exactly as long as the
// tensors that reach it.
struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;  // allocated lazily, same size as value
  bool requires_grad = false;
  const char* op = "leaf";
  std::vector<std::shared_ptr<Node>> inputs;
  // Reads this->grad and accumulates into the inputs' grads.
  std::function<void(Node&)> backward;

  std::vector<double>& grad_buffer();
};

}  // namespace detail

// Dense row-major double tensor with reverse-mode differentiation.
//
// Tensor is a cheap handle: copies share the underlying node. Values are
// immutable once produced by an op; only leaf parameters are mutated, and
// only between steps (optimizer updates).
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor from(Shape shape, std::vector<double> data,
                     bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);

  // Builds an op result. If no input requires a gradient, the inputs and the
  // backward closure are dropped and the result is a constant.
  static Tensor make_result(Shape shape, std::vector<double> data,
                            std::vector<Tensor> inputs, const char* op,
                            std::function<void(detail::Node&)> backward);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const;
  std::size_t dim(std::size_t axis) const;
  std::size_t rank() const { return shape().size(); }
  std::size_t numel() const;
  bool requires_grad() const;
  const char* op() const;

  std::span<const double> data() const;
  // Parameter updates only; never call on an op result that is still part
  // of a live graph.
  std::span<double> mutable_data();

  // Empty span when no gradient has been accumulated yet.
  std::span<const double> grad() const;
  std::span<double> mutable_grad();
  void zero_grad();

  double item() const;

  // Same values, cut from the graph. Nothing flows back through the result.
  Tensor detach() const;

  // Deep copy of values into a fresh leaf with the given grad flag.
  Tensor clone(bool requires_grad) const;

  // Seeds d(this)/d(this) = 1 and propagates to every reachable node that
  // requires a gradient, each visited once in reverse topological order.
  void backward() const;

  const std::shared_ptr<detail::Node>& node() const { return node_; }

 private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
  std::shared_ptr<detail::Node> node_;
};

// Stop-gradient; alias of Tensor::detach for use in loss expressions.
inline Tensor stop_gradient(const Tensor& t) { return t.detach(); }

// Throws NumericError naming `where` if any value is NaN or Inf.
void check_finite(std::span<const double> values, const char* where);

}  // namespace advgan
