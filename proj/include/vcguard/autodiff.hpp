// Copyright 2026 The vcguard Authors
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

#ifndef VCGUARD_AUTODIFF_HPP
#define VCGUARD_AUTODIFF_HPP

// Reverse-mode automatic differentiation over dense Eigen arrays.
//
// A Tape owns an append-only list of nodes. Every op appends one node holding
// its forward value and a vector-Jacobian product rule; parents always precede
// the node, so backward() is a single sweep in reverse insertion order.
// Column vectors are n x 1 matrices, scalars are 1 x 1.

#include "vcguard/common.hpp"

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

namespace vcguard::ad {

using Array = Matrix;

class Tape;

class Var {
 public:
  Var() = default;

  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  const Array& value() const;
  Index rows() const { return value().rows(); }
  Index cols() const { return value().cols(); }
  Index size() const { return value().size(); }
  Real scalar() const;
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

using BackwardRule = std::function<void(Tape&, const Array& grad_out)>;

struct TapeNode {
  Array value;
  Array grad;
  std::vector<std::size_t> parents;
  BackwardRule backward;
  const char* op = "leaf";
  bool requires_grad = false;
};

class Tape {
 public:
  explicit Tape(std::uint64_t rng_seed = 0) : rng_seed_(rng_seed) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Differentiable input.
  Var leaf(Array value);
  Var constant(Array value);

  // Appends an op node. `rule` receives the gradient of the root w.r.t. this
  // node and must accumulate into the parents through accumulate().
  Var record(const char* op, Array value, std::initializer_list<Var> parents, BackwardRule rule);

  // Throws if root is not 1 x 1. Resets all gradients before the sweep.
  void backward(Var root);

  void accumulate(Var target, const Array& contribution);
  template <typename Derived>
  void accumulate(Var target, const Eigen::MatrixBase<Derived>& contribution) {
    accumulate(target, Array(contribution));
  }

  const Array& value(std::size_t id) const { return nodes_[id].value; }
  // Gradient of the last backward root. Zeros for nodes that were not reached.
  Array grad(Var v) const;
  bool requires_grad(Var v) const { return nodes_[v.id()].requires_grad; }
  const TapeNode& node(std::size_t id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }
  std::uint64_t rng_seed() const { return rng_seed_; }

 private:
  std::deque<TapeNode> nodes_;
  std::uint64_t rng_seed_;
};

enum class Reduction { Sum, Mean };

inline constexpr Real kSqrtEps = 1e-12;
inline constexpr Real kLogAmin = 1e-10;

Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, Real s);
Var add_scalar(Var a, Real s);
Var matmul(Var a, Var b);
// a * b for a shared constant b that is not copied onto the tape.
Var matmul(Var a, std::shared_ptr<const Array> b);
Var square(Var a);
Var sqrt_eps(Var a, Real eps = kSqrtEps);
Var abs(Var a);
Var log_floor(Var a, Real amin = kLogAmin);
Var relu(Var a);
Var mean(Var a);
Var sum(Var a);
Var l1_distance(Var a, Var b, Reduction reduction = Reduction::Sum);
Var l2_norm(Var a);
Var dot(Var a, Var b);
Var cosine_similarity(Var a, Var b);
Var l2_normalize(Var a);
Var clamp_minmax(Var a, Real lo, Real hi);
// Elementwise max(a, max(a) - range). The threshold moves with max(a), so
// gradient of floored entries is routed to the arg-max entry.
Var floor_below_max(Var a, Real range);
// Contiguous slice [start, start + len) of a column vector.
Var frame_gather(Var x, Index start, Index len);
// n_frames x frame_len matrix of frames starting at t * hop; reads past the
// end of x are zero.
Var frames(Var x, Index frame_len, Index hop, Index n_frames);
// Column means: r x c -> 1 x c.
Var mean_rows(Var a);
// y = [re | im] with `bins` columns each -> re^2 + im^2.
Var complex_power(Var y, Index bins);
// Pads a column vector with zeros to `len` rows.
Var zero_pad(Var x, Index len);
inline Var constant(Tape& tape, Array c) { return tape.constant(std::move(c)); }
inline Var stop_gradient(Var a) { return a.tape().constant(a.value()); }

struct GradCheckResult {
  Real max_rel_error = 0;
  Index worst_index = -1;
  bool finite = true;
};

using ScalarFunction = std::function<Var(Tape&, Var)>;

// max_i |analytic_i - central_i| / max(1, |central_i|) with central differences
// of step h. Non-finite evaluations are reported through `finite`.
GradCheckResult grad_check(const ScalarFunction& f, const Array& x, Real h = 1e-4);
// Same, restricted to the listed coordinates (for inputs too large to probe fully).
GradCheckResult grad_check(const ScalarFunction& f, const Array& x, Real h, const std::vector<Index>& coords);

namespace testing {
// Scales the incoming gradient of every node whose op name matches by 1.5.
// Used to verify that grad_check catches a broken rule.
void corrupt_backward(const std::string& op);
void clear_corruption();
}  // namespace testing

}  // namespace vcguard::ad

#endif  // VCGUARD_AUTODIFF_HPP
