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

#include "vcguard/autodiff.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>

namespace vcguard::ad {

namespace {

std::mutex g_corrupt_mutex;
std::string g_corrupt_op;
std::atomic<bool> g_corrupt_active{false};

bool is_corrupted(const char* op) {
  if (!g_corrupt_active.load(std::memory_order_relaxed)) return false;
  std::lock_guard<std::mutex> lock(g_corrupt_mutex);
  return g_corrupt_op == op;
}

std::string shape_str(const Array& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

void require_same_shape(const char* op, Var a, Var b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(std::string(op) + ": shape mismatch " + shape_str(a.value()) + " vs " +
                shape_str(b.value()));
  }
}

void require_same_tape(Var a, Var b) {
  if (&a.tape() != &b.tape()) throw Error("operands live on different tapes");
}

}  // namespace

const Array& Var::value() const { return tape_->value(id_); }

Real Var::scalar() const {
  const Array& v = value();
  if (v.size() != 1) throw Error("scalar() on node of shape " + shape_str(v));
  return v(0, 0);
}

Var Tape::leaf(Array value) {
  TapeNode node;
  node.value = std::move(value);
  node.requires_grad = true;
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Array value) {
  TapeNode node;
  node.value = std::move(value);
  node.op = "constant";
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(const char* op, Array value, std::initializer_list<Var> parents, BackwardRule rule) {
  if (!value.allFinite()) {
    throw Error(std::string("non-finite value produced by '") + op + "' at node " +
                std::to_string(nodes_.size()));
  }
  TapeNode node;
  node.value = std::move(value);
  node.op = op;
  for (const Var& p : parents) {
    if (&p.tape() != this) throw Error(std::string(op) + ": parent from a different tape");
    node.parents.push_back(p.id());
    node.requires_grad = node.requires_grad || nodes_[p.id()].requires_grad;
  }
  if (node.requires_grad) node.backward = std::move(rule);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

void Tape::accumulate(Var target, const Array& contribution) {
  TapeNode& node = nodes_[target.id()];
  if (!node.requires_grad) return;
  if (contribution.rows() != node.value.rows() || contribution.cols() != node.value.cols()) {
    throw Error(std::string("gradient shape mismatch at node ") + std::to_string(target.id()) +
                " (" + node.op + "): " + shape_str(contribution) + " into " + shape_str(node.value));
  }
  if (node.grad.size() == 0) {
    node.grad = contribution;
  } else {
    node.grad += contribution;
  }
}

void Tape::backward(Var root) {
  if (&root.tape() != this) throw Error("backward: root belongs to another tape");
  if (root.size() != 1) throw Error("backward: root must be scalar, got " + shape_str(root.value()));
  for (auto& node : nodes_) node.grad.resize(0, 0);
  if (!nodes_[root.id()].requires_grad) return;
  nodes_[root.id()].grad = Array::Ones(1, 1);
  for (std::size_t i = root.id() + 1; i-- > 0;) {
    TapeNode& node = nodes_[i];
    if (!node.backward || node.grad.size() == 0) continue;
    if (is_corrupted(node.op)) {
      const Array scaled = 1.5 * node.grad;
      node.backward(*this, scaled);
    } else {
      node.backward(*this, node.grad);
    }
  }
}

Array Tape::grad(Var v) const {
  const TapeNode& node = nodes_[v.id()];
  if (node.grad.size() == 0) return Array::Zero(node.value.rows(), node.value.cols());
  return node.grad;
}

Var add(Var a, Var b) {
  require_same_tape(a, b);
  require_same_shape("add", a, b);
  return a.tape().record("add", a.value() + b.value(), {a, b}, [a, b](Tape& t, const Array& g) {
    t.accumulate(a, g);
    t.accumulate(b, g);
  });
}

Var sub(Var a, Var b) {
  require_same_tape(a, b);
  require_same_shape("sub", a, b);
  return a.tape().record("sub", a.value() - b.value(), {a, b}, [a, b](Tape& t, const Array& g) {
    t.accumulate(a, g);
    t.accumulate(b, -g);
  });
}

Var mul(Var a, Var b) {
  require_same_tape(a, b);
  require_same_shape("mul", a, b);
  return a.tape().record("mul", a.value().cwiseProduct(b.value()), {a, b},
                         [a, b](Tape& t, const Array& g) {
                           if (t.requires_grad(a)) t.accumulate(a, g.cwiseProduct(b.value()));
                           if (t.requires_grad(b)) t.accumulate(b, g.cwiseProduct(a.value()));
                         });
}

Var scale(Var a, Real s) {
  return a.tape().record("scale", s * a.value(), {a},
                         [a, s](Tape& t, const Array& g) { t.accumulate(a, s * g); });
}

Var add_scalar(Var a, Real s) {
  return a.tape().record("add_scalar", a.value().array() + s, {a},
                         [a](Tape& t, const Array& g) { t.accumulate(a, g); });
}

Var matmul(Var a, Var b) {
  require_same_tape(a, b);
  if (a.cols() != b.rows()) {
    throw Error("matmul: inner dimensions differ " + shape_str(a.value()) + " * " +
                shape_str(b.value()));
  }
  Array out = a.value() * b.value();
  return a.tape().record("matmul", std::move(out), {a, b}, [a, b](Tape& t, const Array& g) {
    if (t.requires_grad(a)) t.accumulate(a, g * b.value().transpose());
    if (t.requires_grad(b)) t.accumulate(b, a.value().transpose() * g);
  });
}

Var matmul(Var a, std::shared_ptr<const Array> b) {
  if (!b) throw Error("matmul: null constant operand");
  if (a.cols() != b->rows()) {
    throw Error("matmul: inner dimensions differ " + shape_str(a.value()) + " * " + shape_str(*b));
  }
  Array out = a.value() * (*b);
  return a.tape().record("matmul", std::move(out), {a}, [a, b](Tape& t, const Array& g) {
    t.accumulate(a, g * b->transpose());
  });
}

Var square(Var a) {
  return a.tape().record("square", a.value().array().square().matrix(), {a},
                         [a](Tape& t, const Array& g) {
                           t.accumulate(a, 2.0 * g.cwiseProduct(a.value()));
                         });
}

Var sqrt_eps(Var a, Real eps) {
  if (eps < 0) throw Error("sqrt_eps: eps must be non-negative");
  Array out = (a.value().array() + eps).sqrt().matrix();
  const std::size_t self = a.tape().size();
  return a.tape().record("sqrt_eps", std::move(out), {a}, [a, self](Tape& t, const Array& g) {
    t.accumulate(a, (0.5 * g.array() / t.value(self).array()).matrix());
  });
}

Var abs(Var a) {
  return a.tape().record("abs", a.value().cwiseAbs(), {a}, [a](Tape& t, const Array& g) {
    const Array sign = a.value().unaryExpr([](Real v) { return Real((v > 0) - (v < 0)); });
    t.accumulate(a, g.cwiseProduct(sign));
  });
}

Var log_floor(Var a, Real amin) {
  if (!(amin > 0)) throw Error("log_floor: amin must be positive");
  Array out = a.value().array().max(amin).log().matrix();
  return a.tape().record("log_floor", std::move(out), {a}, [a, amin](Tape& t, const Array& g) {
    const Array& x = a.value();
    t.accumulate(a, g.binaryExpr(x, [amin](Real gi, Real xi) { return xi > amin ? gi / xi : 0.0; }));
  });
}

Var relu(Var a) {
  return a.tape().record("relu", a.value().cwiseMax(0.0), {a}, [a](Tape& t, const Array& g) {
    t.accumulate(a, g.binaryExpr(a.value(), [](Real gi, Real xi) { return xi > 0 ? gi : 0.0; }));
  });
}

Var mean(Var a) {
  const Index n = a.size();
  if (n == 0) throw Error("mean of empty array");
  Array out(1, 1);
  out(0, 0) = a.value().mean();
  return a.tape().record("mean", std::move(out), {a}, [a, n](Tape& t, const Array& g) {
    t.accumulate(a, Array::Constant(a.rows(), a.cols(), g(0, 0) / static_cast<Real>(n)));
  });
}

Var sum(Var a) {
  Array out(1, 1);
  out(0, 0) = a.value().sum();
  return a.tape().record("sum", std::move(out), {a}, [a](Tape& t, const Array& g) {
    t.accumulate(a, Array::Constant(a.rows(), a.cols(), g(0, 0)));
  });
}

Var l1_distance(Var a, Var b, Reduction reduction) {
  Var d = abs(sub(a, b));
  return reduction == Reduction::Sum ? sum(d) : mean(d);
}

Var l2_norm(Var a) {
  Array out(1, 1);
  out(0, 0) = a.value().norm();
  return a.tape().record("l2_norm", std::move(out), {a}, [a](Tape& t, const Array& g) {
    const Real n = a.value().norm();
    if (n > 0) t.accumulate(a, (g(0, 0) / n) * a.value());
  });
}

Var dot(Var a, Var b) { return sum(mul(a, b)); }

Var cosine_similarity(Var a, Var b) {
  require_same_tape(a, b);
  require_same_shape("cosine_similarity", a, b);
  const Real na = a.value().norm();
  const Real nb = b.value().norm();
  if (na == 0 || nb == 0) throw Error("cosine_similarity: zero-norm operand");
  Array out(1, 1);
  out(0, 0) = a.value().cwiseProduct(b.value()).sum() / (na * nb);
  const Real c = out(0, 0);
  return a.tape().record("cosine_similarity", std::move(out), {a, b},
                         [a, b, na, nb, c](Tape& t, const Array& g) {
                           const Real s = g(0, 0);
                           if (t.requires_grad(a)) {
                             t.accumulate(a, s * (b.value() / (na * nb) - c * a.value() / (na * na)));
                           }
                           if (t.requires_grad(b)) {
                             t.accumulate(b, s * (a.value() / (na * nb) - c * b.value() / (nb * nb)));
                           }
                         });
}

Var l2_normalize(Var a) {
  const Real n = a.value().norm();
  if (n == 0) throw Error("l2_normalize: zero-norm input");
  const std::size_t self = a.tape().size();
  return a.tape().record("l2_normalize", a.value() / n, {a}, [a, self, n](Tape& t, const Array& g) {
    const Array& u = t.value(self);
    const Real proj = u.cwiseProduct(g).sum();
    t.accumulate(a, (g - proj * u) / n);
  });
}

Var clamp_minmax(Var a, Real lo, Real hi) {
  if (lo > hi) throw Error("clamp_minmax: lo > hi");
  return a.tape().record("clamp_minmax", a.value().cwiseMax(lo).cwiseMin(hi), {a},
                         [a, lo, hi](Tape& t, const Array& g) {
                           t.accumulate(a, g.binaryExpr(a.value(), [lo, hi](Real gi, Real xi) {
                             return (xi >= lo && xi <= hi) ? gi : 0.0;
                           }));
                         });
}

Var floor_below_max(Var a, Real range) {
  const Array& x = a.value();
  if (x.size() == 0) throw Error("floor_below_max: empty input");
  Index r = 0, c = 0;
  const Real top = x.maxCoeff(&r, &c);
  const Real threshold = top - range;
  return a.tape().record("floor_below_max", x.cwiseMax(threshold), {a},
                         [a, r, c, threshold](Tape& t, const Array& g) {
                           const Array& xv = a.value();
                           Array out = g;
                           Real routed = 0;
                           for (Index j = 0; j < xv.cols(); ++j) {
                             for (Index i = 0; i < xv.rows(); ++i) {
                               if (xv(i, j) < threshold) {
                                 routed += g(i, j);
                                 out(i, j) = 0;
                               }
                             }
                           }
                           out(r, c) += routed;
                           t.accumulate(a, out);
                         });
}

Var frame_gather(Var x, Index start, Index len) {
  if (x.cols() != 1) throw Error("frame_gather: expected a column vector");
  if (start < 0 || len < 0 || start + len > x.rows()) {
    throw Error("frame_gather: range [" + std::to_string(start) + ", " + std::to_string(start + len) +
                ") outside length " + std::to_string(x.rows()));
  }
  return x.tape().record("frame_gather", x.value().middleRows(start, len), {x},
                         [x, start, len](Tape& t, const Array& g) {
                           Array full = Array::Zero(x.rows(), 1);
                           full.middleRows(start, len) = g;
                           t.accumulate(x, full);
                         });
}

Var frames(Var x, Index frame_len, Index hop, Index n_frames) {
  if (x.cols() != 1) throw Error("frames: expected a column vector");
  if (frame_len < 1 || hop < 1 || n_frames < 0) throw Error("frames: invalid framing parameters");
  const Index n = x.rows();
  const Array& xv = x.value();
  Array out = Array::Zero(n_frames, frame_len);
  for (Index f = 0; f < n_frames; ++f) {
    const Index start = f * hop;
    const Index avail = std::clamp<Index>(n - start, 0, frame_len);
    if (avail > 0) out.row(f).head(avail) = xv.col(0).segment(start, avail).transpose();
  }
  return x.tape().record("frames", std::move(out), {x},
                         [x, frame_len, hop, n_frames, n](Tape& t, const Array& g) {
                           Array acc = Array::Zero(n, 1);
                           for (Index f = 0; f < n_frames; ++f) {
                             const Index start = f * hop;
                             const Index avail = std::clamp<Index>(n - start, 0, frame_len);
                             if (avail > 0) acc.col(0).segment(start, avail) += g.row(f).head(avail).transpose();
                           }
                           t.accumulate(x, acc);
                         });
}

Var mean_rows(Var a) {
  const Index r = a.rows();
  if (r == 0) throw Error("mean_rows: no rows");
  return a.tape().record("mean_rows", a.value().colwise().mean(), {a}, [a, r](Tape& t, const Array& g) {
    t.accumulate(a, (g / static_cast<Real>(r)).replicate(r, 1));
  });
}

Var complex_power(Var y, Index bins) {
  if (y.cols() != 2 * bins) throw Error("complex_power: expected " + std::to_string(2 * bins) + " columns");
  const Array& v = y.value();
  Array out = v.leftCols(bins).array().square() + v.rightCols(bins).array().square();
  return y.tape().record("complex_power", std::move(out), {y}, [y, bins](Tape& t, const Array& g) {
    const Array& v = y.value();
    Array d(v.rows(), v.cols());
    d.leftCols(bins) = 2.0 * g.cwiseProduct(v.leftCols(bins));
    d.rightCols(bins) = 2.0 * g.cwiseProduct(v.rightCols(bins));
    t.accumulate(y, d);
  });
}

Var zero_pad(Var x, Index len) {
  if (x.cols() != 1) throw Error("zero_pad: expected a column vector");
  if (len < x.rows()) throw Error("zero_pad: target shorter than input");
  if (len == x.rows()) return x;
  Array out = Array::Zero(len, 1);
  out.topRows(x.rows()) = x.value();
  return x.tape().record("zero_pad", std::move(out), {x}, [x](Tape& t, const Array& g) {
    t.accumulate(x, g.topRows(x.rows()));
  });
}

GradCheckResult grad_check(const ScalarFunction& f, const Array& x, Real h) {
  std::vector<Index> coords(static_cast<std::size_t>(x.size()));
  for (Index i = 0; i < x.size(); ++i) coords[static_cast<std::size_t>(i)] = i;
  return grad_check(f, x, h, coords);
}

GradCheckResult grad_check(const ScalarFunction& f, const Array& x, Real h, const std::vector<Index>& coords) {
  GradCheckResult result;
  Array analytic;
  {
    Tape tape;
    Var in = tape.leaf(x);
    Var root = f(tape, in);
    tape.backward(root);
    analytic = tape.grad(in);
  }
  auto eval = [&](const Array& at) -> Real {
    Tape tape;
    Var in = tape.leaf(at);
    return f(tape, in).scalar();
  };
  Array probe = x;
  for (const Index i : coords) {
    if (i < 0 || i >= x.size()) throw Error("grad_check: coordinate out of range");
    const Real saved = probe(i);
    Real plus = 0, minus = 0;
    try {
      probe(i) = saved + h;
      plus = eval(probe);
      probe(i) = saved - h;
      minus = eval(probe);
    } catch (const Error&) {
      result.finite = false;
    }
    probe(i) = saved;
    const Real central = (plus - minus) / (2 * h);
    const Real err = std::abs(analytic(i) - central) / std::max<Real>(1.0, std::abs(central));
    if (!std::isfinite(err) || !std::isfinite(analytic(i))) {
      result.finite = false;
      continue;
    }
    if (result.worst_index < 0 || err > result.max_rel_error) {
      result.max_rel_error = err;
      result.worst_index = i;
    }
  }
  if (!result.finite) result.max_rel_error = std::numeric_limits<Real>::infinity();
  return result;
}

namespace testing {

void corrupt_backward(const std::string& op) {
  std::lock_guard<std::mutex> lock(g_corrupt_mutex);
  g_corrupt_op = op;
  g_corrupt_active.store(true);
}

void clear_corruption() {
  std::lock_guard<std::mutex> lock(g_corrupt_mutex);
  g_corrupt_op.clear();
  g_corrupt_active.store(false);
}

}  // namespace testing

}  // namespace vcguard::ad
