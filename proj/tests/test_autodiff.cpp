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

#include "support.hpp"
#include "vcguard/autodiff.hpp"
#include "vcguard/gradcheck_suite.hpp"

#include <doctest.h>

#include <set>

using namespace vcguard;
using ad::Tape;
using ad::Var;

TEST_CASE("gradient of sum of squares is 2x") {
  Tape t;
  Matrix x(3, 1);
  x << 1.0, -2.0, 0.5;
  Var v = t.leaf(x);
  Var y = ad::sum(ad::square(v));
  t.backward(y);
  CHECK(y.scalar() == doctest::Approx(5.25));
  CHECK(t.grad(v).isApprox(2 * x));
}

TEST_CASE("gradients accumulate over shared subexpressions") {
  Tape t;
  Var x = t.leaf(Matrix::Constant(1, 1, 3.0));
  Var y = ad::mul(x, x);
  Var z = ad::add(y, ad::scale(x, 4.0));
  t.backward(z);
  CHECK(t.grad(x)(0, 0) == doctest::Approx(2 * 3.0 + 4.0));
}

TEST_CASE("backward needs a scalar root") {
  Tape t;
  Var x = t.leaf(Matrix::Ones(2, 1));
  CHECK_THROWS_AS(t.backward(ad::scale(x, 2.0)), Error);
}

TEST_CASE("non-finite forward values are reported with the node") {
  Tape t;
  Var x = t.leaf(Matrix::Constant(1, 1, 1e308));
  CHECK_THROWS_AS(ad::scale(x, 1e10), Error);
}

TEST_CASE("constants and unreached nodes get zero gradient") {
  Tape t;
  Var x = t.leaf(Matrix::Ones(2, 1));
  Var c = t.constant(Matrix::Ones(2, 1));
  Var unused = t.leaf(Matrix::Ones(2, 1));
  t.backward(ad::dot(x, c));
  CHECK(t.grad(c).isZero());
  CHECK(t.grad(unused).isZero());
  CHECK(t.grad(x).isApprox(Matrix::Ones(2, 1)));
  CHECK_FALSE(t.requires_grad(c));
}

TEST_CASE("floor_below_max sends floored gradient to the maximum") {
  Tape t;
  Matrix a(3, 1);
  a << 0.0, -100.0, -10.0;
  Var x = t.leaf(a);
  Var y = ad::floor_below_max(x, 80.0);
  CHECK(y.value()(1, 0) == -80.0);
  t.backward(ad::sum(y));
  CHECK(t.grad(x)(0, 0) == 2.0);
  CHECK(t.grad(x)(1, 0) == 0.0);
  CHECK(t.grad(x)(2, 0) == 1.0);
}

TEST_CASE("frames reads zeros past the end") {
  Tape t;
  Matrix x(5, 1);
  x << 1, 2, 3, 4, 5;
  Var f = ad::frames(t.leaf(x), 4, 2, 3);
  Matrix expected(3, 4);
  expected << 1, 2, 3, 4, 3, 4, 5, 0, 5, 0, 0, 0;
  CHECK(f.value() == expected);
}

TEST_CASE("gradient check suite passes for every op and stack") {
  const auto entries = run_gradcheck_suite();
  std::set<std::string> names;
  for (const auto& e : entries) {
    INFO(e.name << " " << e.max_rel_error);
    CHECK(e.passed);
    CHECK(e.tolerance == (e.group == "core" ? kCoreGradTolerance : kStackGradTolerance));
    names.insert(e.name);
  }
  for (const char* stack : {"mel_db_l1", "multi_scale_mel_l1", "encoder_cosine", "stage1_task_loss", "stage2_total"}) {
    CHECK(names.count(stack) == 1);
  }
}

TEST_CASE("a corrupted backward rule is caught") {
  for (const char* op : {"matmul", "log_floor"}) {
    ad::testing::corrupt_backward(op);
    const auto entries = run_gradcheck_suite();
    ad::testing::clear_corruption();
    bool failed = false;
    for (const auto& e : entries) failed = failed || !e.passed;
    INFO(op);
    CHECK(failed);
  }
}

TEST_CASE("grad_check reports evaluations that fail") {
  // The tape rejects non-finite values, so a probe that overflows surfaces as
  // an error inside the finite-difference loop.
  const auto r = ad::grad_check(
      [](Tape&, Var x) {
        if (x.value()(0, 0) > 1.0) throw Error("overflow");
        return ad::sum(x);
      },
      Matrix::Constant(1, 1, 1.0 - 5e-5));
  CHECK_FALSE(r.finite);
  CHECK(r.max_rel_error == std::numeric_limits<Real>::infinity());
}
