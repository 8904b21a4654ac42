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

#ifndef VCGUARD_COMMON_HPP
#define VCGUARD_COMMON_HPP

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace vcguard {

using Real = double;
using Index = Eigen::Index;
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using RowVector = Eigen::Matrix<Real, 1, Eigen::Dynamic>;
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// splitmix64-seeded xoshiro256**. Distributions are computed by hand so that
// seeded streams are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Box-Muller; one value per call, the partner is discarded.
  double normal();

 private:
  std::uint64_t s_[4];
};

template <typename Scalar = Real>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> uniform_vector(Rng& rng, Index n, Scalar half_width) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(n);
  for (Index i = 0; i < n; ++i) v[i] = static_cast<Scalar>(rng.uniform(-half_width, half_width));
  return v;
}

}  // namespace vcguard

#endif  // VCGUARD_COMMON_HPP
