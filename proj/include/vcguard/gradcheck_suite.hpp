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

#ifndef VCGUARD_GRADCHECK_SUITE_HPP
#define VCGUARD_GRADCHECK_SUITE_HPP

#include "vcguard/common.hpp"

#include <string>
#include <vector>

namespace vcguard {

inline constexpr Real kCoreGradTolerance = 1e-4;
inline constexpr Real kStackGradTolerance = 1e-3;

struct GradCheckEntry {
  std::string name;
  std::string group;  // "core" or "stack"
  Real max_rel_error = 0;
  Real tolerance = 0;
  bool passed = false;
};

// Finite-difference checks of every tape op (away from kinks) and of the
// full loss stacks: mel L1, multi-scale mel L1, encoder cosine, the stage-1
// task loss and the stage-2 weighted total.
std::vector<GradCheckEntry> run_gradcheck_suite(std::uint64_t seed = 2024);

}  // namespace vcguard

#endif  // VCGUARD_GRADCHECK_SUITE_HPP
