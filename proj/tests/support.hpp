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

#ifndef VCGUARD_TESTS_SUPPORT_HPP
#define VCGUARD_TESTS_SUPPORT_HPP

#include "vcguard/common.hpp"
#include "vcguard/pipeline.hpp"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

namespace vcguard::test {

// Versioned fixture root: $VCGUARD_TEST_DATA, else the copy in the source tree.
inline std::filesystem::path data_root() {
  if (const char* env = std::getenv(kTestDataEnv); env && *env) return env;
  return VCGUARD_SOURCE_TEST_DATA;
}

inline std::filesystem::path fixture(const std::string& name) { return data_root() / "v1" / name; }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() / ("vcguard_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline Vector random_signal(std::uint64_t seed, Index n, Real amp = 0.5) {
  Rng rng(seed);
  return uniform_vector(rng, n, amp);
}

}  // namespace vcguard::test

#endif  // VCGUARD_TESTS_SUPPORT_HPP
