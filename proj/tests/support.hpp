// Copyright 2026 The levinv Authors. All rights reserved.
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

#include <filesystem>
#include <cstdint>
#include <string>

#include "levinv/instance.hpp"

namespace levinv::testing {

// Two rows, one column: s(x) = [x, x + 1]. At x = 1, sigma = [[0.8, 0.4], [0.4, 0.2]].
inline ProblemInstance two_by_one(const Vector& c) {
  Matrix a(2, 1);
  a << 1.0, 1.0;
  Vector b(2);
  b << 0.0, -1.0;
  return ProblemInstance(a, b, c);
}

inline ProblemInstance two_by_one(double c1, double c2) {
  Vector c(2);
  c << c1, c2;
  return two_by_one(c);
}

inline Vector scalar(double v) {
  Vector x(1);
  x << v;
  return x;
}

// A fresh scratch directory, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("levinv_" + tag + "_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace levinv::testing
