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

#include <stdexcept>
#include <string>

#include "levinv/types.hpp"

namespace levinv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Raised when some |s(x)_i| falls below the singularity guard.
class SingularScaling : public Error {
 public:
  SingularScaling(Index index, double value)
      : Error("S(x) is singular: |s_" + std::to_string(index) + "| = " + std::to_string(value)),
        index_(index),
        value_(value) {}

  Index index() const noexcept { return index_; }
  double value() const noexcept { return value_; }

 private:
  Index index_;
  double value_;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents: bad syntax, non-finite numbers, wrong counts.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A finite-difference probe left the region where the function is defined.
class DomainCrossing : public Error {
 public:
  DomainCrossing(Index coordinate, const std::string& what)
      : Error("finite-difference probe along coordinate " + std::to_string(coordinate) +
              " left the domain: " + what),
        coordinate_(coordinate) {}

  Index coordinate() const noexcept { return coordinate_; }

 private:
  Index coordinate_;
};

class InvalidStart : public Error {
 public:
  using Error::Error;
};

class SingularHessian : public Error {
 public:
  using Error::Error;
};

class EmptyRun : public Error {
 public:
  using Error::Error;
};

class GenerationFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace levinv
