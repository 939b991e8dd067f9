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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "levinv/types.hpp"

namespace levinv {

/// Immutable problem statement: recover x from the target leverage
/// diagonal c of S(x)^{-1} A, where S(x) = diag(Ax - b).
///
/// Construction only enforces that A, b and c have consistent shapes.
/// Everything else (rank, range of c, n >= d) is reported by validate().
class ProblemInstance {
 public:
  ProblemInstance(Matrix a, Vector b, Vector c);

  const Matrix& A() const noexcept { return a_; }
  const Vector& b() const noexcept { return b_; }
  const Vector& c() const noexcept { return c_; }
  Index n() const noexcept { return a_.rows(); }
  Index d() const noexcept { return a_.cols(); }

  /// Same A and b with a different target.
  ProblemInstance with_target(Vector c) const;

 private:
  Matrix a_;
  Vector b_;
  Vector c_;
};

enum class ViolationKind { NonFinite, TooFewRows, RankDeficient, TargetOutOfRange };

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> warnings;
  Index rank = 0;
  double sigma_max_A = 0.0;
  double sigma_min_A = 0.0;
  // sum(c) - d; nonzero means c is not the leverage diagonal of any rank-d matrix.
  double trace_gap = 0.0;
  bool realizable = false;

  bool ok() const noexcept { return violations.empty(); }
  bool has(ViolationKind kind) const noexcept;
};

/// Rank tolerance is 1e-10 * sigma_max(A).
ValidationReport validate(const ProblemInstance& inst);

/// Regularization weights w (W = diag(w)) together with the strong-convexity
/// target l and the well-posedness margin beta they were derived from.
struct RegConfig {
  Vector w;
  double l = 0.0;
  double beta = 0.0;

  /// w = 0: the unregularized objective.
  static RegConfig none(Index n);

  /// w_i^2 = max(0, -44 beta + l / sigma_min(A)^2) + margin for every i.
  static RegConfig from_bounds(const ProblemInstance& inst, double l, double beta,
                               double margin = 1e-12);

  bool is_zero() const noexcept;
};

/// True when every w_i^2 >= -44 beta + l / sigma_min(A)^2.
bool satisfies_weight_bound(const RegConfig& reg, double sigma_min_A);

enum class Method { GradientDescent, Newton };

enum class StepPolicy { Fixed, Schedule };

/// Method-agnostic solve request; the solver converts it to its own config.
struct SolveSettings {
  Method method = Method::Newton;
  int max_iters = 100;
  double tol = 1e-12;
  StepPolicy step_policy = StepPolicy::Fixed;
  double eta = 1e-2;    // fixed step
  double alpha = 1.0;   // schedule gamma_k = 2 / (alpha (k + 1))
  int max_halvings = 30;
  std::uint64_t seed = 0;

  /// Throws levinv::Error when T < 1, a tolerance is not positive, or the
  /// chosen step policy has a non-positive parameter.
  void validate() const;
};

/// Text format: '#' comments, header lines n=<int> and d=<int>, then
/// sections "A:", "b:", "c:" of whitespace separated decimals (A row-major).
/// Numbers are written with 17 significant digits so loading is exact.
void save_instance(const ProblemInstance& inst, const std::filesystem::path& path);
ProblemInstance load_instance(const std::filesystem::path& path);

std::string format_instance(const ProblemInstance& inst);
ProblemInstance parse_instance(const std::string& text, const std::string& source = "<string>");

}  // namespace levinv
