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

#include <optional>
#include <string>
#include <vector>

#include "levinv/hessian.hpp"
#include "levinv/instance.hpp"
#include "levinv/objective.hpp"

namespace levinv {

struct GDConfig {
  StepPolicy policy = StepPolicy::Fixed;
  double eta = 1e-2;   // fixed step, >= 0
  double alpha = 1.0;  // schedule gamma_k = 2 / (alpha (k + 1)), > 0
  int max_iters = 1000;
  double grad_tol = 1e-12;
  int max_halvings = 30;
  double delta_min = kDeltaMin;

  void validate() const;
};

struct NewtonConfig {
  int max_iters = 50;
  double step_tol = 1e-12;  // stop once ||x_{t+1} - x_t|| <= step_tol (1 + ||x_t||)
  int max_halvings = 30;
  // Retry a singular factorization once with mu = 1e-10 ||H|| added to the diagonal.
  bool regularize_on_singular = true;
  double delta_min = kDeltaMin;
  HessianMode mode = HessianMode::ResidualCorrected;

  void validate() const;
};

enum class RunStatus { Converged, IterationCap, StepTrapped };

const char* to_string(RunStatus status);

/// One row per iterate x_0..x_T. Row 0 describes the start point; for t > 0,
/// step_size / halvings / time_ms describe the step that produced x_t.
/// grad_norm is ||g(x_t)||.
struct IterationRecord {
  int iter = 0;
  LossBreakdown loss;
  double grad_norm = 0.0;
  double step_size = 0.0;
  int halvings = 0;
  double time_ms = 0.0;
  double min_abs_s = 0.0;
  bool hessian_regularized = false;
  std::optional<double> r;  // ||x_t - x*|| when x* is known
};

struct TrackedRun {
  Method method = Method::GradientDescent;
  RunStatus status = RunStatus::IterationCap;
  std::vector<Vector> iterates;
  std::vector<IterationRecord> records;
  std::string diagnostic;  // set when the run aborts

  const Vector& final_iterate() const { return iterates.back(); }
  int steps() const noexcept { return static_cast<int>(iterates.size()) - 1; }
};

/// x_t = x_{t-1} - eta_t g(x_{t-1}) on L = L_exp + L_reg. A step that would
/// flip the sign of some s_i or bring |s_i| below delta_min is halved, up to
/// max_halvings times; after that the run stops with StepTrapped.
/// Throws InvalidStart when x0 does not admit a snapshot.
TrackedRun gradient_descent(const ProblemInstance& inst, const RegConfig& reg, const Vector& x0,
                            const GDConfig& cfg, const std::optional<Vector>& x_star = std::nullopt);

/// x_{t+1} = x_t - H(x_t)^{-1} g(x_t), solved by LDLT; same safeguard as
/// gradient_descent. Throws InvalidStart, or SingularHessian when H cannot be
/// factored and regularize_on_singular is off (or the retry fails too).
TrackedRun newton(const ProblemInstance& inst, const RegConfig& reg, const Vector& x0,
                  const NewtonConfig& cfg, const std::optional<Vector>& x_star = std::nullopt);

struct AveragedIterate {
  Vector x;
  double bound = 0.0;  // 2 G^2 / (alpha (T + 1)), display only
};

/// sum_{k=1..T} 2k / (T (T + 1)) x_k for a run with T steps, plus the
/// suboptimality bound for gradient-norm bound G and strong convexity alpha.
/// Throws EmptyRun when the run has no steps.
AveragedIterate averaged_iterate(const TrackedRun& run, double alpha, double grad_bound);

struct ContractionStep {
  int t = 0;
  double r = 0.0;
  double ratio = 0.0;  // r_{t+1} / r_t; NaN on the last row
  bool good = false;   // M r_t <= 0.1 l
  bool measured = false;  // r_t above the noise floor and ratio asserted
};

struct ContractionReport {
  std::vector<ContractionStep> steps;
  int first_good = -1;  // -1: condition never met
  bool condition_met = false;
  bool ratios_ok = true;
  double max_ratio = 0.0;  // over measured post-good-point steps
  double threshold = 0.5;  // 0.4 + slack
  double final_r = 0.0;
};

/// Tracks r_t = ||x_t - x*|| against the Newton contraction r_{t+1} <= 0.4 r_t
/// expected once M r_t <= 0.1 l. Steps with r_t below noise_floor are listed
/// but not asserted since their ratios are dominated by rounding.
ContractionReport contraction_report(const TrackedRun& run, const Vector& x_star, double l,
                                     double M, double slack = 0.1, double noise_floor = 0.0);

}  // namespace levinv
