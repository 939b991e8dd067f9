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

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "levinv/hessian.hpp"
#include "levinv/instance.hpp"
#include "levinv/leverage.hpp"

namespace levinv {

/// Ball of points where every sample must admit a snapshot.
struct Region {
  Vector centre;
  double radius = 0.1;
};

/// Constants measured on the sampled points. beta is the smaller of
/// min sigma_min(A(x)) and min |s_i| over all samples, capped just below 0.1
/// so every hypothesis of the norm and Lipschitz bounds holds; R is
/// max(||A||, max ||x||).
struct MeasuredConstants {
  double sigma_min_Ax = 0.0;
  double min_abs_s = 0.0;
  double beta = 0.0;
  double R = 0.0;
};

inline constexpr double kBetaCap = 0.0999;
inline constexpr std::array<double, 6> kTermLipschitzConstants = {48.0, 72.0, 72.0,
                                                                  30.0, 96.0, 54.0};
inline constexpr double kHessianLipschitzConstant = 812.0;

struct LipschitzOptions {
  bool include_exp = true;  // false: H = A^T W^2 A only
  HessianMode mode = HessianMode::ResidualCorrected;
  // Pair separation is min(pair_scale * radius, 0.01 / ||A||), which keeps
  // ||A (x - x_hat)|| <= 0.01.
  double pair_scale = 0.1;
  int max_rejections = 1000;
};

struct LipschitzReport {
  int pairs = 0;
  int rejected = 0;
  MeasuredConstants constants;

  double max_ratio_total = 0.0;  // ||H(x) - H(y)|| / ||x - y||, full Hessian of L
  double max_ratio_row = 0.0;    // same for the per-row literal A(x)^T (sum D_q) A(x)
  std::array<double, 6> term_ratios{};  // stripped D_q, max over rows

  double bound_total = 0.0;  // 812 beta^-9 R^5
  std::array<double, 6> term_bounds{};  // {48,72,72,30,96,54} beta^-7 R^3

  bool total_ok = false;
  bool row_ok = false;
  bool terms_ok = false;
  bool pass() const noexcept { return total_ok && row_ok && terms_ok; }

  /// bound / observed; infinity when the observed ratio is zero.
  double tightness_gap_total() const;
  std::array<double, 6> tightness_gap_terms() const;
};

LipschitzReport empirical_hessian_lipschitz(const ProblemInstance& inst, const RegConfig& reg,
                                            const Region& region, int samples, std::uint64_t seed,
                                            const LipschitzOptions& options = {});

struct BasicLipschitzEntry {
  std::string name;
  double max_ratio = 0.0;
  double bound = 0.0;
  bool asserted = true;
  bool ok = true;
};

struct BasicLipschitzReport {
  int pairs = 0;
  MeasuredConstants constants;
  std::vector<BasicLipschitzEntry> entries;

  bool pass() const noexcept;
};

/// Ratios for S, S^{-1}, A(x), A(x)^+ (reported only), (A(x)^T A(x))^{-1},
/// sigma, sigma_ii and sigma_{*,i} against their bounds at measured (beta, R).
BasicLipschitzReport basic_lipschitz_suite(const ProblemInstance& inst, const Region& region,
                                           int samples, std::uint64_t seed = 0);

struct NormBoundEntry {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool asserted = true;
  bool ok = true;
};

struct NormBoundReport {
  double beta = 0.0;
  bool hypothesis_met = false;  // sigma_min(A(x)) >= beta
  std::vector<NormBoundEntry> entries;

  bool pass() const noexcept;
};

/// Spectral bounds on sigma, its diagonal and columns, the pseudo-inverse
/// and Gram inverse. The row-norm bound beta R is reported but not asserted.
NormBoundReport norm_bound_suite(const LeverageSnapshot& snap, double beta, double R);

struct BenchRow {
  Index n = 0;
  Index d = 0;
  int reps = 0;
  double grad_ms = 0.0;  // median time of one gradient iteration
  double hess_ms = -1.0;  // median Hessian assembly time; -1 when skipped
};

struct BenchSlope {
  std::string axis;  // "n" or "d"
  Index fixed = 0;   // the dimension held constant
  std::string quantity;  // "grad" or "hess"
  double slope = 0.0;
  int points = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<BenchSlope> slopes;
};

struct BenchOptions {
  int reps = 5;
  std::uint64_t seed = 0;
  Index hessian_max_n = 512;  // Hessian timing skipped above this n
};

/// Median per-iteration wall-times over a grid of (n, d) and the fitted
/// log-log slopes along n (fixed d) and along d (fixed n).
BenchReport timing_bench(const std::vector<std::pair<Index, Index>>& grid,
                         const BenchOptions& options);

/// One gradient-descent iteration's worth of work: snapshot, loss and
/// gradient.
Vector gradient_iteration(const ProblemInstance& inst, const RegConfig& reg, const Vector& x);

}  // namespace levinv
