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

#include "levinv/instance.hpp"
#include "levinv/types.hpp"

namespace levinv {

/// Everything the derivative formulas need at one point x.
///
/// A snapshot only exists when every |s_i| >= delta_min and A(x) has full
/// column rank; the constructors throw otherwise. gram_inv is computed once
/// from a column-pivoted QR factorization of A(x) and reused.
struct LeverageSnapshot {
  Vector x;
  Vector s;           // Ax - b
  Matrix Ax;          // S(x)^{-1} A, row i = A_i / s_i
  Matrix gram_inv;    // (A(x)^T A(x))^{-1}
  Vector sigma_diag;  // leverage scores of A(x)
  std::optional<Matrix> sigma_full;
  double min_abs_s = 0.0;
  double sigma_min_Ax = 0.0;
  double sigma_max_Ax = 0.0;

  Index n() const noexcept { return Ax.rows(); }
  Index d() const noexcept { return Ax.cols(); }
  bool has_full() const noexcept { return sigma_full.has_value(); }

  /// Column i of sigma(x), from sigma_full when present, otherwise O(nd).
  Vector sigma_column(Index i) const;

  /// Entry (i, l) of sigma(x).
  double sigma_entry(Index i, Index l) const;
};

Vector eval_s(const ProblemInstance& inst, const Vector& x);

/// Throws SingularScaling carrying the first offending index.
Matrix eval_A_of_x(const ProblemInstance& inst, const Vector& x, double delta_min = kDeltaMin);

/// sigma(x) = A(x) (A(x)^T A(x))^{-1} A(x)^T.
/// Throws RankDeficient when sigma_min(A(x)) < 1e-12 sigma_max(A(x)).
Matrix eval_sigma_full(const ProblemInstance& inst, const Vector& x);

/// diag sigma(x) without forming the n x n matrix.
Vector eval_sigma_diag(const ProblemInstance& inst, const Vector& x);

LeverageSnapshot snapshot(const ProblemInstance& inst, const Vector& x, bool want_full = false,
                          double delta_min = kDeltaMin);

/// Adds sigma_full to an existing snapshot if missing.
void ensure_full(LeverageSnapshot& snap);

struct WellPosednessReport {
  double beta = 0.0;
  double min_abs_s = 0.0;
  Index argmin_abs_s = -1;
  double sigma_min_Ax = 0.0;  // 0 when A(x) could not be formed
  double norm_Ax = 0.0;
  double sigma_min_A = 0.0;
  Index rank_A = 0;
  bool scaling_ok = false;    // every |s_i| >= delta_min
  bool sigma_min_ok = false;  // sigma_min(A(x)) >= beta
  bool s_margin_ok = false;   // min |s_i| >= beta

  bool passes() const noexcept { return scaling_ok && sigma_min_ok; }
};

/// Pure diagnostic; never throws on singular points.
WellPosednessReport well_posedness(const ProblemInstance& inst, const Vector& x, double beta,
                                   double delta_min = kDeltaMin);

}  // namespace levinv
