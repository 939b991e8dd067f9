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

#include "levinv/instance.hpp"
#include "levinv/leverage.hpp"

namespace levinv {

/// How the curvature part of 0.5 (sigma_ii - c_i)^2 is weighted.
///
/// Literal weights grad^2 sigma_ii by sigma_ii, as in the six-term D
/// decomposition. ResidualCorrected uses (sigma_ii - c_i), which is the chain
/// rule for the actual loss and the solver default.
enum class HessianMode { Literal, ResidualCorrected };

const char* to_string(HessianMode mode);

/// D_{i,1..6} for one row i. Their sum is the contribution of row i to the
/// Hessian of L_exp in the chosen mode:
///
///   D1 = 4 v v^T                     v = A(x)^T (sigma_{*,i} o sigma_{*,i})
///   D2 = -(4 s + 4 m) a v^T          a = a(x)_i, s = sigma_ii
///   D3 = D2^T
///   D4 = (4 s^2 + 6 m s) a a^T
///   D5 = 8 m A(x)^T diag(sigma_{*,i}) sigma diag(sigma_{*,i}) A(x)
///   D6 = -6 m A(x)^T diag(sigma_{*,i}^2) A(x)
///
/// with multiplier m = s (Literal) or s - c_i (ResidualCorrected). At
/// m = s these are exactly -8s, 10s^2, 8s, -6s.
struct HessianTerms {
  Index i = 0;
  HessianMode mode = HessianMode::ResidualCorrected;
  double multiplier = 0.0;
  std::array<Matrix, 6> D;

  Matrix sum() const;
};

struct HessianBundle {
  Matrix H_exp;
  Matrix H_reg;
  Matrix H_total;
  HessianMode mode = HessianMode::ResidualCorrected;
  double min_eigenvalue = 0.0;
  double spectral_norm = 0.0;
};

/// grad^2 sigma_ii as the five inner-product terms C1..C5, evaluated
/// against the full sigma(x) (computed on the fly when the snapshot lacks it).
Matrix hessian_sigma_ii(const LeverageSnapshot& snap, Index i);

HessianTerms hessian_terms(const LeverageSnapshot& snap, Index i, double c_i, HessianMode mode);

/// sum over all rows of hessian_terms(...).sum(), symmetrized.
Matrix hessian_loss_exp(const ProblemInstance& inst, const LeverageSnapshot& snap,
                        HessianMode mode = HessianMode::ResidualCorrected);

/// A^T W^2 A
Matrix hessian_loss_reg(const ProblemInstance& inst, const RegConfig& reg);

HessianBundle hessian_total(const ProblemInstance& inst, const LeverageSnapshot& snap,
                            const RegConfig& reg,
                            HessianMode mode = HessianMode::ResidualCorrected);
HessianBundle hessian_total(const ProblemInstance& inst, const Vector& x, const RegConfig& reg,
                            HessianMode mode = HessianMode::ResidualCorrected);

struct CertificateReport {
  bool pass = false;
  double min_eigenvalue = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  double margin = 0.0;  // min_eigenvalue - target
};

/// Passes iff lambda_min(H_total) >= l - 1e-10 ||H_total||.
CertificateReport pd_certificate(const HessianBundle& bundle, double l);

/// The n x n inner matrices of the literal decomposition with the A(x)
/// factors removed, so that row i contributes A(x)^T (sum_q D_q) A(x):
///
///   D1 = 4 q q^T, D2 = -8 s e_i q^T, D3 = D2^T, D4 = 10 s^2 e_i e_i^T,
///   D5 = 8 s diag(sigma_{*,i}) sigma diag(sigma_{*,i}), D6 = -6 s diag(q)
///
/// where q = sigma_{*,i} o sigma_{*,i}. Requires sigma_full.
std::array<Matrix, 6> stripped_d_terms(const LeverageSnapshot& snap, Index i);

inline constexpr std::array<double, 6> kStrippedBounds = {4.0, 8.0, 8.0, 10.0, 8.0, 6.0};

struct DTermSpectralReport {
  Index i = 0;
  std::array<double, 6> norms{};
  std::array<double, 6> bounds = kStrippedBounds;
  bool within_bounds = false;
  double g_norm = 0.0;   // || S(x)^{-1} (sum_q D_q) S(x)^{-1} ||
  double g_bound = 0.0;  // 44 beta; reported only
  double beta = 0.0;
};

DTermSpectralReport d_term_spectral_report(const LeverageSnapshot& snap, Index i, double beta,
                                           double slack = 1e-9);

}  // namespace levinv
