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

#include "levinv/instance.hpp"
#include "levinv/leverage.hpp"

namespace levinv {

struct GradientBundle {
  Vector grad_exp;
  Vector grad_reg;
  Vector grad_total;
};

/// d sigma_ii / dx = 2 A(x)^T (sigma_{*,i} o sigma_{*,i}) - 2 sigma_ii a(x)_i, O(nd).
Vector grad_sigma_diag_i(const LeverageSnapshot& snap, Index i);

/// d sigma_il / dx_j
///   = 2 <sigma_{*,i} o sigma_{*,l}, A(x)_{*,j}> - sigma_il (A(x)_ij + A(x)_lj)
double grad_sigma_entry(const LeverageSnapshot& snap, Index i, Index l, Index j);

/// d sigma / dx_j = 2 sigma D_j sigma - D_j sigma - sigma D_j with D_j = diag(A(x)_{*,j}).
/// Requires sigma_full.
Matrix grad_sigma_matrix(const LeverageSnapshot& snap, Index j);

/// d sigma_{*,i} / dx_j = 2 sigma D_j sigma_{*,i} - D_j sigma_{*,i} - sigma_{*,i} A(x)_ij
Vector grad_sigma_column(const LeverageSnapshot& snap, Index i, Index j);

/// sum_i (sigma_ii - c_i) d sigma_ii / dx, assembled in O(n^2 d).
Vector grad_loss_exp(const ProblemInstance& inst, const LeverageSnapshot& snap);

/// A^T W^2 A x
Vector grad_loss_reg(const ProblemInstance& inst, const Vector& x, const RegConfig& reg);

GradientBundle grad_loss_total(const ProblemInstance& inst, const LeverageSnapshot& snap,
                               const RegConfig& reg);
GradientBundle grad_loss_total(const ProblemInstance& inst, const Vector& x, const RegConfig& reg);

}  // namespace levinv
