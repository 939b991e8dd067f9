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

struct LossBreakdown {
  double loss_exp = 0.0;
  double loss_reg = 0.0;
  double loss_total = 0.0;
  double frob_residual = 0.0;
};

/// 0.5 * sum_i (sigma_ii(x) - c_i)^2
double loss_exp(const ProblemInstance& inst, const LeverageSnapshot& snap);

/// || diag(c) - I o sigma(x) ||_F, unsquared.
double loss_frobenius(const ProblemInstance& inst, const LeverageSnapshot& snap);

/// 0.5 * || W A x ||^2
double loss_reg(const ProblemInstance& inst, const Vector& x, const RegConfig& reg);

LossBreakdown loss_total(const ProblemInstance& inst, const LeverageSnapshot& snap,
                         const RegConfig& reg);
LossBreakdown loss_total(const ProblemInstance& inst, const Vector& x, const RegConfig& reg);

}  // namespace levinv
