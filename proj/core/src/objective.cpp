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
#include "levinv/objective.hpp"

#include "levinv/error.hpp"

namespace levinv {

double loss_exp(const ProblemInstance& inst, const LeverageSnapshot& snap) {
  return 0.5 * (snap.sigma_diag - inst.c()).squaredNorm();
}

double loss_frobenius(const ProblemInstance& inst, const LeverageSnapshot& snap) {
  // I o sigma(x) keeps only the diagonal of the full matrix.
  const Vector diag = snap.sigma_full ? Vector(snap.sigma_full->diagonal()) : snap.sigma_diag;
  Matrix residual = Matrix::Zero(inst.n(), inst.n());
  residual.diagonal() = inst.c() - diag;
  return residual.norm();
}

double loss_reg(const ProblemInstance& inst, const Vector& x, const RegConfig& reg) {
  if (reg.w.size() != inst.n()) throw DimensionMismatch("w must have n entries");
  if (x.size() != inst.d()) throw DimensionMismatch("x must have d entries");
  return 0.5 * reg.w.cwiseProduct(inst.A() * x).squaredNorm();
}

LossBreakdown loss_total(const ProblemInstance& inst, const LeverageSnapshot& snap,
                         const RegConfig& reg) {
  LossBreakdown out;
  out.loss_exp = loss_exp(inst, snap);
  out.loss_reg = loss_reg(inst, snap.x, reg);
  out.loss_total = out.loss_exp + out.loss_reg;
  out.frob_residual = (snap.sigma_diag - inst.c()).norm();
  return out;
}

LossBreakdown loss_total(const ProblemInstance& inst, const Vector& x, const RegConfig& reg) {
  return loss_total(inst, snapshot(inst, x), reg);
}

}  // namespace levinv
