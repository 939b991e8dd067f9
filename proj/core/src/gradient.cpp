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
#include "levinv/gradient.hpp"

#include "levinv/error.hpp"
#include "levinv/parallel.hpp"

namespace levinv {
namespace {

void check_row(const LeverageSnapshot& snap, Index i) {
  if (i < 0 || i >= snap.n()) throw IndexOutOfRange("row index " + std::to_string(i) + " out of range");
}

void check_coord(const LeverageSnapshot& snap, Index j) {
  if (j < 0 || j >= snap.d()) throw IndexOutOfRange("coordinate " + std::to_string(j) + " out of range");
}

// sigma(x) v without materializing sigma when it is absent.
Vector apply_sigma(const LeverageSnapshot& snap, const Vector& v) {
  if (snap.sigma_full) return *snap.sigma_full * v;
  return snap.Ax * (snap.gram_inv * (snap.Ax.transpose() * v));
}

}  // namespace

Vector grad_sigma_diag_i(const LeverageSnapshot& snap, Index i) {
  check_row(snap, i);
  const Vector col = snap.sigma_column(i);
  return 2.0 * snap.Ax.transpose() * col.cwiseAbs2() - 2.0 * col(i) * snap.Ax.row(i).transpose();
}

double grad_sigma_entry(const LeverageSnapshot& snap, Index i, Index l, Index j) {
  check_row(snap, i);
  check_row(snap, l);
  check_coord(snap, j);
  const Vector ci = snap.sigma_column(i);
  const Vector cl = i == l ? ci : snap.sigma_column(l);
  return 2.0 * ci.cwiseProduct(cl).dot(snap.Ax.col(j)) - ci(l) * (snap.Ax(i, j) + snap.Ax(l, j));
}

Matrix grad_sigma_matrix(const LeverageSnapshot& snap, Index j) {
  check_coord(snap, j);
  if (!snap.sigma_full) throw Error("grad_sigma_matrix requires a snapshot with sigma_full");
  const Matrix& sigma = *snap.sigma_full;
  const auto dj = snap.Ax.col(j).asDiagonal();
  const Matrix sd = sigma * dj;
  return 2.0 * sd * sigma - dj * sigma - sd;
}

Vector grad_sigma_column(const LeverageSnapshot& snap, Index i, Index j) {
  check_row(snap, i);
  check_coord(snap, j);
  const Vector col = snap.sigma_column(i);
  const Vector scaled = snap.Ax.col(j).cwiseProduct(col);
  return 2.0 * apply_sigma(snap, scaled) - scaled - snap.Ax(i, j) * col;
}

Vector grad_loss_exp(const ProblemInstance& inst, const LeverageSnapshot& snap) {
  if (inst.n() != snap.n() || inst.d() != snap.d()) throw DimensionMismatch("snapshot/instance shape");
  const Vector r = snap.sigma_diag - inst.c();
  const Matrix z = snap.Ax * snap.gram_inv;

  // sum_i r_i (2 A(x)^T sigma_{*,i}^2 - 2 sigma_ii a_i), grouped by row blocks:
  // block rows of (sigma o sigma) r give A(x)^T (sigma o sigma) r.
  return chunked_sum(snap.n(), Vector(Vector::Zero(snap.d())), [&](Index begin, Index end) {
    const Index rows = end - begin;
    Matrix block = snap.sigma_full ? Matrix(snap.sigma_full->middleRows(begin, rows))
                                   : Matrix(z.middleRows(begin, rows) * snap.Ax.transpose());
    const Vector q = block.cwiseAbs2() * r;
    const Vector coeff = q - r.segment(begin, rows).cwiseProduct(snap.sigma_diag.segment(begin, rows));
    return Vector(2.0 * snap.Ax.middleRows(begin, rows).transpose() * coeff);
  });
}

Vector grad_loss_reg(const ProblemInstance& inst, const Vector& x, const RegConfig& reg) {
  if (reg.w.size() != inst.n()) throw DimensionMismatch("w must have n entries");
  return inst.A().transpose() * (reg.w.cwiseAbs2().cwiseProduct(inst.A() * x));
}

GradientBundle grad_loss_total(const ProblemInstance& inst, const LeverageSnapshot& snap,
                               const RegConfig& reg) {
  GradientBundle out;
  out.grad_exp = grad_loss_exp(inst, snap);
  out.grad_reg = grad_loss_reg(inst, snap.x, reg);
  out.grad_total = out.grad_exp + out.grad_reg;
  return out;
}

GradientBundle grad_loss_total(const ProblemInstance& inst, const Vector& x, const RegConfig& reg) {
  return grad_loss_total(inst, snapshot(inst, x), reg);
}

}  // namespace levinv
