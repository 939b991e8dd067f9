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
#include "levinv/leverage.hpp"

#include <cmath>

#include "levinv/error.hpp"
#include "levinv/linalg.hpp"

namespace levinv {
namespace {

void check_point(const ProblemInstance& inst, const Vector& x) {
  if (x.size() != inst.d()) {
    throw DimensionMismatch("x has " + std::to_string(x.size()) + " entries, expected d = " +
                            std::to_string(inst.d()));
  }
}

Matrix scale_rows(const ProblemInstance& inst, const Vector& s, double delta_min) {
  for (Index i = 0; i < s.size(); ++i) {
    if (!(std::abs(s(i)) >= delta_min)) throw SingularScaling(i, s(i));
  }
  return s.cwiseInverse().asDiagonal() * inst.A();
}

struct GramFactor {
  Matrix gram_inv;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

// (A(x)^T A(x))^{-1} = P R^{-1} R^{-T} P^T from A(x) P = Q R.
GramFactor factor_gram(const Matrix& ax) {
  const Index d = ax.cols();
  Eigen::ColPivHouseholderQR<Matrix> qr(ax);
  const Matrix r = qr.matrixR().topLeftCorner(d, d).triangularView<Eigen::Upper>();

  const Vector sv = linalg::singular_values(r);
  GramFactor out;
  out.sigma_max = sv(0);
  out.sigma_min = sv(d - 1);
  if (!(out.sigma_min >= 1e-12 * out.sigma_max) || !(out.sigma_max > 0.0)) {
    throw RankDeficient("A(x) is rank deficient: sigma_min = " + std::to_string(out.sigma_min) +
                        ", sigma_max = " + std::to_string(out.sigma_max));
  }

  const Matrix r_inv = r.triangularView<Eigen::Upper>().solve(Matrix::Identity(d, d));
  const Matrix inner = r_inv * r_inv.transpose();
  const auto& perm = qr.colsPermutation();
  Matrix g = perm * inner * perm.transpose();
  out.gram_inv = 0.5 * (g + g.transpose());
  return out;
}

}  // namespace

Vector LeverageSnapshot::sigma_column(Index i) const {
  if (i < 0 || i >= n()) throw IndexOutOfRange("row index " + std::to_string(i) + " out of range");
  if (sigma_full) return sigma_full->col(i);
  return Ax * (gram_inv * Ax.row(i).transpose());
}

double LeverageSnapshot::sigma_entry(Index i, Index l) const {
  if (i < 0 || i >= n() || l < 0 || l >= n()) throw IndexOutOfRange("sigma index out of range");
  if (sigma_full) return (*sigma_full)(i, l);
  return Ax.row(i).dot(gram_inv * Ax.row(l).transpose());
}

Vector eval_s(const ProblemInstance& inst, const Vector& x) {
  check_point(inst, x);
  return inst.A() * x - inst.b();
}

Matrix eval_A_of_x(const ProblemInstance& inst, const Vector& x, double delta_min) {
  return scale_rows(inst, eval_s(inst, x), delta_min);
}

Matrix eval_sigma_full(const ProblemInstance& inst, const Vector& x) {
  return *snapshot(inst, x, true).sigma_full;
}

Vector eval_sigma_diag(const ProblemInstance& inst, const Vector& x) {
  return snapshot(inst, x, false).sigma_diag;
}

LeverageSnapshot snapshot(const ProblemInstance& inst, const Vector& x, bool want_full,
                          double delta_min) {
  LeverageSnapshot snap;
  snap.x = x;
  snap.s = eval_s(inst, x);
  snap.Ax = scale_rows(inst, snap.s, delta_min);
  snap.min_abs_s = snap.s.cwiseAbs().minCoeff();

  GramFactor gf = factor_gram(snap.Ax);
  snap.gram_inv = std::move(gf.gram_inv);
  snap.sigma_min_Ax = gf.sigma_min;
  snap.sigma_max_Ax = gf.sigma_max;

  const Matrix z = snap.Ax * snap.gram_inv;
  snap.sigma_diag = z.cwiseProduct(snap.Ax).rowwise().sum();
  if (want_full) ensure_full(snap);
  return snap;
}

void ensure_full(LeverageSnapshot& snap) {
  if (snap.sigma_full) return;
  const Matrix z = snap.Ax * snap.gram_inv;
  Matrix full = z * snap.Ax.transpose();
  snap.sigma_full = 0.5 * (full + full.transpose());
}

WellPosednessReport well_posedness(const ProblemInstance& inst, const Vector& x, double beta,
                                   double delta_min) {
  WellPosednessReport report;
  report.beta = beta;

  const Vector sv_a = linalg::singular_values(inst.A());
  report.sigma_min_A = sv_a(sv_a.size() - 1);
  report.rank_A = (sv_a.array() > 1e-10 * sv_a(0)).count();

  const Vector s = eval_s(inst, x);
  report.min_abs_s = s.cwiseAbs().minCoeff(&report.argmin_abs_s);
  report.scaling_ok = report.min_abs_s >= delta_min;
  report.s_margin_ok = report.min_abs_s >= beta;
  if (report.scaling_ok) {
    const Matrix ax = s.cwiseInverse().asDiagonal() * inst.A();
    const Vector sv = linalg::singular_values(ax);
    report.norm_Ax = sv(0);
    report.sigma_min_Ax = sv(sv.size() - 1);
    report.sigma_min_ok = report.sigma_min_Ax >= beta;
  }
  return report;
}

}  // namespace levinv
