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
#include "levinv/hessian.hpp"

#include <cmath>

#include "levinv/error.hpp"
#include "levinv/linalg.hpp"
#include "levinv/parallel.hpp"

namespace levinv {
namespace {

void check_row(const LeverageSnapshot& snap, Index i) {
  if (i < 0 || i >= snap.n()) throw IndexOutOfRange("row index " + std::to_string(i) + " out of range");
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

const char* to_string(HessianMode mode) {
  return mode == HessianMode::Literal ? "literal" : "residual";
}

Matrix HessianTerms::sum() const {
  Matrix total = D[0];
  for (std::size_t q = 1; q < D.size(); ++q) total += D[q];
  return total;
}

Matrix hessian_sigma_ii(const LeverageSnapshot& snap, Index i) {
  check_row(snap, i);
  const Matrix sigma = snap.sigma_full ? *snap.sigma_full
                                       : Matrix(snap.Ax * snap.gram_inv * snap.Ax.transpose());
  const Vector col = sigma.col(i);
  const Vector q = col.cwiseAbs2();
  const Vector a = snap.Ax.row(i).transpose();
  const Vector v = snap.Ax.transpose() * q;
  const Matrix m = col.asDiagonal() * snap.Ax;

  const Matrix c1 = 8.0 * m.transpose() * sigma * m;
  const Matrix c2 = -6.0 * snap.Ax.transpose() * q.asDiagonal() * snap.Ax;
  const Matrix c3 = -4.0 * a * v.transpose();
  const Matrix c4 = -4.0 * v * a.transpose();
  const Matrix c5 = 6.0 * col(i) * a * a.transpose();
  return symmetrize(c1 + c2 + c3 + c4 + c5);
}

HessianTerms hessian_terms(const LeverageSnapshot& snap, Index i, double c_i, HessianMode mode) {
  check_row(snap, i);
  const Vector col = snap.sigma_column(i);
  const double s = col(i);
  const double m = mode == HessianMode::Literal ? s : s - c_i;

  const Vector q = col.cwiseAbs2();
  const Vector a = snap.Ax.row(i).transpose();
  const Vector v = snap.Ax.transpose() * q;
  // A(x)^T diag(col) sigma diag(col) A(x) = P G^{-1} P with P = A(x)^T diag(col) A(x).
  const Matrix p = snap.Ax.transpose() * col.asDiagonal() * snap.Ax;

  HessianTerms t;
  t.i = i;
  t.mode = mode;
  t.multiplier = m;
  t.D[0] = 4.0 * v * v.transpose();
  t.D[1] = -(4.0 * s + 4.0 * m) * a * v.transpose();
  t.D[2] = t.D[1].transpose();
  t.D[3] = (4.0 * s * s + 6.0 * m * s) * a * a.transpose();
  t.D[4] = 8.0 * m * symmetrize(p * snap.gram_inv * p);
  t.D[5] = -6.0 * m * snap.Ax.transpose() * q.asDiagonal() * snap.Ax;
  return t;
}

Matrix hessian_loss_exp(const ProblemInstance& inst, const LeverageSnapshot& snap, HessianMode mode) {
  if (inst.n() != snap.n() || inst.d() != snap.d()) throw DimensionMismatch("snapshot/instance shape");
  const Index d = snap.d();
  Matrix total = chunked_sum(snap.n(), Matrix(Matrix::Zero(d, d)), [&](Index begin, Index end) {
    Matrix acc = Matrix::Zero(d, d);
    for (Index i = begin; i < end; ++i) acc += hessian_terms(snap, i, inst.c()(i), mode).sum();
    return acc;
  });
  return symmetrize(total);
}

Matrix hessian_loss_reg(const ProblemInstance& inst, const RegConfig& reg) {
  if (reg.w.size() != inst.n()) throw DimensionMismatch("w must have n entries");
  return symmetrize(inst.A().transpose() * reg.w.cwiseAbs2().asDiagonal() * inst.A());
}

HessianBundle hessian_total(const ProblemInstance& inst, const LeverageSnapshot& snap,
                            const RegConfig& reg, HessianMode mode) {
  HessianBundle out;
  out.mode = mode;
  out.H_exp = hessian_loss_exp(inst, snap, mode);
  out.H_reg = hessian_loss_reg(inst, reg);
  out.H_total = out.H_exp + out.H_reg;
  const Vector eig = linalg::symmetric_eigenvalues(out.H_total);
  out.min_eigenvalue = eig(0);
  out.spectral_norm = std::max(std::abs(eig(0)), std::abs(eig(eig.size() - 1)));
  return out;
}

HessianBundle hessian_total(const ProblemInstance& inst, const Vector& x, const RegConfig& reg,
                            HessianMode mode) {
  return hessian_total(inst, snapshot(inst, x), reg, mode);
}

CertificateReport pd_certificate(const HessianBundle& bundle, double l) {
  CertificateReport out;
  out.min_eigenvalue = bundle.min_eigenvalue;
  out.target = l;
  out.tolerance = 1e-10 * bundle.spectral_norm;
  out.margin = bundle.min_eigenvalue - l;
  out.pass = bundle.min_eigenvalue >= l - out.tolerance;
  return out;
}

std::array<Matrix, 6> stripped_d_terms(const LeverageSnapshot& snap, Index i) {
  check_row(snap, i);
  if (!snap.sigma_full) throw Error("stripped_d_terms requires a snapshot with sigma_full");
  const Matrix& sigma = *snap.sigma_full;
  const Index n = snap.n();
  const Vector col = sigma.col(i);
  const Vector q = col.cwiseAbs2();
  const double s = col(i);

  std::array<Matrix, 6> d;
  d[0] = 4.0 * q * q.transpose();
  d[1] = Matrix::Zero(n, n);
  d[1].row(i) = -8.0 * s * q.transpose();
  d[2] = d[1].transpose();
  d[3] = Matrix::Zero(n, n);
  d[3](i, i) = 10.0 * s * s;
  d[4] = 8.0 * s * col.asDiagonal() * sigma * col.asDiagonal();
  d[5] = Matrix((-6.0 * s * q).asDiagonal());
  return d;
}

DTermSpectralReport d_term_spectral_report(const LeverageSnapshot& snap, Index i, double beta,
                                           double slack) {
  const auto terms = stripped_d_terms(snap, i);
  DTermSpectralReport out;
  out.i = i;
  out.beta = beta;
  out.within_bounds = true;
  Matrix total = Matrix::Zero(snap.n(), snap.n());
  for (std::size_t q = 0; q < terms.size(); ++q) {
    out.norms[q] = linalg::spectral_norm(terms[q]);
    out.within_bounds = out.within_bounds && out.norms[q] <= out.bounds[q] + slack;
    total += terms[q];
  }
  const Vector s_inv = snap.s.cwiseInverse();
  out.g_norm = linalg::spectral_norm(s_inv.asDiagonal() * total * s_inv.asDiagonal());
  out.g_bound = 44.0 * beta;
  return out;
}

}  // namespace levinv
