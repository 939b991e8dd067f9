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
#include "levinv/linalg.hpp"

#include <cmath>

#include "levinv/error.hpp"

namespace levinv::linalg {

Vector singular_values(const Matrix& m) {
  if (m.size() == 0) return Vector();
  return Eigen::JacobiSVD<Matrix>(m).singularValues();
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double asymmetry(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("asymmetry of a non-square matrix");
  return m.size() == 0 ? 0.0 : (m - m.transpose()).cwiseAbs().maxCoeff();
}

Vector symmetric_eigenvalues(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("eigenvalues of a non-square matrix");
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("symmetric eigensolver did not converge");
  return es.eigenvalues();
}

double min_eigenvalue(const Matrix& m) { return symmetric_eigenvalues(m)(0); }

double loglog_slope(const Vector& x, const Vector& y) {
  if (x.size() != y.size() || x.size() < 2) throw DimensionMismatch("slope needs >= 2 points");
  const Vector lx = x.array().log();
  const Vector ly = y.array().log();
  const double mx = lx.mean();
  const double my = ly.mean();
  const double sxy = ((lx.array() - mx) * (ly.array() - my)).sum();
  const double sxx = (lx.array() - mx).square().sum();
  return sxy / sxx;
}

}  // namespace levinv::linalg
