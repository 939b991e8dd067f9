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
#include "levinv/oracle.hpp"

#include <cmath>

#include "levinv/error.hpp"

namespace levinv {
namespace {

double probe(const ScalarField& f, const Vector& x, Index coordinate) {
  try {
    return f(x);
  } catch (const DomainCrossing&) {
    throw;
  } catch (const Error& e) {
    throw DomainCrossing(coordinate, e.what());
  }
}

}  // namespace

double FDConfig::step(double xj) const {
  return scale_by_magnitude ? base_step * (1.0 + std::abs(xj)) : base_step;
}

Vector fd_gradient(const ScalarField& f, const Vector& x, const FDConfig& cfg) {
  if (!(cfg.base_step > 0.0)) throw Error("finite-difference step must be > 0");
  Vector g(x.size());
  for (Index j = 0; j < x.size(); ++j) {
    Vector plus = x;
    Vector minus = x;
    plus(j) += cfg.step(x(j));
    minus(j) -= cfg.step(x(j));
    // Use the representable spacing, not the nominal one.
    const double span = plus(j) - minus(j);
    g(j) = (probe(f, plus, j) - probe(f, minus, j)) / span;
  }
  return g;
}

Matrix fd_hessian(const ScalarField& f, const Vector& x, const FDConfig& cfg) {
  if (!(cfg.base_step > 0.0)) throw Error("finite-difference step must be > 0");
  const Index d = x.size();
  Vector h(d);
  for (Index j = 0; j < d; ++j) {
    const double xj = x(j);
    const double up = xj + cfg.step(xj);
    h(j) = up - xj;
  }
  const double f0 = probe(f, x, 0);

  Matrix H(d, d);
  for (Index j = 0; j < d; ++j) {
    Vector plus = x;
    Vector minus = x;
    plus(j) += h(j);
    minus(j) -= h(j);
    H(j, j) = (probe(f, plus, j) - 2.0 * f0 + probe(f, minus, j)) / (h(j) * h(j));
    for (Index k = j + 1; k < d; ++k) {
      Vector pp = x, pm = x, mp = x, mm = x;
      pp(j) += h(j), pp(k) += h(k);
      pm(j) += h(j), pm(k) -= h(k);
      mp(j) -= h(j), mp(k) += h(k);
      mm(j) -= h(j), mm(k) -= h(k);
      const double v = (probe(f, pp, j) - probe(f, pm, j) - probe(f, mp, j) + probe(f, mm, j)) /
                       (4.0 * h(j) * h(k));
      H(j, k) = v;
      H(k, j) = v;
    }
  }
  return 0.5 * (H + H.transpose());
}

ScalarField guard_scaling(const ProblemInstance& inst, const Vector& centre, ScalarField f,
                          double delta_min) {
  const Vector s0 = inst.A() * centre - inst.b();
  return [A = inst.A(), b = inst.b(), s0, f = std::move(f), delta_min](const Vector& y) {
    const Vector s = A * y - b;
    for (Index i = 0; i < s.size(); ++i) {
      if (!(std::abs(s(i)) >= delta_min) || std::signbit(s(i)) != std::signbit(s0(i))) {
        throw SingularScaling(i, s(i));
      }
    }
    return f(y);
  };
}

Matrix sigma_direct(const ProblemInstance& inst, const Vector& x) {
  if (x.size() != inst.d()) throw DimensionMismatch("x must have d entries");
  const Index n = inst.n();
  const Index d = inst.d();
  const Vector s = inst.A() * x - inst.b();
  Matrix ax(n, d);
  for (Index i = 0; i < n; ++i) {
    if (!(std::abs(s(i)) >= kDeltaMin)) throw SingularScaling(i, s(i));
    ax.row(i) = inst.A().row(i) / s(i);
  }

  Eigen::HouseholderQR<Matrix> qr(ax);
  const Vector r_diag = qr.matrixQR().diagonal().head(d).cwiseAbs();
  if (!(r_diag.minCoeff() >= 1e-12 * r_diag.maxCoeff()) || !(r_diag.maxCoeff() > 0.0)) {
    throw RankDeficient("A(x) is rank deficient in the QR oracle");
  }
  const Matrix q = qr.householderQ() * Matrix::Identity(n, d);
  return q * q.transpose();
}

double normalized_error(const Matrix& analytic, const Matrix& reference) {
  if (analytic.rows() != reference.rows() || analytic.cols() != reference.cols()) {
    throw DimensionMismatch("normalized_error: shapes differ");
  }
  if (reference.size() == 0) return 0.0;
  return (analytic - reference).cwiseAbs().maxCoeff() / (1.0 + reference.cwiseAbs().maxCoeff());
}

double normalized_error(const Vector& analytic, const Vector& reference) {
  return normalized_error(Matrix(analytic), Matrix(reference));
}

}  // namespace levinv
