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

#include <functional>

#include "levinv/instance.hpp"
#include "levinv/types.hpp"

namespace levinv {

using ScalarField = std::function<double(const Vector&)>;

/// Central differences with h_j = base_step * (1 + |x_j|) when scaled.
struct FDConfig {
  double base_step = 1e-5;
  bool scale_by_magnitude = true;

  double step(double xj) const;

  static FDConfig for_gradient() { return {1e-5, true}; }
  static FDConfig for_hessian() { return {1e-4, true}; }
};

/// (f(x + h e_j) - f(x - h e_j)) / (2 h_j). Any levinv::Error raised by f at
/// a probe is rethrown as DomainCrossing.
Vector fd_gradient(const ScalarField& f, const Vector& x, const FDConfig& cfg = FDConfig::for_gradient());

/// Second-order central stencil, symmetrized.
Matrix fd_hessian(const ScalarField& f, const Vector& x, const FDConfig& cfg = FDConfig::for_hessian());

/// Wraps f so that probes crossing an s_i = 0 hyperplane relative to the
/// centre x, or landing within delta_min of one, raise SingularScaling.
ScalarField guard_scaling(const ProblemInstance& inst, const Vector& centre, ScalarField f,
                          double delta_min = kDeltaMin);

/// Leverage matrix from an orthonormal basis Q of A(x): sigma = Q Q^T.
/// Uses an unpivoted Householder QR; shares nothing with the Gram route.
Matrix sigma_direct(const ProblemInstance& inst, const Vector& x);

// max |analytic - reference| / (1 + max |reference|)
double normalized_error(const Matrix& analytic, const Matrix& reference);
double normalized_error(const Vector& analytic, const Vector& reference);

}  // namespace levinv
