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

#include "levinv/types.hpp"

namespace levinv::linalg {

/// Largest singular value.
double spectral_norm(const Matrix& m);

double max_abs(const Matrix& m);

/// max |m - m^T|
double asymmetry(const Matrix& m);

/// Eigenvalues of the symmetric part (m + m^T)/2, ascending.
Vector symmetric_eigenvalues(const Matrix& m);

double min_eigenvalue(const Matrix& m);

/// Singular values, descending.
Vector singular_values(const Matrix& m);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const Vector& x, const Vector& y);

}  // namespace levinv::linalg
