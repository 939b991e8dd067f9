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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "levinv/instance.hpp"

namespace levinv {

enum class GenMode { Pure, Regularized };

const char* to_string(GenMode mode);
GenMode parse_gen_mode(const std::string& text);

struct GenConfig {
  Index n = 20;
  Index d = 4;
  std::uint64_t seed = 0;
  double margin = 0.5;  // lower bound on |s(x*)_i|
  GenMode mode = GenMode::Pure;
  double l = 1e-3;
  double beta = 0.01;
  double rho = 0.0;     // start perturbation radius
  double noise = 0.0;   // std-dev of Gaussian noise on c, clipped to [0, 1]
  int max_attempts = 64;

  void validate() const;
};

struct GroundTruth {
  Vector x_star;
  Vector s_star;
  std::uint64_t seed = 0;
  double margin = 0.0;
  double min_abs_s = 0.0;
  double sigma_min_A = 0.0;
  GenMode mode = GenMode::Pure;
  RegConfig reg;
  int attempts = 0;
};

struct GeneratedInstance {
  ProblemInstance instance;
  RegConfig reg;
  Vector x_star;
  GroundTruth truth;
};

/// A ~ N(0,1) entries (redrawn until rank d), x* ~ N(0, I), s*_i = +-(margin + |z_i|),
/// b = A x* - s*, c = diag sigma(x*). Pure mode sets w = 0; regularized mode
/// uses RegConfig::from_bounds(l, beta). Throws GenerationFailed.
GeneratedInstance gen_instance(const GenConfig& cfg);

/// x* + rho u with u uniform on the unit sphere.
Vector perturb_start(const Vector& x_star, double rho, std::uint64_t seed);

/// Random evaluation point for derivative checks: a generated instance whose
/// target is redrawn from a different planted point, regularization weights
/// drawn uniformly in [0, 1], and x placed at radius 'radius' around x*
/// with min |s_i| >= point_margin.
struct VerificationCase {
  ProblemInstance instance;
  RegConfig reg;
  Vector x;
};

VerificationCase random_verification_case(Index n, Index d, std::uint64_t seed,
                                          double radius = 0.3, double point_margin = 0.05);

// count cases with d in [1, d_max] and n in [max(d, min(5, n_max)), n_max], each
// drawn from its own stream of seed.
std::vector<VerificationCase> verification_batch(Index n_max, Index d_max, int count,
                                                 std::uint64_t seed);

void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path);
GroundTruth load_ground_truth(const std::filesystem::path& path);

}  // namespace levinv
