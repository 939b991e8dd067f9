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
#include <gtest/gtest.h>

#include "levinv/error.hpp"
#include "levinv/generator.hpp"
#include "levinv/gradient.hpp"
#include "levinv/objective.hpp"
#include "levinv/oracle.hpp"
#include "support.hpp"

namespace levinv {
namespace {

using testing::scalar;
using testing::two_by_one;

TEST(Gradient, TwoByOneValues) {
  const ProblemInstance inst = two_by_one(0.5, 0.5);
  const LeverageSnapshot snap = snapshot(inst, scalar(1.0), true);
  EXPECT_NEAR(grad_sigma_diag_i(snap, 0)(0), -0.16, 1e-15);
  EXPECT_NEAR(grad_sigma_diag_i(snap, 1)(0), 0.16, 1e-15);
  EXPECT_NEAR(grad_loss_exp(inst, snap)(0), -0.096, 1e-15);
  EXPECT_THROW(grad_sigma_diag_i(snap, 2), IndexOutOfRange);
}

TEST(Gradient, ConstantSigmaHasZeroGradient) {
  Matrix a(2, 1);
  a << 1.0, 1.0;
  const ProblemInstance inst(a, Vector::Zero(2), Vector::Constant(2, 0.5));
  const LeverageSnapshot snap = snapshot(inst, scalar(2.0), true);
  EXPECT_NEAR(grad_sigma_diag_i(snap, 0)(0), 0.0, 1e-15);
  EXPECT_NEAR(grad_loss_exp(inst, snap)(0), 0.0, 1e-15);
}

TEST(Gradient, RepresentationsAgree) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const VerificationCase vc = random_verification_case(9, 3, seed);
    const LeverageSnapshot snap = snapshot(vc.instance, vc.x, true);
    const Index n = vc.instance.n();
    for (Index j = 0; j < 3; ++j) {
      const Matrix dm = grad_sigma_matrix(snap, j);
      EXPECT_LE(std::abs(dm.trace()), 1e-8);
      for (Index i = 0; i < n; ++i) {
        const Vector col = grad_sigma_column(snap, i, j);
        EXPECT_LE((col - dm.col(i)).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_NEAR(grad_sigma_diag_i(snap, i)(j), dm(i, i), 1e-12);
        for (Index l = 0; l < n; ++l) EXPECT_NEAR(grad_sigma_entry(snap, i, l, j), dm(i, l), 1e-12);
      }
    }
  }
}

TEST(Gradient, NeedsFullSigmaForMatrixForm) {
  const ProblemInstance inst = two_by_one(0.5, 0.5);
  const LeverageSnapshot snap = snapshot(inst, scalar(1.0));
  EXPECT_THROW(grad_sigma_matrix(snap, 0), Error);
  EXPECT_THROW(grad_sigma_entry(snap, 0, 0, 1), IndexOutOfRange);
}

TEST(Gradient, StationaryAtPlantedOptimum) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    const GeneratedInstance g = gen_instance(cfg);
    const GradientBundle b = grad_loss_total(g.instance, g.x_star, g.reg);
    EXPECT_LE(b.grad_total.norm(), 1e-12);
  }
}

TEST(Gradient, RegularizerGradient) {
  const ProblemInstance inst = two_by_one(0.5, 0.5);
  const RegConfig reg{(Vector(2) << 1.0, 2.0).finished(), 0.0, 0.0};
  // A^T W^2 A x = (1 + 4) x
  EXPECT_DOUBLE_EQ(grad_loss_reg(inst, scalar(3.0), reg)(0), 15.0);
  const GradientBundle b = grad_loss_total(inst, scalar(1.0), reg);
  EXPECT_NEAR(b.grad_total(0), -0.096 + 5.0, 1e-14);
}

TEST(Gradient, MatchesFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const VerificationCase vc = random_verification_case(5 + seed % 30, 1 + seed % 5, seed);
    const Vector g = grad_loss_total(vc.instance, vc.x, vc.reg).grad_total;
    const ScalarField f = guard_scaling(vc.instance, vc.x, [&](const Vector& y) {
      return loss_total(vc.instance, y, vc.reg).loss_total;
    });
    EXPECT_LE(normalized_error(g, fd_gradient(f, vc.x)), 1e-6) << "seed " << seed;
  }
}

}  // namespace
}  // namespace levinv
