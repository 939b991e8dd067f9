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
#include "levinv/leverage.hpp"
#include "levinv/objective.hpp"
#include "levinv/oracle.hpp"
#include "support.hpp"

namespace levinv {
namespace {

using testing::scalar;
using testing::two_by_one;

TEST(Oracle, StepRule) {
  const FDConfig cfg = FDConfig::for_gradient();
  EXPECT_DOUBLE_EQ(cfg.step(0.0), 1e-5);
  EXPECT_DOUBLE_EQ(cfg.step(-3.0), 4e-5);
  EXPECT_DOUBLE_EQ(FDConfig::for_hessian().step(1.0), 2e-4);
}

TEST(Oracle, GradientOfPolynomials) {
  const ScalarField half_sq = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  EXPECT_NEAR(fd_gradient(half_sq, scalar(3.0))(0), 3.0, 1e-10);
  const ScalarField constant = [](const Vector&) { return 7.0; };
  EXPECT_EQ(fd_gradient(constant, Vector::Ones(3)), Vector::Zero(3));

  const Vector x = (Vector(3) << 1.0, -2.0, 0.5).finished();
  const ScalarField poly = [](const Vector& y) { return 3 * y(0) * y(1) - y(2) * y(2) + 2 * y(0); };
  const Vector expect = (Vector(3) << 3 * -2.0 + 2, 3 * 1.0, -1.0).finished();
  EXPECT_LE(normalized_error(fd_gradient(poly, x), expect), 1e-9);
}

TEST(Oracle, HessianOfQuadratic) {
  Matrix q(2, 2);
  q << 4.0, 1.0, 1.0, 3.0;
  const ScalarField f = [&](const Vector& y) { return 0.5 * y.dot(q * y) + y.sum(); };
  const Matrix h = fd_hessian(f, (Vector(2) << 0.3, -1.2).finished());
  EXPECT_LE((h - q).cwiseAbs().maxCoeff(), 1e-6 * 5.0);
  EXPECT_EQ(h, h.transpose());
  const ScalarField constant = [](const Vector&) { return -1.0; };
  EXPECT_EQ(fd_hessian(constant, Vector::Ones(2)), Matrix::Zero(2, 2));
}

TEST(Oracle, LossDerivativesOnTwoByOne) {
  const ProblemInstance target = two_by_one(0.5, 0.5);
  const ScalarField loss = [&](const Vector& y) { return loss_exp(target, snapshot(target, y)); };
  EXPECT_NEAR(fd_gradient(loss, scalar(1.0))(0), -0.096, 1e-7);

  const ProblemInstance planted = two_by_one(0.8, 0.2);
  const ScalarField l2 = [&](const Vector& y) { return loss_exp(planted, snapshot(planted, y)); };
  EXPECT_NEAR(fd_hessian(l2, scalar(1.0))(0, 0), 0.0512, 1e-5);
}

TEST(Oracle, DomainCrossingIsAnError) {
  const ProblemInstance inst = two_by_one(0.5, 0.5);
  const Vector near = scalar(2e-6);
  const ScalarField guarded = guard_scaling(inst, near, [&](const Vector& y) {
    return loss_exp(inst, snapshot(inst, y));
  });
  EXPECT_THROW(fd_gradient(guarded, near), DomainCrossing);
  EXPECT_THROW(fd_hessian(guarded, near), DomainCrossing);
  const ScalarField wrapped = guard_scaling(inst, scalar(1.0), [](const Vector&) { return 0.0; });
  EXPECT_EQ(wrapped(scalar(0.5)), 0.0);
  EXPECT_THROW(wrapped(scalar(-0.5)), SingularScaling);
  EXPECT_THROW(wrapped(scalar(0.0)), SingularScaling);
}

TEST(Oracle, SigmaDirect) {
  Matrix square(2, 2);
  square << 1.0, 2.0, -1.0, 0.5;
  const ProblemInstance sq(square, Vector::Constant(2, 3.0), Vector::Ones(2));
  EXPECT_LE((sigma_direct(sq, Vector::Zero(2)) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);

  Matrix expect(2, 2);
  expect << 0.8, 0.4, 0.4, 0.2;
  EXPECT_LE((sigma_direct(two_by_one(0.5, 0.5), scalar(1.0)) - expect).cwiseAbs().maxCoeff(), 1e-12);

  Matrix a(2, 1);
  a << 1.0, 1.0;
  const ProblemInstance sym(a, Vector::Zero(2), Vector::Constant(2, 0.5));
  EXPECT_LE((sigma_direct(sym, scalar(-2.0)) - Matrix::Constant(2, 2, 0.5)).cwiseAbs().maxCoeff(), 1e-12);

  Matrix flat(3, 2);
  flat << 1, 2, 2, 4, 3, 6;
  EXPECT_THROW(sigma_direct(ProblemInstance(flat, Vector::Ones(3), Vector::Ones(3)), Vector::Zero(2)),
               RankDeficient);
}

TEST(Oracle, SigmaDirectAgreesWithGramRoute) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const VerificationCase vc = random_verification_case(25, 6, seed);
    const Matrix a = eval_sigma_full(vc.instance, vc.x);
    const Matrix b = sigma_direct(vc.instance, vc.x);
    EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Oracle, NormalizedError) {
  const Vector a = (Vector(2) << 1.0, 2.0).finished();
  const Vector b = (Vector(2) << 1.0, 3.0).finished();
  EXPECT_DOUBLE_EQ(normalized_error(a, b), 1.0 / 4.0);
  EXPECT_THROW(normalized_error(a, Vector::Zero(3)), DimensionMismatch);
}

}  // namespace
}  // namespace levinv
