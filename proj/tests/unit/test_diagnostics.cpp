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

#include "levinv/diagnostics.hpp"
#include "levinv/error.hpp"
#include "levinv/generator.hpp"
#include "levinv/leverage.hpp"
#include "support.hpp"

namespace levinv {
namespace {

using testing::scalar;
using testing::two_by_one;

GeneratedInstance small_instance(std::uint64_t seed) {
  GenConfig cfg;
  cfg.n = 10;
  cfg.d = 3;
  cfg.seed = seed;
  return gen_instance(cfg);
}

TEST(Diagnostics, RegularizerOnlyHessianIsConstant) {
  GeneratedInstance g = small_instance(1);
  const RegConfig reg = RegConfig::from_bounds(g.instance, 1e-2, 0.0);
  LipschitzOptions opts;
  opts.include_exp = false;
  const LipschitzReport r = empirical_hessian_lipschitz(g.instance, reg, {g.x_star, 0.1}, 20, 0, opts);
  EXPECT_EQ(r.max_ratio_total, 0.0);
  EXPECT_TRUE(r.pass());
}

TEST(Diagnostics, HessianLipschitzWithinBound) {
  const GeneratedInstance g = small_instance(2);
  const LipschitzReport r = empirical_hessian_lipschitz(g.instance, g.reg, {g.x_star, 0.1}, 200, 3);
  EXPECT_EQ(r.pairs, 200);
  EXPECT_TRUE(r.total_ok);
  EXPECT_TRUE(r.row_ok);
  EXPECT_TRUE(r.terms_ok);
  EXPECT_GT(r.max_ratio_total, 0.0);
  EXPECT_GT(r.tightness_gap_total(), 1.0);
  EXPECT_LE(r.constants.beta, kBetaCap);
  for (double gap : r.tightness_gap_terms()) EXPECT_GT(gap, 1.0);
}

TEST(Diagnostics, DeterministicGivenSeed) {
  const GeneratedInstance g = small_instance(3);
  const LipschitzReport a = empirical_hessian_lipschitz(g.instance, g.reg, {g.x_star, 0.1}, 30, 9);
  const LipschitzReport b = empirical_hessian_lipschitz(g.instance, g.reg, {g.x_star, 0.1}, 30, 9);
  EXPECT_EQ(a.max_ratio_total, b.max_ratio_total);
  EXPECT_EQ(a.term_ratios, b.term_ratios);
}

TEST(Diagnostics, NestedBallsDoNotGrow) {
  const GeneratedInstance g = small_instance(4);
  const double wide = empirical_hessian_lipschitz(g.instance, g.reg, {g.x_star, 0.2}, 200, 1).max_ratio_total;
  const double narrow =
      empirical_hessian_lipschitz(g.instance, g.reg, {g.x_star, 0.02}, 200, 1).max_ratio_total;
  EXPECT_LE(narrow, 1.25 * wide);
}

TEST(Diagnostics, RejectionBudget) {
  Matrix a(3, 2);
  a << 1, 1, 2, 2, -1, -1;
  const ProblemInstance flat(a, Vector::Constant(3, -4.0), Vector::Constant(3, 2.0 / 3));
  LipschitzOptions opts;
  opts.max_rejections = 5;
  EXPECT_THROW(empirical_hessian_lipschitz(flat, RegConfig::none(3), {Vector::Zero(2), 0.1}, 10, 0, opts),
               Error);
}

TEST(Diagnostics, BasicSuite) {
  const ProblemInstance inst = two_by_one(0.5, 0.5);
  const BasicLipschitzReport r = basic_lipschitz_suite(inst, {scalar(1.0), 0.1}, 100, 0);
  EXPECT_TRUE(r.pass());
  ASSERT_EQ(r.entries.size(), 8u);
  EXPECT_EQ(r.entries[0].name, "S");
  // s is linear with slope 1 in each row.
  EXPECT_NEAR(r.entries[0].max_ratio, 1.0, 1e-9);
  EXPECT_LE(r.entries[0].max_ratio, r.constants.R);

  const GeneratedInstance g = small_instance(5);
  EXPECT_TRUE(basic_lipschitz_suite(g.instance, {g.x_star, 0.1}, 100, 1).pass());
}

TEST(Diagnostics, NormBounds) {
  const GeneratedInstance g = small_instance(6);
  const LeverageSnapshot snap = snapshot(g.instance, g.x_star);
  const NormBoundReport r = norm_bound_suite(snap, std::min(snap.sigma_min_Ax, kBetaCap), 5.0);
  EXPECT_TRUE(r.hypothesis_met);
  EXPECT_TRUE(r.pass());

  const NormBoundReport loose = norm_bound_suite(snap, 2.0 * snap.sigma_min_Ax, 5.0);
  EXPECT_FALSE(loose.hypothesis_met);
  EXPECT_TRUE(loose.pass());
}

TEST(Diagnostics, TimingBench) {
  BenchOptions opts;
  opts.reps = 3;
  opts.hessian_max_n = 64;
  const BenchReport r = timing_bench({{32, 4}, {64, 4}, {128, 4}, {64, 8}}, opts);
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_GT(r.rows[0].grad_ms, 0.0);
  EXPECT_GT(r.rows[1].hess_ms, 0.0);
  EXPECT_LT(r.rows[2].hess_ms, 0.0);
  bool saw_n = false;
  bool saw_d = false;
  for (const BenchSlope& s : r.slopes) {
    saw_n = saw_n || (s.axis == "n" && s.fixed == 4 && s.quantity == "grad" && s.points == 3);
    saw_d = saw_d || (s.axis == "d" && s.fixed == 64 && s.points == 2);
  }
  EXPECT_TRUE(saw_n);
  EXPECT_TRUE(saw_d);
  EXPECT_THROW(timing_bench({}, opts), Error);
}

TEST(Diagnostics, MediansStable) {
  BenchOptions one;
  one.reps = 1;
  one.hessian_max_n = 0;
  BenchOptions five = one;
  five.reps = 5;
  const double a = timing_bench({{512, 8}}, one).rows[0].grad_ms;
  const double b = timing_bench({{512, 8}}, five).rows[0].grad_ms;
  EXPECT_LE(std::max(a, b) / std::min(a, b), 2.0);
}

}  // namespace
}  // namespace levinv
