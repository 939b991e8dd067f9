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
#include "levinv/leverage.hpp"
#include "levinv/objective.hpp"
#include "support.hpp"

namespace levinv {
namespace {

TEST(Generator, PlantedOptimum) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.n = 8 + static_cast<Index>(seed);
    cfg.d = 1 + static_cast<Index>(seed % 6);
    const GeneratedInstance g = gen_instance(cfg);
    EXPECT_LE(loss_total(g.instance, g.x_star, g.reg).loss_total, 1e-20);
    EXPECT_LE(grad_loss_total(g.instance, g.x_star, g.reg).grad_total.norm(), 1e-12);
    EXPECT_NEAR(g.instance.c().sum(), static_cast<double>(cfg.d), 1e-8);
    EXPECT_GE(g.instance.c().minCoeff(), 0.0);
    EXPECT_LE(g.instance.c().maxCoeff(), 1.0);
    EXPECT_TRUE(g.reg.is_zero());
  }
}

TEST(Generator, SeedRepeatable) {
  GenConfig cfg;
  cfg.seed = 99;
  const GeneratedInstance a = gen_instance(cfg);
  const GeneratedInstance b = gen_instance(cfg);
  EXPECT_EQ(a.instance.A(), b.instance.A());
  EXPECT_EQ(a.instance.b(), b.instance.b());
  EXPECT_EQ(a.instance.c(), b.instance.c());
  EXPECT_EQ(a.x_star, b.x_star);
  cfg.seed = 100;
  EXPECT_NE(gen_instance(cfg).x_star, a.x_star);
}

TEST(Generator, Seed7Margins) {
  GenConfig cfg;
  cfg.n = 20;
  cfg.d = 4;
  cfg.seed = 7;
  cfg.margin = 0.5;
  const GeneratedInstance g = gen_instance(cfg);
  EXPECT_TRUE(validate(g.instance).ok());
  EXPECT_GE(g.truth.min_abs_s, 0.5);
  EXPECT_LE((eval_s(g.instance, g.x_star) - g.truth.s_star).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(well_posedness(g.instance, g.x_star, 0.5).scaling_ok);
  EXPECT_TRUE(well_posedness(g.instance, g.x_star, 0.01).passes());
}

TEST(Generator, RegularizedWeights) {
  GenConfig cfg;
  cfg.mode = GenMode::Regularized;
  cfg.l = 1e-3;
  cfg.beta = 1e-6;
  cfg.seed = 4;
  const GeneratedInstance g = gen_instance(cfg);
  EXPECT_FALSE(g.reg.is_zero());
  EXPECT_TRUE(satisfies_weight_bound(g.reg, g.truth.sigma_min_A));
  EXPECT_EQ(g.reg.l, 1e-3);
  EXPECT_GT(loss_total(g.instance, g.x_star, g.reg).loss_reg, 0.0);
}

TEST(Generator, NoiseKeepsTargetsInRange) {
  GenConfig cfg;
  cfg.noise = 0.5;
  cfg.seed = 2;
  const GeneratedInstance g = gen_instance(cfg);
  EXPECT_GE(g.instance.c().minCoeff(), 0.0);
  EXPECT_LE(g.instance.c().maxCoeff(), 1.0);
  cfg.noise = 0.0;
  EXPECT_NE(gen_instance(cfg).instance.c(), g.instance.c());
}

TEST(Generator, ConfigValidation) {
  GenConfig cfg;
  cfg.n = 3;
  cfg.d = 4;
  EXPECT_THROW(gen_instance(cfg), Error);
  cfg = GenConfig{};
  cfg.margin = 0.0;
  EXPECT_THROW(gen_instance(cfg), Error);
  cfg = GenConfig{};
  cfg.noise = -1.0;
  EXPECT_THROW(gen_instance(cfg), Error);
  EXPECT_EQ(parse_gen_mode("regularized"), GenMode::Regularized);
  EXPECT_THROW(parse_gen_mode("bogus"), Error);
}

TEST(PerturbStart, RadiusAndDirection) {
  const Vector x = (Vector(3) << 1.0, -2.0, 0.5).finished();
  EXPECT_EQ(perturb_start(x, 0.0, 3), x);
  const Vector a = perturb_start(x, 0.25, 1);
  const Vector b = perturb_start(x, 0.25, 2);
  EXPECT_NEAR((a - x).norm(), 0.25, 1e-14);
  EXPECT_NEAR((b - x).norm(), 0.25, 1e-14);
  EXPECT_GT((a - b).norm(), 1e-6);
  EXPECT_THROW(perturb_start(x, -1.0, 1), Error);
}

TEST(GroundTruth, RoundTrip) {
  GenConfig cfg;
  cfg.mode = GenMode::Regularized;
  cfg.seed = 12;
  const GeneratedInstance g = gen_instance(cfg);
  testing::ScratchDir dir("truth");
  save_ground_truth(g.truth, dir.file("t.truth"));
  const GroundTruth back = load_ground_truth(dir.file("t.truth"));
  EXPECT_EQ(back.x_star, g.truth.x_star);
  EXPECT_EQ(back.s_star, g.truth.s_star);
  EXPECT_EQ(back.seed, 12u);
  EXPECT_EQ(back.mode, GenMode::Regularized);
  EXPECT_EQ(back.reg.w, g.truth.reg.w);
  EXPECT_EQ(back.margin, g.truth.margin);
}

TEST(VerificationBatch, RangesAndValidity) {
  const auto batch = verification_batch(40, 8, 30, 5);
  ASSERT_EQ(batch.size(), 30u);
  for (const auto& vc : batch) {
    EXPECT_GE(vc.instance.d(), 1);
    EXPECT_LE(vc.instance.d(), 8);
    EXPECT_GE(vc.instance.n(), std::max<Index>(5, vc.instance.d()));
    EXPECT_LE(vc.instance.n(), 40);
    EXPECT_NO_THROW(snapshot(vc.instance, vc.x));
  }
  EXPECT_THROW(verification_batch(3, 4, 1, 0), Error);
}

}  // namespace
}  // namespace levinv
