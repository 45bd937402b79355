// Copyright 2026 The juntalab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "juntalab/estim.h"

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>

#include "oracles.h"

namespace juntalab {
namespace {

TEST(Rng, GoldenValues) {
  // Frozen from an independent reimplementation of the documented seeding.
  RngStream r(42);
  EXPECT_EQ(r.next_u64(), 12078886983757728612ULL);
  EXPECT_DOUBLE_EQ(r.uniform01(), 0.055927945745681495);
  EXPECT_EQ(RngStream(42).split(3).next_u64(), 3373628690623590346ULL);
}

TEST(Rng, SplitDependsOnIdentityOnly) {
  RngStream a(7, 2), b(7, 2);
  for (int i = 0; i < 10; ++i) a.next_u64();
  EXPECT_EQ(a.split(5).next_u64(), b.split(5).next_u64());
  EXPECT_NE(b.split(5).next_u64(), b.split(6).next_u64());
  EXPECT_NE(RngStream(7, 2).next_u64(), RngStream(7, 3).next_u64());
}

TEST(Rng, BelowStaysInRange) {
  RngStream r(1);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(r.below(7), 7u);
  EXPECT_THROW(r.below(0), JuntaError);
}

TEST(Draw, UniformFrequencies) {
  RngStream r(3);
  ProductDist d = ProductDist::uniform(2);
  std::vector<int> cnt(4, 0);
  const int m = 100000;
  for (int i = 0; i < m; ++i) ++cnt[draw_point(d, r)];
  const double sigma = std::sqrt(m * 0.25 * 0.75);
  for (int c : cnt) EXPECT_NEAR(c, m / 4.0, 3 * sigma);
}

TEST(Draw, BiasedSubset) {
  RngStream r(4);
  const Mask S = full_mask(10);
  EXPECT_EQ(draw_biased_subset(S, 0.0, r), 0u);
  EXPECT_EQ(draw_biased_subset(S, 1.0, r), S);
  const int m = 100000;
  double total = 0;
  for (int i = 0; i < m; ++i) {
    Mask x = draw_biased_subset(S, 0.5, r);
    EXPECT_EQ(x & ~S, 0u);
    total += popcount(x);
  }
  // Binomial(10, 1/2): sd of the mean is sqrt(2.5/m).
  EXPECT_NEAR(total / m, 5.0, 3 * std::sqrt(2.5 / m));
}

TEST(Estimate, Means) {
  RngStream r(5);
  ProductDist u = ProductDist::uniform(2);
  EXPECT_DOUBLE_EQ(estimate_mean(oracle::table_fn(2, {0.3, 0.3, 0.3, 0.3}), u, 1000, r), 0.3);
  EXPECT_NEAR(estimate_mean(oracle::or2(), u, 100000, r), 0.75, 0.01);
  SetFunction gap(2, [](Mask x) { return x == 0 ? 0.5 : (x == 2 ? 0.5 : 0.0); }, {}, {});
  EXPECT_NEAR(estimate_mean(gap, u, 100000, r), 0.25, 0.01);
}

TEST(Estimate, MeanIsSeedDeterministic) {
  FamilySpec s{Family::kClippedMajority, 12, {}};
  SetFunction f = make_family(s);
  RngStream a(9), b(9);
  EXPECT_EQ(estimate_mean(f, ProductDist::uniform(12), 50000, a),
            estimate_mean(f, ProductDist::uniform(12), 50000, b));
}

TEST(Estimate, FourierCoefficients) {
  RngStream r(6);
  SampleSet s = draw_samples(oracle::or2(), ProductDist::uniform(2), 100000, r);
  EXPECT_NEAR(estimate_fourier_coeff(s, 1), -0.25, 0.01);
  EXPECT_NEAR(estimate_fourier_coeff(s, 3), -0.25, 0.01);
  double mean = 0;
  for (const auto& x : s.samples) mean += x.label;
  EXPECT_DOUBLE_EQ(estimate_fourier_coeff(s, 0), mean / s.size());
}

TEST(Estimate, Multilinear) {
  RngStream r(7);
  EXPECT_DOUBLE_EQ(estimate_multilinear(oracle::or2(), {1.0, 1.0}, 100, r), 1.0);
  EXPECT_NEAR(estimate_multilinear(oracle::or2(), {0.5, 0.5}, 100000, r), 0.75, 0.01);
  FamilySpec s{Family::kLinear, 3, {}};
  s.params.weights = {0.2, 0.3, 0.5};
  EXPECT_NEAR(estimate_multilinear(make_family(s), {0.1, 0.6, 0.9}, 100000, r),
              0.2 * 0.1 + 0.3 * 0.6 + 0.5 * 0.9, 0.01);
}

TEST(Estimate, SampleSizeFormula) {
  EXPECT_EQ(sample_size(1.0, 0.1, 0.05),
            static_cast<size_t>(std::ceil(std::log(2 / 0.05) / (2 * 0.01))));
  EXPECT_EQ(sample_size(2.0, 0.5, 0.5),
            static_cast<size_t>(std::ceil(4 * std::log(4.0) / 0.5)));
}

TEST(Samples, ExhaustiveCoversCube) {
  SampleSet s = exhaustive_samples(oracle::or2());
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s.source, SampleSource::kExhaustive);
  for (Mask x = 0; x < 4; ++x) EXPECT_EQ(s.samples[x].label, oracle::or2()(x));
}

TEST(Sources, SubcubeRestricts) {
  auto parent = std::make_shared<FunctionSource>(oracle::or2());
  SubcubeSource sub(parent, {0}, 0, 1000);
  EXPECT_EQ(sub.n(), 1);
  RngStream r(8);
  for (int i = 0; i < 50; ++i) {
    Sample x = sub.draw(r);
    EXPECT_EQ(x.label, x.x == 1 ? 1.0 : 0.0);
  }
}

TEST(Sources, ScaledClamps) {
  auto base = std::make_shared<FunctionSource>(oracle::or2());
  ScaledSource sc(base, 3.0, 0.0, 2.0);
  auto all = sc.enumerate();
  ASSERT_TRUE(all.has_value());
  EXPECT_EQ(all->samples[0].label, 0.0);
  EXPECT_EQ(all->samples[3].label, 2.0);
}

TEST(Parallel, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Parallel, ThreadCap) {
  setenv("JUNTALAB_THREADS", "1", 1);
  EXPECT_EQ(worker_count(), 1);
  unsetenv("JUNTALAB_THREADS");
  EXPECT_GE(worker_count(), 1);
}

}  // namespace
}  // namespace juntalab
