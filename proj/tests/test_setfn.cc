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

#include "juntalab/setfn.h"

#include <gtest/gtest.h>

#include "oracles.h"

namespace juntalab {
namespace {

FamilySpec spec(Family f, int n) { return FamilySpec{f, n, {}}; }

TEST(Families, LinearEvaluates) {
  FamilySpec s = spec(Family::kLinear, 2);
  s.params.weights = {0.5, 0.5};
  SetFunction f = make_family(s);
  EXPECT_DOUBLE_EQ(f(0b11), 1.0);
  EXPECT_DOUBLE_EQ(f(0b01), 0.5);
  EXPECT_DOUBLE_EQ(f(0b00), 0.0);
}

TEST(Families, TribesTakesBestBlock) {
  FamilySpec s = spec(Family::kTribesXos, 4);
  s.params.a = 2;
  s.params.b = 2;
  SetFunction f = make_family(s);
  EXPECT_DOUBLE_EQ(f(0b0011), 1.0);
  EXPECT_DOUBLE_EQ(f(0b0101), 0.5);
  EXPECT_TRUE(f.flags().xos);
}

TEST(Families, SingleEdgeCut) {
  FamilySpec s = spec(Family::kGraphCut, 2);
  s.params.edges = {{0, 1, 1.0}};
  SetFunction f = make_family(s);
  EXPECT_DOUBLE_EQ(f(0b01), 1.0);
  EXPECT_DOUBLE_EQ(f(0b11), 0.0);
}

TEST(Families, CoverageIsOr) {
  FamilySpec s = spec(Family::kCoverage, 2);
  s.params.sets = {{0}, {0}};
  SetFunction f = make_family(s);
  for (Mask x = 0; x < 4; ++x) EXPECT_DOUBLE_EQ(f(x), oracle::or2()(x));
}

TEST(Families, NameRoundTrip) {
  for (Family f : {Family::kLinear, Family::kCoverage, Family::kGraphCut,
                   Family::kMatroidRank, Family::kBudgetAdditive,
                   Family::kTribesXos, Family::kMaxLinearXos,
                   Family::kClippedMajority, Family::kPseudoBoolean,
                   Family::kExplicitTable})
    EXPECT_EQ(family_from_name(family_name(f)), f);
  EXPECT_THROW(family_from_name("nope"), JuntaError);
}

TEST(Families, RejectsBadParameters) {
  FamilySpec s = spec(Family::kTribesXos, 5);
  s.params.a = 2;
  s.params.b = 2;
  EXPECT_THROW(make_family(s), JuntaError);
  FamilySpec t = spec(Family::kExplicitTable, 2);
  t.params.table = {0, 1, 1};
  EXPECT_THROW(make_family(t), JuntaError);
  EXPECT_THROW(make_family(spec(Family::kLinear, 64)), JuntaError);
}

TEST(Families, DeclaredFlagsHoldOnSmallInstances) {
  FamilySpec m = spec(Family::kMatroidRank, 6);
  m.params.blocks = {{0, 1, 2}, {3, 4, 5}};
  m.params.capacities = {2, 1};
  FamilySpec b = spec(Family::kBudgetAdditive, 5);
  b.params.weights = {0.3, 0.5, 0.2, 0.4, 0.1};
  b.params.budget = 0.7;
  FamilySpec c = spec(Family::kGraphCut, 4);
  c.params.edges = {{0, 1, 1.0}, {1, 2, 2.0}, {2, 3, 0.5}, {0, 3, 1.0}};
  for (const FamilySpec& s : {m, b, c}) {
    SetFunction f = make_family(s);
    StructureReport r = structure_check(f);
    EXPECT_EQ(r.is_submodular, f.flags().submodular) << family_name(s.family);
    if (f.flags().monotone) EXPECT_TRUE(r.is_monotone);
    EXPECT_LE(oracle::max_second_derivative(f.n(), f.tabulate()), 1e-12);
  }
}

TEST(Restrict, OrAbsorbs) {
  SetFunction g = restrict_fn(oracle::or2(), {0}, 1);
  ASSERT_EQ(g.n(), 1);
  EXPECT_DOUBLE_EQ(g(0), 1.0);
  EXPECT_DOUBLE_EQ(g(1), 1.0);
  SetFunction h = restrict_fn(oracle::or2(), {0}, 0);
  EXPECT_DOUBLE_EQ(h(0), 0.0);
  EXPECT_DOUBLE_EQ(h(1), 1.0);
}

TEST(Restrict, CutEdge) {
  FamilySpec s = spec(Family::kGraphCut, 2);
  s.params.edges = {{0, 1, 1.0}};
  SetFunction g = restrict_fn(make_family(s), {0}, 1);
  EXPECT_DOUBLE_EQ(g(0), 1.0);
  EXPECT_DOUBLE_EQ(g(1), 0.0);
}

TEST(Restrict, RejectsBadInput) {
  EXPECT_THROW(restrict_fn(oracle::or2(), {0, 0}, 0), JuntaError);
  EXPECT_THROW(restrict_fn(oracle::or2(), {0}, 2), JuntaError);
  EXPECT_THROW(restrict_fn(oracle::or2(), {2}, 0), JuntaError);
}

TEST(Derivatives, Or) {
  SetFunction f = oracle::or2();
  EXPECT_DOUBLE_EQ(derivative(f, 0, 0b00), 1.0);
  EXPECT_DOUBLE_EQ(derivative(f, 0, 0b10), 0.0);
  for (Mask x = 0; x < 4; ++x)
    EXPECT_DOUBLE_EQ(second_derivative(f, 0, 1, x), -1.0);
}

TEST(Derivatives, Linear) {
  FamilySpec s = spec(Family::kLinear, 2);
  s.params.weights = {0.5, 0.5};
  SetFunction f = make_family(s);
  for (Mask x = 0; x < 4; ++x) {
    EXPECT_DOUBLE_EQ(derivative(f, 0, x), 0.5);
    EXPECT_DOUBLE_EQ(second_derivative(f, 0, 1, x), 0.0);
  }
}

TEST(Structure, OrAndCut) {
  StructureReport o = structure_check(oracle::or2());
  EXPECT_TRUE(o.is_submodular);
  EXPECT_TRUE(o.is_monotone);
  StructureReport a = structure_check(oracle::and2());
  EXPECT_FALSE(a.is_submodular);
  EXPECT_DOUBLE_EQ(a.max_violation, 1.0);
  FamilySpec s = spec(Family::kGraphCut, 3);
  s.params.edges = {{0, 2, 1.0}};
  StructureReport c = structure_check(make_family(s));
  EXPECT_TRUE(c.is_submodular);
  EXPECT_FALSE(c.is_monotone);
}

TEST(Structure, AgreesWithBruteForceOnRandomTables) {
  std::uint64_t st = 12345;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> t(16);
    for (Mask x = 0; x < 16; ++x) {
      st = st * 6364136223846793005ULL + 1442695040888963407ULL;
      const double noise = static_cast<double>(st >> 40) / (1 << 24);
      // Odd reps: concave of cardinality plus a modular term (submodular).
      t[x] = rep % 2 ? std::sqrt(static_cast<double>(popcount(x))) +
                           0.1 * (x & 1)
                     : noise;
    }
    const double worst = oracle::max_second_derivative(4, t);
    StructureReport r = structure_check_table(4, t);
    EXPECT_EQ(r.is_submodular, worst <= kTol);
  }
}

TEST(SetFunction, MaterializeMatches) {
  FamilySpec s = spec(Family::kClippedMajority, 6);
  SetFunction f = make_family(s);
  SetFunction g = f.materialize();
  for (Mask x = 0; x < 64; ++x) EXPECT_EQ(f(x), g(x));
  EXPECT_EQ(f.tabulate().size(), 64u);
}

}  // namespace
}  // namespace juntalab
