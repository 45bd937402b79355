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

#include "juntalab/learn.h"

#include <gtest/gtest.h>

#include <cmath>

#include "juntalab/boolfour.h"
#include "oracles.h"

namespace juntalab {
namespace {

SetFunction coverage6() {
  FamilySpec s{Family::kCoverage, 6, {}};
  s.params.sets = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4}, {1, 4}};
  s.params.item_weights = {0.3, 0.2, 0.2, 0.15, 0.15};
  return make_family(s);
}

TEST(Pac, SampleCountFormula) {
  EXPECT_EQ(pac_sample_count(2, 0.5, 1.0 / 6),
            static_cast<size_t>(std::ceil(8 * 4 / 0.25 * (2 + std::log(6.0)))));
}

TEST(Pac, LearnsPlantedJunta) {
  // 2-junta on variables 1 and 4 of 8; the rest are irrelevant.
  SetFunction f(8, [](Mask x) { return std::sqrt(0.5 * has(x, 1) + 0.5 * has(x, 4)); },
                {true, true, true, false}, {0, 1});
  RngStream r(3);
  PacResult res = pac_proper(FunctionSource(f), 0.2, {}, r);
  ASSERT_TRUE(res.accepted);
  EXPECT_LE(oracle::lp_dist(f, res.model.as_function(), 1), 0.2);
  EXPECT_TRUE(structure_check_table(static_cast<int>(res.model.vars.size()),
                                    res.model.table)
                  .is_submodular);
}

TEST(Pac, ConstantAccepted) {
  SetFunction c(5, [](Mask) { return 0.4; }, {true, true, true, false}, {0, 1});
  RngStream r(4);
  PacResult res = pac_proper(FunctionSource(c), 0.3, {}, r);
  EXPECT_TRUE(res.accepted);
  EXPECT_LE(oracle::lp_dist(c, res.model.as_function(), 1), 0.3);
}

TEST(Pac, SeedDeterministic) {
  RngStream a(9), b(9);
  PacResult x = pac_proper(FunctionSource(coverage6()), 0.3, {}, a);
  PacResult y = pac_proper(FunctionSource(coverage6()), 0.3, {}, b);
  EXPECT_EQ(x.model.vars, y.model.vars);
  EXPECT_EQ(x.model.table, y.model.table);
}

TEST(Parities, Ordering) {
  EXPECT_EQ(low_degree_parities({1, 3}, 2), (std::vector<Mask>{0, 2, 8, 10}));
  EXPECT_EQ(low_degree_parities({0, 1, 2}, 1), (std::vector<Mask>{0, 1, 2, 4}));
}

TEST(Polynomial, Predict) {
  PolynomialModel m;
  m.n = 2;
  m.terms = {{0, 0.75}, {1, -0.25}, {2, -0.25}, {3, -0.25}};
  for (Mask x = 0; x < 4; ++x) EXPECT_DOUBLE_EQ(m.predict(x), oracle::or2()(x));
  EXPECT_THROW(m.predict(Point(0, 3)), JuntaError);
}

TEST(Regression, RecoversOrExactly) {
  RngStream r(5);
  RegressionConfig cfg;
  cfg.threshold = 0.1;
  RegressionResult res = low_influence_regression(FunctionSource(oracle::or2()), 1.0, 0.5, cfg, r);
  EXPECT_EQ(res.detection.I, (std::vector<int>{0, 1}));
  for (Mask x = 0; x < 4; ++x) EXPECT_NEAR(res.model.predict(x), oracle::or2()(x), 1e-9);
}

TEST(Agnostic, OrFullSupport) {
  AgnosticResult a = agnostic_l1(exhaustive_samples(oracle::or2()), 1.0, 0.5, 2.0);
  EXPECT_NEAR(a.objective, 0.0, 1e-9);
  for (Mask x = 0; x < 4; ++x) EXPECT_NEAR(a.model.predict(x), oracle::or2()(x), 1e-9);
}

TEST(Agnostic, RejectsBadLabels) {
  SetFunction g = oracle::table_fn(2, {0, 2, 0, 0});
  EXPECT_THROW(agnostic_l1(exhaustive_samples(g), 1.0, 0.5, 2.0), JuntaError);
}

TEST(Pmac, Or) {
  RngStream r(6);
  auto src = std::make_shared<FunctionSource>(oracle::or2());
  PmacTree t = pmac(src, 1.0, 0.3, {}, r);
  EXPECT_GE(pmac_success(oracle::or2(), t, 1.0), 0.7);
}

TEST(Pmac, CoverageSuccess) {
  RngStream r(7);
  auto src = std::make_shared<FunctionSource>(coverage6());
  PmacTree t = pmac(src, 1.0, 0.25, {}, r);
  EXPECT_GE(pmac_success(coverage6(), t, 1.0), 0.75);
  EXPECT_FALSE(t.budget_exhausted);
  EXPECT_GE(t.node_count, 1u);
}

TEST(Pmac, XosTribes) {
  FamilySpec s{Family::kTribesXos, 6, {}};
  s.params.a = 3;
  s.params.b = 2;
  SetFunction f = make_family(s);
  RngStream r(8);
  PmacConfig cfg;
  cfg.xos = true;
  PmacTree t = pmac(std::make_shared<FunctionSource>(f), 1.0, 0.25, cfg, r);
  EXPECT_TRUE(t.xos);
  EXPECT_GE(pmac_success(f, t, 1.0), 0.75);
}

}  // namespace
}  // namespace juntalab
