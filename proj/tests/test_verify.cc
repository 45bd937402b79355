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

#include "juntalab/verify.h"

#include <gtest/gtest.h>

#include <cmath>

#include "juntalab/boolfour.h"
#include "oracles.h"

namespace juntalab {
namespace {

const CheckRow* find_row(const CheckReport& r, const std::string& check) {
  for (const auto& row : r.rows)
    if (row.check == check) return &row;
  return nullptr;
}

TEST(Inequalities, OrPasses) {
  CheckReport r = check_structural_inequalities(oracle::or2(), "or2");
  EXPECT_TRUE(r.pass());
  const CheckRow* infl = find_row(r, "influence");
  ASSERT_NE(infl, nullptr);
  // Monotone submodular: Infl1 = 1/2 <= ||f||_1 = 3/4.
  EXPECT_NEAR(infl->slack, 0.25, 1e-12);
}

TEST(Inequalities, OneEdgeCutIsTight) {
  FamilySpec s{Family::kGraphCut, 2, {}};
  s.params.edges = {{0, 1, 1.0}};
  CheckReport r = check_structural_inequalities(make_family(s), "cut");
  const CheckRow* infl = find_row(r, "influence");
  ASSERT_NE(infl, nullptr);
  EXPECT_LT(std::abs(infl->slack), 1e-9);
  EXPECT_TRUE(r.pass());
}

TEST(Inequalities, SkipsUnflaggedChecks) {
  CheckReport r = check_structural_inequalities(oracle::and2(), "and2");
  EXPECT_FALSE(r.notes.empty());
  EXPECT_EQ(find_row(r, "influence"), nullptr);
}

TEST(Corpus, NormalizedAndDeterministic) {
  auto a = builtin_corpus({4, 8});
  auto b = builtin_corpus({4, 8});
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].name, b[i].name);
    EXPECT_EQ(a[i].f.tabulate(), b[i].f.tabulate());
    if (a[i].name.rfind("raw_", 0) == 0) continue;
    std::vector<double> t = a[i].f.tabulate();
    EXPECT_GE(*std::min_element(t.begin(), t.end()), -1e-12) << a[i].name;
    EXPECT_LE(*std::max_element(t.begin(), t.end()), 1 + 1e-12) << a[i].name;
    if (a[i].f.flags().submodular)
      EXPECT_LE(oracle::max_second_derivative(a[i].f.n(), t), 1e-9) << a[i].name;
  }
  EXPECT_THROW(builtin_corpus({17}), JuntaError);
}

TEST(Corpus, Normalize) {
  SetFunction g = normalize(oracle::table_fn(2, {0, 2, 2, 4}));
  EXPECT_DOUBLE_EQ(g(3), 1.0);
  EXPECT_DOUBLE_EQ(g(1), 0.5);
  SetFunction h = normalize(oracle::table_fn(2, {-1, 0, 0, 1}));
  EXPECT_DOUBLE_EQ(h(0), 0.0);
  EXPECT_DOUBLE_EQ(h(3), 1.0);
}

TEST(Boosting, ClosedFormFamilies) {
  SetSystem empty_only{1, {1, 0}};
  for (double p : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(boosting_sigma(empty_only, p), 1 - p, 1e-15);
  }
  EXPECT_TRUE(check_boosting(empty_only, {0.1, 0.5, 0.9}).pass());
  SetSystem all{3, std::vector<char>(8, 1)};
  EXPECT_DOUBLE_EQ(boosting_sigma(all, 0.3), 1.0);
  EXPECT_TRUE(check_boosting(all, {0.2, 0.4}).pass());
}

TEST(Boosting, RejectsUpClosedFamily) {
  SetSystem up{2, {0, 1, 1, 1}};
  EXPECT_FALSE(is_down_monotone(up));
  EXPECT_THROW(check_boosting(up, {0.5}), JuntaError);
}

TEST(Boosting, RandomFamiliesAreDownClosed) {
  RngStream r(3);
  for (int k = 0; k < 20; ++k) {
    SetSystem s = random_down_closed(10, r);
    EXPECT_TRUE(is_down_monotone(s));
    // sigma_p by direct enumeration.
    double sig = 0;
    for (Mask x = 0; x < (Mask{1} << 10); ++x)
      if (s.member[x]) sig += std::pow(0.3, popcount(x)) * std::pow(0.7, 10 - popcount(x));
    EXPECT_NEAR(boosting_sigma(s, 0.3), sig, 1e-12);
    EXPECT_TRUE(check_boosting(s, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}).pass());
  }
}

TEST(Concentration, BinomialTail) {
  FamilySpec s{Family::kLinear, 16, {}};
  s.params.weights = std::vector<double>(16, 1.0);
  SetFunction f = make_family(s);
  // Pr[Bin(16,1/2) >= 12] against exp(-0.25 * 8 / (4 + 5/6)).
  double tail = 0;
  for (int k = 12; k <= 16; ++k) tail += std::tgamma(17) / (std::tgamma(k + 1) * std::tgamma(17 - k));
  tail /= 65536.0;
  const double bound = std::exp(-0.25 * 8 / (4 + 5.0 / 6));
  CheckReport r = check_concentration(f, {0.5});
  const CheckRow* up = find_row(r, "upper_tail");
  ASSERT_NE(up, nullptr);
  EXPECT_NEAR(up->slack, bound - tail, 1e-12);
  EXPECT_TRUE(r.pass());
}

TEST(Concentration, OrAndConstant) {
  EXPECT_TRUE(check_concentration(oracle::or2(), {0.3}).pass());
  SetFunction c = SetFunction::from_table(3, std::vector<double>(8, 0.5),
                                          {true, true, true, false});
  EXPECT_TRUE(check_concentration(c, {0.1, 0.5, 1.0}).pass());
}

TEST(Concentration, RejectsSteepFunctions) {
  SetFunction f = SetFunction::from_table(1, {0, 3}, {true, true, true, false});
  EXPECT_THROW(check_concentration(f, {0.5}), JuntaError);
  EXPECT_THROW(check_concentration(oracle::and2(), {0.5}), JuntaError);
}

TEST(LowerBound, LinearIsOneEighth) {
  // E|x3 + x4 - 1| / 4 over uniform bits.
  double oracle_err = 0;
  for (int x = 0; x < 4; ++x) oracle_err += std::abs((x & 1) + (x >> 1) - 1.0) / 4;
  oracle_err /= 4;
  LowerBoundParams p;
  p.a = 4;
  p.k = 2;
  LowerBoundResult r = lower_bound("linear", p);
  EXPECT_DOUBLE_EQ(oracle_err, 0.125);
  EXPECT_NEAR(r.error, oracle_err, 1e-12);
  EXPECT_TRUE(r.report.pass());
}

TEST(LowerBound, ClippedMajorityBaseline) {
  // The frozen acceptance baseline, recomputed by brute-force projection.
  FamilySpec s{Family::kClippedMajority, 16, {}};
  SetFunction f = make_family(s);
  std::vector<double> proj = oracle::projected(f, {0, 1, 2, 3, 4, 5, 6, 7});
  double err = 0;
  for (Mask x = 0; x < 65536; ++x) err += std::abs(f(x) - proj[x]);
  err /= 65536;
  EXPECT_NEAR(err, 0.4341256618499756, 1e-12);
  LowerBoundParams p;
  p.n = 16;
  p.k = 8;
  LowerBoundResult r = lower_bound("l2_influence", p);
  EXPECT_NEAR(r.error, err, 1e-12);
  EXPECT_LE(r.infl2, 1.0);
  EXPECT_NEAR(r.infl2, influences(f, 2.0).total, 1e-12);
}

TEST(LowerBound, TribesSampledNearExact) {
  LowerBoundParams p;
  p.a = 3;
  p.samples = 200000;
  LowerBoundResult r = lower_bound("xos", p);
  EXPECT_EQ(r.k, 4);
  EXPECT_GT(r.exact, 0);
  EXPECT_NEAR(r.error, r.exact, 4 * r.sigma);
  EXPECT_TRUE(r.report.pass());
}

TEST(LowerBound, ProductTightAndErrors) {
  LowerBoundParams p;
  p.a = 4;
  EXPECT_TRUE(lower_bound("product_tight", p).report.pass());
  EXPECT_THROW(lower_bound("nope", p), JuntaError);
  LowerBoundParams bad;
  bad.a = 0;
  EXPECT_THROW(lower_bound("linear", bad), JuntaError);
}

TEST(Testers, SubmodularInputsAccepted) {
  FamilySpec s{Family::kCoverage, 6, {}};
  s.params.sets = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4}, {1, 4}};
  s.params.item_weights = {0.3, 0.2, 0.2, 0.15, 0.15};
  SetFunction f = make_family(s);
  RngStream r(1);
  EXPECT_EQ(test_from_examples(FunctionSource(f), 0.25, r).verdict, Verdict::kYes);
  EXPECT_EQ(test_with_queries(f, 0.25, r).verdict, Verdict::kYes);
  SetFunction half(12, [](Mask) { return 0.5; }, {}, {0, 1});
  EXPECT_EQ(test_with_queries(half, 0.2, r).verdict, Verdict::kYes);
  EXPECT_EQ(test_from_examples(FunctionSource(half), 0.2, r).verdict, Verdict::kYes);
}

TEST(Testers, AndGadgetsRejected) {
  SetFunction and4(4, [](Mask x) { return x == 15 ? 1.0 : 0.0; }, {}, {0, 1});
  RngStream r(2);
  // AND of 4 lies at l1 distance exactly 1/16 from the submodular cone.
  EXPECT_NEAR(submodular_distance(and4, {0, 1, 2, 3}), 0.0625, 1e-9);
  EXPECT_EQ(test_from_examples(FunctionSource(and4), 0.03, r).verdict, Verdict::kNo);
  SetFunction and2(12, [](Mask x) { return (x & 3) == 3 ? 1.0 : 0.0; }, {}, {0, 1});
  TesterResult q = test_with_queries(and2, 0.05, r);
  EXPECT_EQ(q.verdict, Verdict::kNo);
}

TEST(FarCorpus, DistancesAreCertified) {
  // AND of two variables: the 4-point LP optimum is 1/4 (one unit of
  // second-derivative violation spread over a 1/4-mass cell).
  SetFunction and2(4, [](Mask x) { return (x & 5) == 5 ? 1.0 : 0.0; }, {}, {0, 1});
  EXPECT_NEAR(submodular_distance(and2, {0, 2}), 0.25, 1e-9);
  for (const auto& e : far_corpus()) {
    EXPECT_GE(e.distance, 2 * e.eps - 1e-12) << e.name;
    EXPECT_GT(e.eps, 0) << e.name;
  }
}

TEST(Planted, TargetsAreSubmodularJuntas) {
  auto ts = planted_targets(10, 11);
  ASSERT_EQ(ts.size(), 10u);
  for (const auto& t : ts) {
    EXPECT_LE(t.vars.size(), 4u);
    EXPECT_LE(t.f.n(), 12);
    EXPECT_TRUE(structure_check(t.f).is_submodular) << t.name;
    // Irrelevant variables have zero influence.
    InfluenceReport inf = influences(t.f, 1.0);
    for (int i = 0; i < t.f.n(); ++i)
      if (std::find(t.vars.begin(), t.vars.end(), i) == t.vars.end())
        EXPECT_EQ(inf.per_variable[i], 0.0) << t.name;
  }
}

TEST(Suites, NamesAndUnknown) {
  auto names = suite_names();
  EXPECT_NE(std::find(names.begin(), names.end(), "inequalities"), names.end());
  EXPECT_NE(std::find(names.begin(), names.end(), "all"), names.end());
  EXPECT_THROW(run_suite("nope", builtin_corpus({4})), JuntaError);
  CheckReport r = run_suite("inequalities", builtin_corpus({4}));
  EXPECT_TRUE(r.pass());
  EXPECT_GT(r.instances(), 0u);
}

}  // namespace
}  // namespace juntalab
