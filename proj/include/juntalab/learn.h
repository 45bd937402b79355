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

// Learners over the uniform distribution: proper l1 learning with an LP,
// recursive multiplicative (PMAC) learning, low-influence least squares and
// agnostic l1 regression.

#ifndef JUNTALAB_LEARN_H_
#define JUNTALAB_LEARN_H_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "juntalab/detect.h"
#include "juntalab/estim.h"
#include "juntalab/junta.h"
#include "juntalab/lpcore.h"

namespace juntalab {

struct PolynomialModel {
  int n = 0;
  std::vector<int> support;
  int degree = 0;
  std::map<Mask, double> terms;

  double predict(Mask x) const;
  double predict(const Point& p) const;
};

struct PacConfig {
  double s = 0;  // detection junta-size parameter; 0 selects the default
  int t_cap = 4;
  double delta = 1.0 / 6.0;
  size_t max_samples = 200000;
  size_t detection_sample_cap = 1000000;
  size_t max_subsets = 5000;
};

// ceil(8 * 2^t / eps^2 * (t + ln(1/delta))).
size_t pac_sample_count(int t, double eps, double delta);

struct PacResult {
  JuntaModel model;  // accepted hypothesis, or the zero model
  std::vector<int> J;
  bool accepted = false;
  double empirical_error = 0;
  JuntaModel best;   // lowest empirical error among solved subsets
  double best_error = 0;
  DetectionResult detection;
  size_t samples = 0;
  size_t samples_required = 0;
  int t = 0;
  int subsets_tried = 0;
  int subsets_pruned = 0;  // lower bound already above the best objective
  int lp_solves = 0;
};

PacResult pac_proper(const ExampleSource& oracle, double eps,
                     const PacConfig& cfg, RngStream& rng);

struct RegressionConfig {
  size_t max_parities = 1024;
  size_t samples = 0;  // 0: ceil(4 P / eps^2)
  size_t max_samples = 200000;
  // Keep threshold for detection; 0 uses 2^{-4d}/2.
  double threshold = 0;
  int max_degree = -1;
  size_t detection_sample_cap = 1000000;
};

struct RegressionResult {
  PolynomialModel model;
  DetectionResult detection;
  size_t samples = 0;
  bool exhaustive = false;
  double mean_sq_residual = 0;
};

RegressionResult low_influence_regression(const ExampleSource& oracle,
                                          double a, double eps,
                                          const RegressionConfig& cfg,
                                          RngStream& rng);

struct AgnosticConfig {
  std::vector<int> support;  // used when nonempty
  int max_degree = -1;
  size_t max_parities = 512;
  double s = 0;
  int full_support_max_n = 8;
};

struct AgnosticResult {
  PolynomialModel model;
  double objective = 0;
  LpStatus status = LpStatus::kInfeasible;
};

AgnosticResult agnostic_l1(const SampleSet& samples, double a, double eps,
                           double W, const AgnosticConfig& cfg = {});

// All S ⊆ support with |S| <= d, ordered by size then mask.
std::vector<Mask> low_degree_parities(const std::vector<int>& support, int d);

struct PmacNode {
  enum class Kind { kLeaf, kInternal };
  Kind kind = Kind::kLeaf;
  double value = 0;  // leaf value
  std::string reason;  // leaf: good, zero_mean, depth, budget, unvisited, ...
  double mu = 0;
  std::vector<int> vars;  // internal: node-local variables of the junta
  std::vector<PmacNode> children;  // internal: one per assignment to vars

  double predict(Mask x, int n) const;
};

struct PmacTree {
  int n = 0;
  double gamma = 0;
  double eps = 0;
  int depth_cap = 0;
  int depth = 0;
  size_t node_count = 0;
  size_t learner_calls = 0;
  bool budget_exhausted = false;
  bool xos = false;
  PmacNode root;

  double predict(Mask x) const { return root.predict(x, n); }
  double predict(const Point& p) const;
};

struct PmacConfig {
  PmacConfig() { inner.max_samples = 20000; }
  size_t budget = 4096;  // learner invocations
  size_t node_examples = 20000;
  size_t filter_attempts = size_t{1} << 24;  // per example
  PacConfig inner;
  // Detection threshold 1e-9: the formula value underflows at eps'.
  RegressionConfig regression{.threshold = 1e-9};
  bool xos = false;
  double a = 1.0;  // influence bound for the XOS inner learner
};

PmacTree pmac(std::shared_ptr<const ExampleSource> oracle, double gamma,
              double eps, const PmacConfig& cfg, RngStream& rng);

// Exhaustive Pr[f(x) <= h(x) <= (1+gamma) f(x)].
double pmac_success(const SetFunction& f, const PmacTree& h, double gamma);

}  // namespace juntalab

#endif  // JUNTALAB_LEARN_H_
