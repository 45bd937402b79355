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

// Junta selection: additive (value-query) selection for submodular
// functions, multiplicative selection for monotone submodular functions,
// selection under product distributions, and the pseudo-Boolean variant.

#ifndef JUNTALAB_JUNTA_H_
#define JUNTALAB_JUNTA_H_

#include <vector>

#include "json.hpp"
#include "juntalab/estim.h"
#include "juntalab/setfn.h"

namespace juntalab {

struct JuntaModel {
  int n = 0;
  std::vector<int> vars;
  std::vector<double> table;  // index bit k = value of vars[k]
  double scale = 1.0;
  nlohmann::json provenance = nlohmann::json::object();

  double predict(Mask x) const { return scale * table[extract(x, vars)]; }
  double predict(const Point& p) const;
  // The model as an oracle on n variables.
  SetFunction as_function(StructureFlags flags = {}) const;
};

struct CriterionConfig {
  // Criterion probabilities are exact while the random set's support has at
  // most exact_cap elements, Monte-Carlo with `samples` draws otherwise.
  int exact_cap = 20;
  size_t samples = 800;
};

struct SelectionTrace {
  std::vector<int> S;  // inclusion order
  std::vector<int> T;
  std::vector<double> s_prob;  // criterion probability at inclusion
  std::vector<double> t_prob;
  bool exact = true;           // every criterion evaluated exactly
  size_t criterion_samples = 0;
  double cap = 0.0;            // per-phase size cap
  bool cap_hit = false;
  double alpha = 0.0;          // alpha (additive/product) or beta
  double delta = 0.0;          // delta, or eta for product selection

  std::vector<int> joint() const;  // sorted S ∪ T
};

// Carries the partial trace when a selection phase exceeds its cap.
class SelectionCapExceeded : public JuntaError {
 public:
  SelectionCapExceeded(const std::string& what, SelectionTrace trace)
      : JuntaError(what), trace(std::move(trace)) {}
  SelectionTrace trace;
};

// Additive selection. require_flag=false skips the submodular-flag check
// (used by the tester, which runs the procedure on arbitrary inputs).
SelectionTrace select_additive(const SetFunction& f, double alpha,
                               double delta, const CriterionConfig& cfg,
                               RngStream& rng, bool require_flag = true);

// alpha = eps^2/16, delta = 1/(2 log2(16 n/eps^2)) with the log argument
// clamped to >= 2.
double reduce_alpha(double eps);
double reduce_delta(int n, double eps);

struct Reduction {
  JuntaModel model;
  SelectionTrace trace;
};

Reduction reduce_once_run(const SetFunction& f, double eps,
                          const CriterionConfig& cfg, RngStream& rng);
JuntaModel reduce_once(const SetFunction& f, double eps,
                       const CriterionConfig& cfg, RngStream& rng);

struct JuntaSchedule {
  int target = 0;         // stop once |J| <= target
  int max_rounds = 4;
  double min_shrink = 0.1;
};

JuntaModel approximate_junta(const SetFunction& f, double eps,
                             const JuntaSchedule& schedule,
                             const CriterionConfig& cfg, RngStream& rng);

SelectionTrace select_multiplicative(const SetFunction& f, double beta,
                                     double delta, const CriterionConfig& cfg,
                                     RngStream& rng);

// beta = gamma^2/(108 log2(4/eps)), delta = 1/(2 log2(2n/eps)).
double multiplicative_beta(double gamma, double eps);
double multiplicative_delta(int n, double eps);

struct MultiplicativeSchedule {
  // One round uses (gamma, eps) directly. With more rounds, round r uses
  // gamma/2^{r+2} and eps/2^{r+1}, so the product of the (1+gamma_r) stays
  // below 1+gamma and the failure masses sum to at most eps.
  int max_rounds = 1;
  double min_shrink = 0.1;
};

JuntaModel multiplicative_junta(const SetFunction& f, double gamma, double eps,
                                const MultiplicativeSchedule& schedule,
                                const CriterionConfig& cfg, RngStream& rng);

// Exhaustive Pr[f(x) <= h(x) <= (1+gamma) f(x)] (n <= 22).
double multiplicative_success(const SetFunction& f, const JuntaModel& h,
                              double gamma);

SelectionTrace select_product(const SetFunction& f, const ProductDist& dist,
                              double alpha, double eta,
                              const CriterionConfig& cfg, RngStream& rng);

// eta = 1/log2(16 n/eps^2), argument clamped to >= 2.
double product_eta(int n, double eps);

// Product-distribution reduction: select with alpha = eps^2/16 and the eta
// above, then project onto J' under dist.
JuntaModel product_junta(const SetFunction& f, const ProductDist& dist,
                         double eps, const CriterionConfig& cfg,
                         RngStream& rng);

// Exact E_D[(f - h)^2] (n <= 22).
double product_sq_error(const SetFunction& f, const JuntaModel& h,
                        const ProductDist& dist);
// Cell means of f under dist, conditioned on x_vars.
std::vector<double> product_projection(const SetFunction& f,
                                       const ProductDist& dist,
                                       const std::vector<int>& vars);

JuntaModel pseudo_boolean_junta(const SetFunction& f, int k, double eps,
                                const CriterionConfig& cfg, RngStream& rng);

}  // namespace juntalab

#endif  // JUNTALAB_JUNTA_H_
