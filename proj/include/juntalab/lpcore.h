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

// Linear programs for l1 minimization and a dense two-phase simplex solver.

#ifndef JUNTALAB_LPCORE_H_
#define JUNTALAB_LPCORE_H_

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "juntalab/estim.h"

namespace juntalab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kLe, kEq, kGe };

struct LpVariable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  double cost = 0.0;
};

struct LpConstraint {
  std::string name;
  std::vector<std::pair<int, double>> terms;
  Sense sense = Sense::kLe;
  double rhs = 0.0;
};

// Minimize sum cost_j x_j subject to rows and variable bounds.
struct LpProblem {
  std::vector<LpVariable> vars;
  std::vector<LpConstraint> rows;
  double offset = 0.0;  // constant added to the objective

  int add_var(std::string name, double lower, double upper, double cost);
  int add_row(std::string name, std::vector<std::pair<int, double>> terms,
              Sense sense, double rhs);
  // Plain-text dump:
  //   minimize
  //    obj: <coef> <var> + ... [+ <constant>]
  //   subject to
  //    <row>: <coef> <var> + ... (<=|=|>=) <rhs>
  //   bounds
  //    <lower> <= <var> <= <upper>      (-inf / +inf allowed)
  //   end
  std::string to_text() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string status_name(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  size_t iterations = 0;
};

struct SimplexOptions {
  size_t max_iterations = 200000;
  // Consecutive degenerate pivots before switching from the largest
  // reduced-cost rule to Bland's rule.
  size_t degenerate_switch = 50;
};

LpSolution solve(const LpProblem& p, const SimplexOptions& opt = {});

struct RecheckResult {
  bool ok = false;
  double max_violation = 0.0;
  double objective = 0.0;
  std::string worst;
};

// Independent feasibility and objective re-check of a solution.
RecheckResult recheck(const LpProblem& p, const std::vector<double>& x,
                      double tol = 1e-7);

// h(z) = base + sum coef * column.
struct CellExpr {
  double base = 0.0;
  std::vector<std::pair<int, double>> terms;
};

struct ProperLp {
  LpProblem problem;
  std::vector<int> J;
  std::vector<CellExpr> cells;
  int submodularity_rows = 0;
  size_t samples = 0;
  size_t groups = 0;  // distinct (cell, label) pairs
};

enum class ProperLpForm {
  // One column h(z) per cell and one slack per (cell, label) group with
  // rows s >= +-(h - l), weighted by multiplicity.
  kSlack,
  // The per-cell loss is convex piecewise linear in h(z) with breakpoints
  // at the cell's labels; each piece is one bounded column, so the only
  // rows are the submodularity constraints. Same optimum, far fewer rows.
  kPiecewise,
};

// Minimize (1/m) sum_i |h(x^i_J) - l^i| over submodular tables h on
// {0,1}^|J|, with 0 <= h <= 1 when bounded.
ProperLp build_proper_lp(const SampleSet& samples, const std::vector<int>& J,
                         bool bounded = true,
                         ProperLpForm form = ProperLpForm::kSlack);
std::vector<double> proper_table(const ProperLp& lp, const LpSolution& sol);
// t(t-1)/2 * 2^{t-2}.
size_t submodularity_constraint_count(int t);

struct SparseL1Lp {
  LpProblem problem;
  std::vector<Mask> parities;
  std::vector<int> pos_var;
  std::vector<int> neg_var;
  size_t groups = 0;
};

// Minimize (1/m) sum_i |sum_S a_S chi_S(x^i) - l^i| s.t. sum_S |a_S| <= W.
SparseL1Lp build_sparse_l1_lp(const SampleSet& samples,
                              const std::vector<Mask>& parities, double W);
std::vector<double> sparse_coeffs(const SparseL1Lp& lp, const LpSolution& sol);

}  // namespace juntalab

#endif  // JUNTALAB_LPCORE_H_
