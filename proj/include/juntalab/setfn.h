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

// Set-function oracles and the built-in function families.

#ifndef JUNTALAB_SETFN_H_
#define JUNTALAB_SETFN_H_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "juntalab/common.h"

namespace juntalab {

// An assignment x in {0,1}^n packed as a bitmask.
struct Point {
  Mask bits = 0;
  int n = 0;

  Point() = default;
  Point(Mask bits, int n);
  bool operator==(const Point&) const = default;
};

struct StructureFlags {
  bool monotone = false;
  bool submodular = false;
  bool nonnegative = false;
  // Pointwise max of nonnegative linear functions. Not part of the checked
  // contract; used to pick the self-bounding constant.
  bool xos = false;
  bool operator==(const StructureFlags&) const = default;
};

struct Range {
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
  bool operator==(const Range&) const = default;
};

class SetFunction {
 public:
  using Evaluator = std::function<double(Mask)>;

  SetFunction() = default;
  SetFunction(int n, Evaluator eval, StructureFlags flags, Range range);

  // Table-backed function; index = mask.
  static SetFunction from_table(int n, std::vector<double> table,
                                StructureFlags flags, Range range);
  static SetFunction from_table(int n, std::vector<double> table,
                                StructureFlags flags = {});

  int n() const { return n_; }
  double operator()(Mask x) const { return (*eval_)(x); }
  double value(const Point& p) const;
  const StructureFlags& flags() const { return flags_; }
  Range range_hint() const { return range_; }

  // All 2^n values in mask order (n <= 26).
  std::vector<double> tabulate() const;
  // Same function with a table-backed evaluator; cheap repeated evaluation.
  SetFunction materialize() const;

  SetFunction with_flags(StructureFlags flags) const;

 private:
  int n_ = 0;
  std::shared_ptr<const Evaluator> eval_;
  StructureFlags flags_;
  Range range_;
};

enum class Family {
  kLinear,
  kCoverage,
  kGraphCut,
  kMatroidRank,
  kBudgetAdditive,
  kTribesXos,
  kMaxLinearXos,
  kClippedMajority,
  kPseudoBoolean,
  kExplicitTable,
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct Edge {
  int u = 0;
  int v = 0;
  double w = 1.0;
  bool operator==(const Edge&) const = default;
};

// Parameters for every family; each family reads only its own fields.
//   linear:          weights[n]                      f = scale*sum w_i x_i
//   coverage:        sets[i] (items covered by i), item_weights
//   graph_cut:       edges
//   matroid_rank:    blocks (disjoint), capacities   partition matroid rank
//   budget_additive: weights, budget                 min(sum w_i x_i, budget)
//   tribes_xos:      a, b (n = a*b)                  (1/a) max_j |x ∩ A_j|
//   max_linear_xos:  clauses[j][i] >= 0              max_j sum_i c_ji x_i
//   clipped_majority: none                           clip(sum(2x_i-1)/sqrt n)
//   pseudo_boolean:  k, sets                         min(#covered, k)/k
//   explicit_table:  table[2^n], optional range, claims
struct FamilyParams {
  std::vector<double> weights;
  std::vector<std::vector<int>> sets;
  std::vector<double> item_weights;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> blocks;
  std::vector<int> capacities;
  std::vector<std::vector<double>> clauses;
  std::vector<double> table;
  double budget = 1.0;
  double scale = 1.0;
  int a = 0;
  int b = 0;
  int k = 0;
  std::optional<Range> range;
  StructureFlags claims;
  bool operator==(const FamilyParams&) const = default;
};

struct FamilySpec {
  Family family = Family::kLinear;
  int n = 0;
  FamilyParams params;
  bool operator==(const FamilySpec&) const = default;
};

SetFunction make_family(const FamilySpec& spec);

// g(y) = f(z on J, y on the remaining variables in ascending order).
SetFunction restrict_fn(const SetFunction& f, const std::vector<int>& J,
                        Mask z);

double derivative(const SetFunction& f, int i, Mask x);
double second_derivative(const SetFunction& f, int i, int j, Mask x);

struct StructureReport {
  bool is_submodular = true;
  bool is_monotone = true;
  // Largest positive second derivative (0 when submodular up to tol).
  double max_violation = 0.0;
  // Largest negative first derivative magnitude.
  double max_monotone_violation = 0.0;
};

StructureReport structure_check(const SetFunction& f);
StructureReport structure_check_table(int n, const std::vector<double>& t);

}  // namespace juntalab

#endif  // JUNTALAB_SETFN_H_
