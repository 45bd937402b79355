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

#include <algorithm>
#include <cmath>
#include <numeric>

namespace juntalab {

Point::Point(Mask b, int dim) : bits(b), n(dim) {
  check_dim(n, kMaxDim, "Point");
  if (bits & ~full_mask(n))
    throw JuntaError("Point: bit set at position >= n");
}

SetFunction::SetFunction(int n, Evaluator eval, StructureFlags flags,
                         Range range)
    : n_(n),
      eval_(std::make_shared<const Evaluator>(std::move(eval))),
      flags_(flags),
      range_(range) {
  check_dim(n, kMaxDim, "SetFunction");
  if (!(range.lo <= range.hi)) throw JuntaError("SetFunction: empty range");
}

SetFunction SetFunction::from_table(int n, std::vector<double> table,
                                    StructureFlags flags, Range range) {
  check_dim(n, 30, "from_table");
  if (table.size() != (size_t{1} << n))
    throw JuntaError("from_table: expected 2^n values, got " +
                     std::to_string(table.size()));
  auto t = std::make_shared<const std::vector<double>>(std::move(table));
  return SetFunction(
      n, [t](Mask x) { return (*t)[x]; }, flags, range);
}

SetFunction SetFunction::from_table(int n, std::vector<double> table,
                                    StructureFlags flags) {
  Range r{0.0, 0.0};
  if (!table.empty()) {
    auto [lo, hi] = std::minmax_element(table.begin(), table.end());
    r = {*lo, *hi};
  }
  return from_table(n, std::move(table), flags, r);
}

double SetFunction::value(const Point& p) const {
  if (p.n != n_) throw JuntaError("SetFunction: point dimension mismatch");
  return (*this)(p.bits);
}

std::vector<double> SetFunction::tabulate() const {
  check_dim(n_, 26, "tabulate");
  std::vector<double> t(size_t{1} << n_);
  for (Mask x = 0; x < t.size(); ++x) t[x] = (*this)(x);
  return t;
}

SetFunction SetFunction::materialize() const {
  return from_table(n_, tabulate(), flags_, range_);
}

SetFunction SetFunction::with_flags(StructureFlags flags) const {
  SetFunction g = *this;
  g.flags_ = flags;
  return g;
}

namespace {

struct NameEntry {
  Family f;
  const char* name;
};

constexpr NameEntry kNames[] = {
    {Family::kLinear, "linear"},
    {Family::kCoverage, "coverage"},
    {Family::kGraphCut, "graph_cut"},
    {Family::kMatroidRank, "matroid_rank"},
    {Family::kBudgetAdditive, "budget_additive"},
    {Family::kTribesXos, "tribes_xos"},
    {Family::kMaxLinearXos, "max_linear_xos"},
    {Family::kClippedMajority, "clipped_majority"},
    {Family::kPseudoBoolean, "pseudo_boolean"},
    {Family::kExplicitTable, "explicit_table"},
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw JuntaError("make_family: " + msg);
}

void check_var(int v, int n, const std::string& what) {
  require(v >= 0 && v < n, what + " refers to variable " + std::to_string(v) +
                               " outside [0," + std::to_string(n) + ")");
}

// Per-variable item masks for coverage-type families (items < 64).
std::vector<Mask> item_masks(const FamilyParams& p, int n, int* items) {
  require(p.sets.size() == static_cast<size_t>(n),
          "sets must have one entry per variable");
  std::vector<Mask> cover(n, 0);
  int max_item = -1;
  for (int i = 0; i < n; ++i) {
    for (int it : p.sets[i]) {
      require(it >= 0 && it < 64, "item index must be in [0,64)");
      cover[i] |= bit(it);
      max_item = std::max(max_item, it);
    }
  }
  *items = max_item + 1;
  return cover;
}

SetFunction make_linear(int n, const FamilyParams& p) {
  require(p.weights.size() == static_cast<size_t>(n),
          "linear needs n weights");
  double pos = 0, neg = 0;
  for (double w : p.weights) (w >= 0 ? pos : neg) += w * p.scale;
  bool nonneg = neg == 0.0;
  StructureFlags fl{nonneg, true, nonneg, nonneg};
  auto w = p.weights;
  double s = p.scale;
  return SetFunction(
      n,
      [w, s](Mask x) {
        double v = 0;
        for (size_t i = 0; i < w.size(); ++i)
          if (has(x, i)) v += w[i];
        return s * v;
      },
      fl, {neg, pos});
}

SetFunction make_coverage(int n, const FamilyParams& p) {
  int items = 0;
  auto cover = item_masks(p, n, &items);
  std::vector<double> iw = p.item_weights;
  if (iw.empty()) iw.assign(items, 1.0);
  require(static_cast<int>(iw.size()) >= items,
          "item_weights shorter than the largest item index");
  for (double w : iw) require(w >= 0, "item_weights must be nonnegative");
  double total = std::accumulate(iw.begin(), iw.end(), 0.0) * p.scale;
  double s = p.scale;
  return SetFunction(
      n,
      [cover, iw, s](Mask x) {
        Mask c = 0;
        for (size_t i = 0; i < cover.size(); ++i)
          if (has(x, i)) c |= cover[i];
        double v = 0;
        for (int it : vars_of(c)) v += iw[it];
        return s * v;
      },
      {true, true, true, true}, {0.0, total});
}

SetFunction make_cut(int n, const FamilyParams& p) {
  double total = 0;
  for (const Edge& e : p.edges) {
    check_var(e.u, n, "edge");
    check_var(e.v, n, "edge");
    require(e.u != e.v, "self-loop edge");
    require(e.w >= 0, "edge weights must be nonnegative");
    total += e.w * p.scale;
  }
  auto edges = p.edges;
  double s = p.scale;
  bool trivial = total == 0.0;
  return SetFunction(
      n,
      [edges, s](Mask x) {
        double v = 0;
        for (const Edge& e : edges)
          if (has(x, e.u) != has(x, e.v)) v += e.w;
        return s * v;
      },
      {trivial, true, true, trivial}, {0.0, total});
}

SetFunction make_matroid(int n, const FamilyParams& p) {
  require(p.blocks.size() == p.capacities.size(),
          "blocks and capacities must have equal length");
  Mask seen = 0;
  std::vector<Mask> bm;
  double top = 0;
  for (size_t j = 0; j < p.blocks.size(); ++j) {
    Mask m = 0;
    for (int v : p.blocks[j]) {
      check_var(v, n, "block");
      require(!(seen & bit(v)), "blocks must be disjoint");
      seen |= bit(v);
      m |= bit(v);
    }
    require(p.capacities[j] >= 0, "capacities must be nonnegative");
    bm.push_back(m);
    top += std::min<int>(p.capacities[j], popcount(m));
  }
  auto cap = p.capacities;
  double s = p.scale;
  return SetFunction(
      n,
      [bm, cap, s](Mask x) {
        double v = 0;
        for (size_t j = 0; j < bm.size(); ++j)
          v += std::min(popcount(x & bm[j]), cap[j]);
        return s * v;
      },
      {true, true, true, true}, {0.0, top * s});
}

SetFunction make_budget(int n, const FamilyParams& p) {
  require(p.weights.size() == static_cast<size_t>(n),
          "budget_additive needs n weights");
  for (double w : p.weights) require(w >= 0, "weights must be nonnegative");
  require(p.budget >= 0, "budget must be nonnegative");
  double sum = std::accumulate(p.weights.begin(), p.weights.end(), 0.0);
  auto w = p.weights;
  double b = p.budget, s = p.scale;
  return SetFunction(
      n,
      [w, b, s](Mask x) {
        double v = 0;
        for (size_t i = 0; i < w.size(); ++i)
          if (has(x, i)) v += w[i];
        return s * std::min(v, b);
      },
      {true, true, true, true}, {0.0, s * std::min(sum, b)});
}

SetFunction make_tribes(int n, const FamilyParams& p) {
  require(p.a >= 1 && p.b >= 1, "tribes_xos needs a >= 1 and b >= 1");
  require(n == p.a * p.b, "tribes_xos requires n = a*b");
  int a = p.a, b = p.b;
  return SetFunction(
      n,
      [a, b](Mask x) {
        int best = 0;
        for (int j = 0; j < b; ++j)
          best = std::max(best, popcount((x >> (j * a)) & full_mask(a)));
        return static_cast<double>(best) / a;
      },
      {true, false, true, true}, {0.0, 1.0});
}

SetFunction make_max_linear(int n, const FamilyParams& p) {
  require(!p.clauses.empty(), "max_linear_xos needs at least one clause");
  double top = 0;
  for (const auto& c : p.clauses) {
    require(c.size() == static_cast<size_t>(n), "clause length must be n");
    double sum = 0;
    for (double w : c) {
      require(w >= 0, "XOS clause weights must be nonnegative");
      sum += w;
    }
    top = std::max(top, sum);
  }
  auto cl = p.clauses;
  return SetFunction(
      n,
      [cl](Mask x) {
        double best = 0;
        for (const auto& c : cl) {
          double v = 0;
          for (size_t i = 0; i < c.size(); ++i)
            if (has(x, i)) v += c[i];
          best = std::max(best, v);
        }
        return best;
      },
      {true, false, true, true}, {0.0, top});
}

SetFunction make_clipped(int n) {
  require(n >= 1, "clipped_majority needs n >= 1");
  double root = std::sqrt(static_cast<double>(n));
  return SetFunction(
      n,
      [n, root](Mask x) {
        double s = 2.0 * popcount(x) - n;
        return std::clamp(s / root, -1.0, 1.0);
      },
      {true, false, false, false}, {-1.0, 1.0});
}

SetFunction make_pseudo_boolean(int n, const FamilyParams& p) {
  require(p.k >= 1, "pseudo_boolean needs k >= 1");
  int items = 0;
  auto cover = item_masks(p, n, &items);
  int k = p.k;
  return SetFunction(
      n,
      [cover, k](Mask x) {
        Mask c = 0;
        for (size_t i = 0; i < cover.size(); ++i)
          if (has(x, i)) c |= cover[i];
        return static_cast<double>(std::min(popcount(c), k)) / k;
      },
      {true, true, true, true}, {0.0, 1.0});
}

SetFunction make_table(int n, const FamilyParams& p) {
  check_dim(n, 26, "explicit_table");
  require(p.table.size() == (size_t{1} << n),
          "explicit_table needs 2^n values, got " +
              std::to_string(p.table.size()));
  Range r;
  if (p.range) {
    r = *p.range;
  } else {
    auto [lo, hi] = std::minmax_element(p.table.begin(), p.table.end());
    r = {*lo, *hi};
  }
  for (size_t i = 0; i < p.table.size(); ++i) {
    double v = p.table[i];
    require(std::isfinite(v) && v >= r.lo - kTol && v <= r.hi + kTol,
            "table[" + std::to_string(i) + "] outside range");
    if (p.claims.nonnegative)
      require(v >= -kTol, "table[" + std::to_string(i) +
                              "] negative but claims nonnegative");
  }
  return SetFunction::from_table(n, p.table, p.claims, r);
}

}  // namespace

std::string family_name(Family f) {
  for (const auto& e : kNames)
    if (e.f == f) return e.name;
  return "unknown";
}

Family family_from_name(const std::string& name) {
  for (const auto& e : kNames)
    if (name == e.name) return e.f;
  throw JuntaError("unknown family '" + name + "'");
}

SetFunction make_family(const FamilySpec& spec) {
  check_dim(spec.n, kMaxDim, "make_family");
  const FamilyParams& p = spec.params;
  require(p.scale > 0 && std::isfinite(p.scale), "scale must be positive");
  switch (spec.family) {
    case Family::kLinear:
      return make_linear(spec.n, p);
    case Family::kCoverage:
      return make_coverage(spec.n, p);
    case Family::kGraphCut:
      return make_cut(spec.n, p);
    case Family::kMatroidRank:
      return make_matroid(spec.n, p);
    case Family::kBudgetAdditive:
      return make_budget(spec.n, p);
    case Family::kTribesXos:
      return make_tribes(spec.n, p);
    case Family::kMaxLinearXos:
      return make_max_linear(spec.n, p);
    case Family::kClippedMajority:
      return make_clipped(spec.n);
    case Family::kPseudoBoolean:
      return make_pseudo_boolean(spec.n, p);
    case Family::kExplicitTable:
      return make_table(spec.n, p);
  }
  throw JuntaError("make_family: unhandled family");
}

SetFunction restrict_fn(const SetFunction& f, const std::vector<int>& J,
                        Mask z) {
  Mask jm = 0;
  for (int v : J) {
    if (v < 0 || v >= f.n()) throw JuntaError("restrict: J out of range");
    if (jm & bit(v)) throw JuntaError("restrict: repeated variable in J");
    jm |= bit(v);
  }
  if (z & ~full_mask(static_cast<int>(J.size())))
    throw JuntaError("restrict: assignment wider than J");
  Mask fixed = deposit(z, J);
  std::vector<int> free = complement(J, f.n());
  SetFunction g = f;
  return SetFunction(
      static_cast<int>(free.size()),
      [g, free, fixed](Mask y) { return g(fixed | deposit(y, free)); },
      f.flags(), f.range_hint());
}

double derivative(const SetFunction& f, int i, Mask x) {
  if (i < 0 || i >= f.n()) throw JuntaError("derivative: index out of range");
  return f(x | bit(i)) - f(x & ~bit(i));
}

double second_derivative(const SetFunction& f, int i, int j, Mask x) {
  if (i == j || i < 0 || j < 0 || i >= f.n() || j >= f.n())
    throw JuntaError("second_derivative: bad indices");
  Mask base = x & ~bit(i) & ~bit(j);
  return f(base | bit(i) | bit(j)) + f(base) - f(base | bit(i)) -
         f(base | bit(j));
}

StructureReport structure_check_table(int n, const std::vector<double>& t) {
  StructureReport r;
  const Mask size = Mask{1} << n;
  for (int i = 0; i < n; ++i) {
    for (Mask x = 0; x < size; ++x) {
      if (has(x, i)) continue;
      double d = t[x | bit(i)] - t[x];
      if (d < -kTol) r.is_monotone = false;
      r.max_monotone_violation = std::max(r.max_monotone_violation, -d);
      for (int j = i + 1; j < n; ++j) {
        if (has(x, j)) continue;
        double dd = t[x | bit(i) | bit(j)] + t[x] - t[x | bit(i)] -
                    t[x | bit(j)];
        if (dd > kTol) r.is_submodular = false;
        r.max_violation = std::max(r.max_violation, dd);
      }
    }
  }
  return r;
}

StructureReport structure_check(const SetFunction& f) {
  check_dim(f.n(), 22, "structure_check");
  return structure_check_table(f.n(), f.tabulate());
}

}  // namespace juntalab
