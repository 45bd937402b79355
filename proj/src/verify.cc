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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "juntalab/boolfour.h"
#include "juntalab/detect.h"
#include "juntalab/junta.h"
#include "juntalab/lpcore.h"

namespace juntalab {

namespace {

constexpr double kCheckTol = 1e-9;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Row for "lhs <= rhs" style checks with slack = rhs - lhs.
CheckRow ineq_row(const std::string& check, const std::string& instance,
                  int n, double slack, double tol, const std::string& detail) {
  CheckRow r{check, instance, n, slack, {}, 0};
  if (!std::isfinite(slack) || slack < -tol)
    r.violations.push_back(check + " on " + instance + ": " + detail +
                           " (slack " + fmt(slack) + ")");
  return r;
}

}  // namespace

size_t CheckReport::instances() const {
  std::vector<std::string> names;
  for (const auto& r : rows) names.push_back(r.instance);
  std::sort(names.begin(), names.end());
  return std::unique(names.begin(), names.end()) - names.begin();
}

double CheckReport::slack() const {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) s = std::min(s, r.slack);
  return s;
}

std::vector<std::string> CheckReport::violations() const {
  std::vector<std::string> v;
  for (const auto& r : rows) v.insert(v.end(), r.violations.begin(),
                                      r.violations.end());
  return v;
}

void CheckReport::merge(const CheckReport& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

void CheckReport::sort_rows() {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const CheckRow& a, const CheckRow& b) {
                     return std::tie(a.instance, a.check) <
                            std::tie(b.instance, b.check);
                   });
}

SetFunction normalize(const SetFunction& f) {
  std::vector<double> t = f.tabulate();
  auto [lo_it, hi_it] = std::minmax_element(t.begin(), t.end());
  const double lo = *lo_it, hi = *hi_it;
  StructureFlags fl = f.flags();
  if (lo >= -kTol) {
    if (hi > 0)
      for (double& v : t) v = std::max(0.0, v) / hi;
    fl.nonnegative = true;
  } else {
    for (double& v : t) v = (v - lo) / (hi - lo);
    // A shift keeps submodularity and monotonicity but not XOS.
    fl.nonnegative = true;
    fl.xos = false;
  }
  return SetFunction::from_table(f.n(), std::move(t), fl, {0.0, 1.0});
}

namespace {

std::vector<int> random_subset(int n, int size, RngStream& rng) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  for (int i = 0; i < size; ++i)
    std::swap(v[i], v[i + static_cast<int>(rng.below(n - i))]);
  v.resize(size);
  std::sort(v.begin(), v.end());
  return v;
}

double uniform(RngStream& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.uniform01();
}

// Partition [0,n) into consecutive blocks of the given size.
std::vector<std::vector<int>> blocks_of(int n, int size) {
  std::vector<std::vector<int>> b;
  for (int i = 0; i < n; i += size) {
    b.emplace_back();
    for (int j = i; j < std::min(n, i + size); ++j) b.back().push_back(j);
  }
  return b;
}

SetFunction concave_of_modular(int n, std::vector<double> w) {
  std::vector<double> t(size_t{1} << n);
  for (Mask x = 0; x < t.size(); ++x) {
    double s = 0;
    for (int i = 0; i < n; ++i)
      if (has(x, i)) s += w[i];
    t[x] = std::sqrt(s);
  }
  return SetFunction::from_table(n, std::move(t), {true, true, true, true});
}

}  // namespace

std::vector<CorpusEntry> builtin_corpus(const std::vector<int>& dims) {
  std::vector<CorpusEntry> out;
  for (int n : dims) {
    check_dim(n, 16, "builtin_corpus");
    RngStream rng(2026, static_cast<std::uint64_t>(n));
    const std::string suf = "_n" + std::to_string(n);
    auto add = [&](const std::string& name, const SetFunction& f) {
      out.push_back({name + suf, normalize(f)});
    };
    auto spec = [&](Family fam) {
      FamilySpec s;
      s.family = fam;
      s.n = n;
      return s;
    };

    FamilySpec lin = spec(Family::kLinear);
    for (int i = 0; i < n; ++i) lin.params.weights.push_back(uniform(rng, 0.1, 1));
    add("linear", make_family(lin));

    FamilySpec cov = spec(Family::kCoverage);
    const int items = std::min(2 * n, 63);
    for (int i = 0; i < n; ++i) {
      int k = 1 + static_cast<int>(rng.below(3));
      cov.params.sets.push_back(random_subset(items, k, rng));
    }
    for (int j = 0; j < items; ++j)
      cov.params.item_weights.push_back(uniform(rng, 0.2, 1));
    add("coverage", make_family(cov));

    FamilySpec cut = spec(Family::kGraphCut);
    for (int e = 0; e < n; ++e) {
      auto uv = random_subset(n, 2, rng);
      cut.params.edges.push_back({uv[0], uv[1], uniform(rng, 0.2, 1)});
    }
    add("graph_cut", make_family(cut));

    FamilySpec mat = spec(Family::kMatroidRank);
    mat.params.blocks = blocks_of(n, 3);
    for (size_t b = 0; b < mat.params.blocks.size(); ++b)
      mat.params.capacities.push_back(1 + static_cast<int>(rng.below(2)));
    add("matroid_rank", make_family(mat));

    FamilySpec bud = spec(Family::kBudgetAdditive);
    double sum = 0;
    for (int i = 0; i < n; ++i) {
      bud.params.weights.push_back(uniform(rng, 0, 1));
      sum += bud.params.weights.back();
    }
    bud.params.budget = 0.4 * sum;
    add("budget_additive", make_family(bud));

    FamilySpec tri = spec(Family::kTribesXos);
    tri.params.a = (n >= 12 && n % 4 == 0) ? 4 : (n % 2 == 0 ? 2 : 1);
    tri.params.b = n / tri.params.a;
    add("tribes_xos", make_family(tri));

    FamilySpec mx = spec(Family::kMaxLinearXos);
    for (int c = 0; c < 3; ++c) {
      std::vector<double> w;
      for (int i = 0; i < n; ++i)
        w.push_back(rng.bernoulli(0.6) ? uniform(rng, 0, 1) : 0.0);
      mx.params.clauses.push_back(w);
    }
    add("max_linear_xos", make_family(mx));

    add("clipped_majority", make_family(spec(Family::kClippedMajority)));

    FamilySpec pb = spec(Family::kPseudoBoolean);
    for (int i = 0; i < n; ++i)
      pb.params.sets.push_back(random_subset(n, 1 + static_cast<int>(rng.below(2)), rng));
    pb.params.k = 3;
    add("pseudo_boolean", make_family(pb));

    std::vector<double> w;
    for (int i = 0; i < n; ++i) w.push_back(uniform(rng, 0.1, 1));
    add("explicit_table", concave_of_modular(n, w));
  }
  // Unscaled instances with derivatives in [-1,1], for the tail bounds.
  for (int n : dims) {
    const std::string suf = "_n" + std::to_string(n);
    FamilySpec mat{Family::kMatroidRank, n, {}};
    mat.params.blocks = blocks_of(n, 4);
    for (size_t b = 0; b < mat.params.blocks.size(); ++b)
      mat.params.capacities.push_back(2);
    out.push_back({"raw_matroid_rank" + suf, make_family(mat)});

    FamilySpec lin{Family::kLinear, n, {}};
    for (int i = 0; i < n; ++i) lin.params.weights.push_back(i % 3 ? 1.0 : 0.0);
    out.push_back({"raw_linear" + suf, make_family(lin)});

    FamilySpec bud{Family::kBudgetAdditive, n, {}};
    for (int i = 0; i < n; ++i) bud.params.weights.push_back(0.5 + 0.5 * (i % 2));
    bud.params.budget = n / 3.0;
    out.push_back({"raw_budget_additive" + suf, make_family(bud)});

    FamilySpec cut{Family::kGraphCut, n, {}};
    for (int i = 0; i + 1 < n; i += 2) cut.params.edges.push_back({i, i + 1, 1.0});
    out.push_back({"raw_matching_cut" + suf, make_family(cut)});

    FamilySpec cov{Family::kCoverage, n, {}};
    for (int i = 0; i < n; ++i) cov.params.sets.push_back({i / 2});
    out.push_back({"raw_coverage" + suf, make_family(cov)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structural inequalities.

CheckReport check_structural_inequalities(const SetFunction& f,
                                          const std::string& instance) {
  check_dim(f.n(), 16, "check_structural_inequalities");
  const auto t0 = Clock::now();
  const int n = f.n();
  const std::vector<double> t = f.tabulate();
  const StructureFlags fl = f.flags();
  const double N = static_cast<double>(t.size());
  CheckReport rep;
  rep.check = "inequalities";

  double l1 = 0, sup = 0, mean = 0, sq = 0, lip = 0;
  for (double v : t) {
    l1 += std::abs(v);
    sup = std::max(sup, std::abs(v));
    mean += v;
    sq += v * v;
  }
  l1 /= N;
  mean /= N;
  const double var = std::max(0.0, sq / N - mean * mean);
  for (Mask x = 0; x < t.size(); ++x)
    for (int i = 0; i < n; ++i)
      if (!has(x, i)) lip = std::max(lip, std::abs(t[x | bit(i)] - t[x]));
  const double infl1 = influences_table(n, t, 1.0).total;

  const bool submod = fl.submodular, nonneg = fl.nonnegative;

  // Influence vs l1 norm.
  double a = 0;
  if (fl.xos || (submod && nonneg && fl.monotone)) a = 1;
  else if (submod && nonneg) a = 2;
  if (a > 0) {
    rep.rows.push_back(ineq_row("influence", instance, n, a * l1 - infl1,
                                kCheckTol,
                                "Infl1 " + fmt(infl1) + " > " + fmt(a) +
                                    " * l1 " + fmt(l1)));
  } else {
    rep.notes.push_back(instance +
                        ": influence check skipped (needs a nonnegative "
                        "submodular or XOS function)");
  }

  // Variance vs Lipschitz constant times mean (self-bounding).
  if (nonneg && (submod || fl.xos)) {
    const double c = (fl.xos || fl.monotone) ? 1.0 : 2.0;
    rep.rows.push_back(ineq_row("variance", instance, n, c * lip * mean - var,
                                kCheckTol,
                                "Var " + fmt(var) + " > " + fmt(c) + " * " +
                                    fmt(lip) + " * E " + fmt(mean)));
  } else {
    rep.notes.push_back(instance + ": variance check skipped (needs a "
                                   "nonnegative submodular or XOS function)");
  }

  // l1 vs sup norm.
  if (nonneg && (submod || fl.xos)) {
    const double c = (fl.xos || (submod && fl.monotone)) ? 0.5 : 0.25;
    rep.rows.push_back(ineq_row("norm_ratio", instance, n, l1 - c * sup,
                                kCheckTol,
                                "l1 " + fmt(l1) + " < " + fmt(c) + " * sup " +
                                    fmt(sup)));
  } else {
    rep.notes.push_back(instance + ": norm ratio skipped (needs a "
                                   "nonnegative submodular or XOS function)");
  }

  // Degree tails for every d: sum_{|S|>d} f^(S)^2 <= Infl2 / d.
  FourierTable ft = transform_table(n, t);
  std::vector<double> level(n + 1, 0.0);
  for (Mask s = 0; s < ft.coeffs.size(); ++s)
    level[popcount(s)] += ft.coeffs[s] * ft.coeffs[s];
  double infl2 = 0;
  for (int k = 1; k <= n; ++k) infl2 += k * level[k];
  double worst = std::numeric_limits<double>::infinity();
  int worst_d = 1;
  for (int d = 1; d <= n; ++d) {
    double tail = 0;
    for (int k = d + 1; k <= n; ++k) tail += level[k];
    double sl = infl2 / d - tail;
    if (sl < worst) {
      worst = sl;
      worst_d = d;
    }
  }
  if (n >= 1)
    rep.rows.push_back(ineq_row("degree_tail", instance, n, worst, kCheckTol,
                                "tail above degree " + std::to_string(worst_d) +
                                    " exceeds Infl2/d"));

  // |f^({i,j})| = E|d_i d_j f| / 4 for submodular f; slack is -deviation.
  if (submod && n >= 2) {
    double dev = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double acc = 0;
        for (Mask x = 0; x < t.size(); ++x) {
          if (has(x, i) || has(x, j)) continue;
          acc += std::abs(t[x | bit(i) | bit(j)] - t[x | bit(i)] -
                          t[x | bit(j)] + t[x]);
        }
        const double rhs = acc / (N / 4.0) / 4.0;
        dev = std::max(dev, std::abs(std::abs(ft.coeffs[bit(i) | bit(j)]) - rhs));
      }
    rep.rows.push_back(ineq_row("second_order", instance, n, -dev, kCheckTol,
                                "degree-2 coefficient differs from E|d_ij f|/4"));
  } else if (!submod) {
    rep.notes.push_back(instance + ": second-order identity skipped (needs "
                                   "a submodular function)");
  }
  const double ms = ms_since(t0);
  for (auto& r : rep.rows) r.runtime_ms = ms / std::max<size_t>(1, rep.rows.size());
  return rep;
}

// ---------------------------------------------------------------------------
// Boosting.

bool is_down_monotone(const SetSystem& s) {
  if (s.member.size() != (size_t{1} << s.m)) return false;
  for (Mask x = 0; x < s.member.size(); ++x) {
    if (!s.member[x]) continue;
    for (int i : vars_of(x))
      if (!s.member[x & ~bit(i)]) return false;
  }
  return true;
}

SetSystem random_down_closed(int m, RngStream& rng) {
  check_dim(m, 16, "random_down_closed");
  SetSystem s{m, std::vector<char>(size_t{1} << m, 0)};
  const int gens = 1 + static_cast<int>(rng.below(4));
  std::vector<Mask> g;
  for (int k = 0; k < gens; ++k) {
    const double q = uniform(rng, 0.2, 0.8);
    Mask x = 0;
    for (int i = 0; i < m; ++i)
      if (rng.bernoulli(q)) x |= bit(i);
    g.push_back(x);
  }
  for (Mask x = 0; x < s.member.size(); ++x)
    for (Mask y : g)
      if ((x & ~y) == 0) {
        s.member[x] = 1;
        break;
      }
  return s;
}

double boosting_sigma(const SetSystem& s, double p) {
  std::vector<double> count(s.m + 1, 0.0);
  for (Mask x = 0; x < s.member.size(); ++x)
    if (s.member[x]) count[popcount(x)] += 1;
  double sigma = 0;
  for (int k = 0; k <= s.m; ++k)
    if (count[k] > 0)
      sigma += count[k] * std::pow(p, k) * std::pow(1.0 - p, s.m - k);
  return sigma;
}

CheckReport check_boosting(const SetSystem& s, const std::vector<double>& grid,
                           const std::string& instance) {
  check_dim(s.m, 16, "check_boosting");
  if (!is_down_monotone(s))
    throw JuntaError("check_boosting: family is not down-monotone");
  if (!s.member[0]) throw JuntaError("check_boosting: empty family");
  const auto t0 = Clock::now();
  std::vector<double> p = grid;
  std::sort(p.begin(), p.end());
  for (double q : p)
    if (!(q > 0.0 && q < 1.0))
      throw JuntaError("check_boosting: grid points must lie in (0,1)");
  std::vector<double> phi;
  for (double q : p) phi.push_back(std::log(boosting_sigma(s, q)) / std::log1p(-q));
  double worst = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k + 1 < phi.size(); ++k)
    worst = std::min(worst, phi[k + 1] - phi[k]);
  if (phi.size() < 2) worst = 0;
  CheckReport rep;
  rep.check = "boosting";
  rep.rows.push_back(ineq_row("boosting", instance, s.m, worst, kCheckTol,
                              "phi(p) decreased along the grid"));
  rep.rows.back().runtime_ms = ms_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// Concentration.

CheckReport check_concentration(const SetFunction& f,
                                const std::vector<double>& lambdas,
                                const std::string& instance) {
  check_dim(f.n(), 20, "check_concentration");
  if (!f.flags().submodular || !f.flags().nonnegative)
    throw JuntaError("check_concentration: needs a nonnegative submodular "
                     "function");
  const auto t0 = Clock::now();
  const int n = f.n();
  const std::vector<double> t = f.tabulate();
  for (Mask x = 0; x < t.size(); ++x)
    for (int i = 0; i < n; ++i)
      if (!has(x, i) && std::abs(t[x | bit(i)] - t[x]) > 1.0 + 1e-12)
        throw JuntaError("check_concentration: derivative outside [-1,1] on " +
                         instance);
  const double N = static_cast<double>(t.size());
  const double E = std::accumulate(t.begin(), t.end(), 0.0) / N;
  double up_worst = std::numeric_limits<double>::infinity(), lo_worst = up_worst;
  for (double lam : lambdas) {
    if (!(lam > 0)) throw JuntaError("check_concentration: lambda must be > 0");
    double up = 0, lo = 0;
    for (double v : t) {
      // Points within 1e-12 of a threshold count toward the tail.
      if (v >= (1 + lam) * E - 1e-12) up += 1;
      if (v <= (1 - lam) * E + 1e-12) lo += 1;
    }
    up /= N;
    lo /= N;
    up_worst = std::min(up_worst,
                        std::exp(-lam * lam * E / (4 + 5 * lam / 3)) - up);
    lo_worst = std::min(lo_worst, std::exp(-lam * lam * E / 4) - lo);
  }
  CheckReport rep;
  rep.check = "concentration";
  rep.rows.push_back(ineq_row("upper_tail", instance, n, up_worst, 0.0,
                              "upper tail above its bound"));
  rep.rows.push_back(ineq_row("lower_tail", instance, n, lo_worst, 0.0,
                              "lower tail above its bound"));
  const double ms = ms_since(t0);
  for (auto& r : rep.rows) r.runtime_ms = ms / 2;
  return rep;
}

// ---------------------------------------------------------------------------
// Lower bounds.

namespace {

// Binomial(m, 1/2) pmf.
std::vector<double> binom_half(int m) {
  std::vector<double> p(m + 1);
  double c = 1;
  for (int k = 0; k <= m; ++k) {
    p[k] = c * std::ldexp(1.0, -m);
    c = c * (m - k) / (k + 1);
  }
  return p;
}

// Every way to place k junta variables into b blocks of size a, as a
// non-increasing list of per-block counts (blocks are interchangeable).
void block_types(int k, int a, int b, int cap, std::vector<int>& cur,
                 std::vector<std::vector<int>>& out) {
  if (k == 0) {
    out.push_back(cur);
    return;
  }
  if (static_cast<int>(cur.size()) == b) return;
  for (int c = std::min(cap, std::min(a, k)); c >= 1; --c) {
    cur.push_back(c);
    block_types(k - c, a, b, c, cur, out);
    cur.pop_back();
  }
}

struct TribesProjection {
  std::vector<int> vars;
  std::vector<double> table;  // f_J over assignments to vars
  double error = 0;           // exact E|f - f_J|
};

// Exact projection of the tribes function (b blocks of size a, value
// max block count / a) onto the junta with `type[j]` leading variables of
// block j, and its exact l1 error.
TribesProjection tribes_projection(int a, int b, const std::vector<int>& type) {
  TribesProjection r;
  for (size_t j = 0; j < type.size(); ++j)
    for (int q = 0; q < type[j]; ++q) r.vars.push_back(static_cast<int>(j) * a + q);
  const int k = static_cast<int>(r.vars.size());
  std::vector<std::vector<double>> pmf(a + 1);
  for (int m = 0; m <= a; ++m) pmf[m] = binom_half(m);
  r.table.assign(size_t{1} << k, 0.0);
  for (Mask z = 0; z < r.table.size(); ++z) {
    // Per-block CDF of the block count given the fixed ones.
    std::vector<double> cdf_max(a + 1, 1.0);
    int pos = 0;
    for (int j = 0; j < b; ++j) {
      const int t = j < static_cast<int>(type.size()) ? type[j] : 0;
      int ones = 0;
      for (int q = 0; q < t; ++q) ones += has(z, pos + q);
      pos += t;
      const auto& p = pmf[a - t];
      double acc = 0;
      for (int v = 0; v <= a; ++v) {
        const int need = v - ones;
        if (need >= 0 && need <= a - t) acc += p[need];
        cdf_max[v] *= acc;
      }
    }
    double mean = 0;
    std::vector<double> pm(a + 1);
    for (int v = 0; v <= a; ++v) {
      pm[v] = cdf_max[v] - (v ? cdf_max[v - 1] : 0.0);
      mean += pm[v] * v / a;
    }
    r.table[z] = mean;
    double err = 0;
    for (int v = 0; v <= a; ++v) err += pm[v] * std::abs(static_cast<double>(v) / a - mean);
    r.error += err / static_cast<double>(r.table.size());
  }
  return r;
}

void finish_lower_bound(LowerBoundResult& r, const LowerBoundParams& p,
                        Clock::time_point t0) {
  const std::string inst = r.which + "_n" + std::to_string(r.n) + "_k" +
                           std::to_string(r.k);
  r.report.check = "lowerbound";
  r.report.rows.push_back(ineq_row(r.which + "_floor", inst, r.n,
                                   r.error - r.floor, kCheckTol,
                                   "error " + fmt(r.error) + " below floor " +
                                       fmt(r.floor)));
  if (p.baseline >= 0) {
    const double tol = r.sigma > 0 ? 3 * r.sigma : 1e-12;
    r.report.rows.push_back(ineq_row(r.which + "_baseline", inst, r.n,
                                     r.error - p.baseline, tol,
                                     "error " + fmt(r.error) +
                                         " below baseline " + fmt(p.baseline)));
  }
  const double ms = ms_since(t0);
  for (auto& row : r.report.rows) row.runtime_ms = ms / r.report.rows.size();
}

}  // namespace

LowerBoundResult lower_bound(const std::string& which,
                             const LowerBoundParams& p) {
  const auto t0 = Clock::now();
  LowerBoundResult r;
  r.which = which;
  auto floor_from = [&](double exact) {
    return (p.baseline >= 0 ? p.baseline : exact) / 2.0;
  };
  if (which == "linear") {
    if (p.a < 2 || p.a > 24) throw JuntaError("lower_bound linear: a in [2,24]");
    const int a = p.a, k = p.k >= 0 ? p.k : a / 2;
    if (k > a) throw JuntaError("lower_bound linear: k > a");
    r.n = a;
    r.k = k;
    // f = |x| / a is symmetric, so every k-subset is equivalent.
    for (int i = 0; i < k; ++i) r.vars.push_back(i);
    const Mask km = full_mask(k);
    const double shift = (a - k) / 2.0;
    double err = 0;
    for (Mask x = 0; x < (Mask{1} << a); ++x) {
      const double f = static_cast<double>(popcount(x)) / a;
      const double g = (popcount(x & km) + shift) / a;
      err += std::abs(f - g);
    }
    r.error = r.exact = err / std::ldexp(1.0, a);
    r.floor = floor_from(r.exact);
  } else if (which == "l2_influence") {
    if (p.n < 2 || p.n > 20)
      throw JuntaError("lower_bound l2_influence: n in [2,20]");
    const int n = p.n, k = p.k >= 0 ? p.k : n / 2;
    r.n = n;
    r.k = k;
    SetFunction f = make_family({Family::kClippedMajority, n, {}});
    const auto t = f.tabulate();
    r.infl2 = influences_table(n, t, 2.0).total;
    // Symmetric in the coordinates: the first k are as good as any.
    for (int i = 0; i < k; ++i) r.vars.push_back(i);
    const auto cell = project_table(n, t, r.vars);
    double err = 0;
    for (Mask x = 0; x < t.size(); ++x)
      err += std::abs(t[x] - cell[extract(x, r.vars)]);
    r.error = r.exact = err / static_cast<double>(t.size());
    r.floor = floor_from(r.exact);
    r.report.rows.push_back(ineq_row("l2_influence_infl2",
                                     "l2_influence_n" + std::to_string(n), n,
                                     1.0 - r.infl2, kCheckTol,
                                     "Infl2 " + fmt(r.infl2) + " > 1"));
  } else if (which == "xos") {
    if (p.a < 2 || p.a > 4) throw JuntaError("lower_bound xos: a in [2,4]");
    const int a = p.a, b = 1 << a, n = a * b;
    const int k = p.k >= 0 ? p.k : 1 << (a - 1);
    if (k > n || k > 20) throw JuntaError("lower_bound xos: k too large");
    r.n = n;
    r.k = k;
    std::vector<std::vector<int>> types;
    std::vector<int> cur;
    block_types(k, a, b, a, cur, types);
    TribesProjection best;
    best.error = std::numeric_limits<double>::infinity();
    for (const auto& ty : types) {
      TribesProjection tp = tribes_projection(a, b, ty);
      if (tp.error < best.error) best = tp;
    }
    r.vars = best.vars;
    r.exact = best.error;
    // Monte-Carlo measurement of the same junta's error.
    SetFunction f = make_family({Family::kTribesXos, n, {.a = a, .b = b}});
    RngStream rng(p.seed, 0);
    double s1 = 0, s2 = 0;
    for (size_t i = 0; i < p.samples; ++i) {
      Mask x = rng.next_u64() & full_mask(n);
      double e = std::abs(f(x) - best.table[extract(x, best.vars)]);
      s1 += e;
      s2 += e * e;
    }
    const double m = static_cast<double>(std::max<size_t>(1, p.samples));
    r.error = s1 / m;
    r.sigma = std::sqrt(std::max(0.0, s2 / m - r.error * r.error) / m);
    r.floor = floor_from(r.exact);
  } else if (which == "product_tight") {
    const int s = p.a;
    if (s < 2 || s % 2 || s > 12)
      throw JuntaError("lower_bound product_tight: s even in [2,12]");
    const int n = s + 2, k = p.k >= 0 ? p.k : s / 2;
    r.n = n;
    r.k = k;
    const double p0 = 1.0 - std::pow(0.5, 2.0 / s);
    ProductDist dist(std::vector<double>(n, p0));
    const Mask smask = full_mask(s);
    SetFunction f(
        n, [smask](Mask x) { return (x & smask) ? 1.0 : 0.0; },
        {true, true, true, true}, {0.0, 1.0});
    double best = std::numeric_limits<double>::infinity();
    for (Mask J = 0; J < (Mask{1} << n); ++J) {
      if (popcount(J) != k) continue;
      JuntaModel h;
      h.n = n;
      h.vars = vars_of(J);
      h.table = product_projection(f, dist, h.vars);
      const double e = product_sq_error(f, h, dist);
      if (e < best) {
        best = e;
        r.vars = h.vars;
      }
    }
    r.error = r.exact = best;
    r.floor = 0.125;
  } else {
    throw JuntaError("lower_bound: unknown construction '" + which + "'");
  }
  finish_lower_bound(r, p, t0);
  return r;
}

CheckReport lower_bound_suite(const std::string& which,
                              const LowerBoundParams& params) {
  return lower_bound(which, params).report;
}

// ---------------------------------------------------------------------------
// Testers.

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kYes:
      return "YES";
    case Verdict::kNo:
      return "NO";
    case Verdict::kInconclusive:
      return "INCONCLUSIVE";
  }
  return "?";
}

TesterResult test_from_examples(const ExampleSource& oracle, double eps,
                                RngStream& rng, const PacConfig& cfg) {
  TesterResult r;
  try {
    PacResult pr = pac_proper(oracle, eps, cfg, rng);
    r.I = pr.detection.I;
    r.J = pr.J;
    r.empirical_error = pr.accepted ? pr.empirical_error : pr.best_error;
    r.verdict = pr.accepted ? Verdict::kYes : Verdict::kNo;
    r.reason = pr.accepted ? "submodular hypothesis within 3eps/4"
                           : "no submodular hypothesis within 3eps/4";
  } catch (const InsufficientSamples& e) {
    r.verdict = Verdict::kInconclusive;
    r.reason = e.what();
  }
  return r;
}

TesterResult test_with_queries(const SetFunction& f, double eps,
                               RngStream& rng, const QueryTesterConfig& cfg) {
  if (!(eps > 0.0 && eps < 1.0))
    throw JuntaError("test_with_queries: eps must lie in (0,1)");
  const int n = f.n();
  TesterResult r;

  // Step 1: influential variables.
  const double s = cfg.s > 0 ? cfg.s : default_junta_size(eps);
  SampleSet det_samples;
  if (n <= 20) {
    det_samples = exhaustive_samples(f);
  } else {
    const size_t need = detection_sample_count(
        eps / (32.0 * s * s),
        static_cast<size_t>(n) + static_cast<size_t>(n) * (n - 1) / 2);
    if (need > (size_t{1} << 26)) {
      r.reason = "detection needs " + std::to_string(need) + " queries";
      return r;
    }
    det_samples = draw_samples(f, ProductDist::uniform(n), need, rng);
  }
  r.I = find_influential(det_samples, s, eps).I;

  // Step 2: shrink I further only when the exact check cannot handle it.
  std::vector<int> J = r.I;
  if (static_cast<int>(J.size()) > cfg.exact_cap) {
    const std::vector<int> I = r.I;
    const std::vector<int> rest = complement(I, n);
    if (rest.size() > 16) {
      r.reason = "projection onto I too expensive";
      return r;
    }
    SetFunction g(
        static_cast<int>(I.size()),
        [f, I, rest](Mask z) {
          const Mask base = deposit(z, I);
          double acc = 0;
          for (Mask y = 0; y < (Mask{1} << rest.size()); ++y)
            acc += f(base | deposit(y, rest));
          return acc / std::ldexp(1.0, static_cast<int>(rest.size()));
        },
        f.flags(), f.range_hint());
    const double e2 = eps / 2.0;
    try {
      SelectionTrace tr =
          select_additive(g, reduce_alpha(e2),
                          reduce_delta(static_cast<int>(I.size()), e2), {},
                          rng, /*require_flag=*/false);
      J.clear();
      for (int v : tr.joint()) J.push_back(I[v]);
    } catch (const SelectionCapExceeded&) {
      // Impossible for submodular inputs.
      r.verdict = Verdict::kNo;
      r.reason = "selection exceeded its size cap";
      return r;
    }
  }
  r.J = J;
  const int np = static_cast<int>(J.size());
  if (np > cfg.exact_cap) {
    r.reason = "reduced dimension " + std::to_string(np) + " above " +
               std::to_string(cfg.exact_cap);
    return r;
  }

  // Step 3: h~ averages f over m random completions (all of them when the
  // complement is small enough).
  const std::vector<int> rest = complement(J, n);
  const double m_real =
      std::ceil(16.0 / (eps * eps) *
                std::log(2.0 * std::ldexp(1.0, np) / 0.05));
  std::vector<Mask> ys;
  if (rest.size() < 63 && std::ldexp(1.0, static_cast<int>(rest.size())) <= m_real) {
    for (Mask y = 0; y < (Mask{1} << rest.size()); ++y)
      ys.push_back(deposit(y, rest));
  } else {
    const size_t m = static_cast<size_t>(m_real);
    for (size_t i = 0; i < m; ++i) {
      Mask y = 0;
      for (int v : rest)
        if (rng.bernoulli(0.5)) y |= bit(v);
      ys.push_back(y);
    }
  }
  const size_t cells = size_t{1} << np;
  if (static_cast<double>(cells) * ys.size() > static_cast<double>(cfg.max_table_queries)) {
    r.reason = "h~ table needs too many queries";
    return r;
  }
  std::vector<double> h(cells, 0.0);
  parallel_for(cells, [&](size_t z) {
    const Mask base = deposit(z, J);
    double acc = 0;
    for (Mask y : ys) acc += f(base | y);
    h[z] = acc / static_cast<double>(ys.size());
  });

  // Step 4: distance between f and h~.
  const size_t count = sample_size(1.0, eps / 8.0, 0.01);
  double dist = 0;
  if (n < 63 && std::ldexp(1.0, n) <= static_cast<double>(count)) {
    for (Mask x = 0; x < (Mask{1} << n); ++x)
      dist += std::abs(f(x) - h[extract(x, J)]);
    dist /= std::ldexp(1.0, n);
  } else {
    for (size_t i = 0; i < count; ++i) {
      Mask x = draw_point(ProductDist::uniform(n), rng);
      dist += std::abs(f(x) - h[extract(x, J)]);
    }
    dist /= static_cast<double>(count);
  }
  r.distance = dist;
  if (dist > 0.75 * eps) {
    r.verdict = Verdict::kNo;
    r.reason = "||f - h~||_1 above 3eps/4";
    return r;
  }

  // Step 5: exact submodularity of h~ on the reduced cube.
  if (structure_check_table(np, h).is_submodular) {
    r.verdict = Verdict::kYes;
    r.reason = "h~ is submodular and close to f";
  } else {
    r.verdict = Verdict::kNo;
    r.reason = "h~ violates submodularity";
  }
  return r;
}

double submodular_distance(const SetFunction& f, const std::vector<int>& G) {
  SampleSet s = exhaustive_samples(f);
  ProperLp lp = build_proper_lp(s, G, /*bounded=*/false);
  LpSolution sol = solve(lp.problem);
  if (sol.status != LpStatus::kOptimal)
    throw JuntaError("submodular_distance: LP " + status_name(sol.status));
  return sol.objective;
}

std::vector<FarInstance> far_corpus() {
  std::vector<FarInstance> out;
  for (int n : {4, 8, 12}) {
    for (int g = 2; g <= 4; ++g) {
      std::vector<int> G;
      for (int k = 0; k < g; ++k) G.push_back(k * n / g);
      const Mask gm = mask_of(G);
      FarInstance fi;
      fi.name = "and" + std::to_string(g) + "_n" + std::to_string(n);
      fi.G = G;
      fi.f = SetFunction(
          n, [gm](Mask x) { return (x & gm) == gm ? 1.0 : 0.0; },
          {true, false, true, false}, {0.0, 1.0});
      fi.distance = submodular_distance(fi.f, G);
      fi.eps = fi.distance / 2.0;
      out.push_back(std::move(fi));
    }
  }
  return out;
}

std::vector<PlantedTarget> planted_targets(size_t count, std::uint64_t seed) {
  std::vector<PlantedTarget> out;
  for (size_t c = 0; c < count; ++c) {
    RngStream rng(seed, c);
    const int n = 8 + 2 * static_cast<int>(rng.below(3));
    const int t = 2 + static_cast<int>(rng.below(3));
    PlantedTarget pt;
    pt.vars = random_subset(n, t, rng);
    SetFunction g;
    std::string kind;
    switch (c % 5) {
      case 0: {
        kind = "coverage";
        FamilySpec s{Family::kCoverage, t, {}};
        for (int i = 0; i < t; ++i)
          s.params.sets.push_back(random_subset(2 * t, 1 + static_cast<int>(rng.below(3)), rng));
        for (int j = 0; j < 2 * t; ++j) s.params.item_weights.push_back(uniform(rng, 0.2, 1));
        g = make_family(s);
        break;
      }
      case 1: {
        kind = "cut";
        FamilySpec s{Family::kGraphCut, t, {}};
        for (int i = 0; i < t; ++i)
          s.params.edges.push_back({i, (i + 1) % t, uniform(rng, 0.2, 1)});
        if (t == 2) s.params.edges.resize(1);
        g = make_family(s);
        break;
      }
      case 2: {
        kind = "budget";
        FamilySpec s{Family::kBudgetAdditive, t, {}};
        double sum = 0;
        for (int i = 0; i < t; ++i) {
          s.params.weights.push_back(uniform(rng, 0.2, 1));
          sum += s.params.weights.back();
        }
        s.params.budget = 0.6 * sum;
        g = make_family(s);
        break;
      }
      case 3: {
        kind = "matroid";
        FamilySpec s{Family::kMatroidRank, t, {}};
        std::vector<int> all(t);
        std::iota(all.begin(), all.end(), 0);
        s.params.blocks = {all};
        s.params.capacities = {t - 1};
        g = make_family(s);
        break;
      }
      default: {
        kind = "concave";
        std::vector<double> w;
        for (int i = 0; i < t; ++i) w.push_back(uniform(rng, 0.2, 1));
        g = concave_of_modular(t, w);
        break;
      }
    }
    g = normalize(g);
    const auto gt = g.tabulate();
    const auto vars = pt.vars;
    pt.f = SetFunction(
        n, [gt, vars](Mask x) { return gt[extract(x, vars)]; }, g.flags(),
        {0.0, 1.0});
    pt.name = "planted" + std::to_string(c) + "_" + kind + "_t" +
              std::to_string(t) + "_n" + std::to_string(n);
    out.push_back(std::move(pt));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Suites.

namespace {

double max_abs_derivative(const SetFunction& f) {
  const auto t = f.tabulate();
  double m = 0;
  for (Mask x = 0; x < t.size(); ++x)
    for (int i = 0; i < f.n(); ++i)
      if (!has(x, i)) m = std::max(m, std::abs(t[x | bit(i)] - t[x]));
  return m;
}

bool in_unit_range(const SetFunction& f) {
  Range r = f.range_hint();
  return r.lo >= -kTol && r.hi <= 1.0 + kTol;
}

// Per-instance work in parallel, merged in corpus order.
CheckReport map_corpus(
    const std::string& name, const std::vector<CorpusEntry>& corpus,
    const std::function<bool(const CorpusEntry&)>& select,
    const std::function<CheckReport(const CorpusEntry&, size_t)>& run) {
  std::vector<size_t> idx;
  for (size_t i = 0; i < corpus.size(); ++i)
    if (select(corpus[i])) idx.push_back(i);
  std::vector<CheckReport> parts(idx.size());
  parallel_for(idx.size(), [&](size_t k) { parts[k] = run(corpus[idx[k]], idx[k]); });
  CheckReport rep;
  rep.check = name;
  for (const auto& p : parts) rep.merge(p);
  rep.sort_rows();
  return rep;
}

// Fraction of z in {0,1}^{J'} with d_i f(1_z) > alpha (top) and with
// d_i f(1_{[n] minus z}) < -alpha (bottom); the larger of the two.
double excluded_fraction(const std::vector<double>& t, int n,
                         const std::vector<int>& Jp, int i, double alpha) {
  const Mask full = full_mask(n);
  size_t top = 0, bottom = 0;
  const Mask cells = Mask{1} << Jp.size();
  for (Mask z = 0; z < cells; ++z) {
    const Mask up = deposit(z, Jp);
    if (t[up | bit(i)] - t[up & ~bit(i)] > alpha) ++top;
    const Mask dn = full & ~up;
    if (t[dn | bit(i)] - t[dn & ~bit(i)] < -alpha) ++bottom;
  }
  return static_cast<double>(std::max(top, bottom)) / static_cast<double>(cells);
}

CheckReport selection_instance(const CorpusEntry& e, size_t idx) {
  CheckReport rep;
  const int n = e.f.n();
  const auto t = e.f.tabulate();
  for (double eps : {0.2, 0.4, 0.8}) {
    const auto t0 = Clock::now();
    const std::string inst = e.name + "_eps" + fmt(eps);
    RngStream rng(17, idx * 8 + static_cast<std::uint64_t>(eps * 10));
    Reduction red = reduce_once_run(e.f, eps, {}, rng);
    const double alpha = reduce_alpha(eps), delta = reduce_delta(n, eps);
    const auto Jp = red.trace.joint();
    rep.rows.push_back(ineq_row("size_bound_additive", inst, n,
                                4.0 / (alpha * delta) - Jp.size(), 0.0,
                                "|J'| = " + std::to_string(Jp.size())));
    double l2 = 0;
    for (Mask x = 0; x < t.size(); ++x) {
      const double d = t[x] - red.model.predict(x);
      l2 += d * d;
    }
    l2 = std::sqrt(l2 / static_cast<double>(t.size()));
    rep.rows.push_back(ineq_row("reduction_l2", inst, n, eps / 2 - l2, 0.0,
                                "||f - h||_2 = " + fmt(l2)));
    const double bound = std::exp2(-1.0 / (2.0 * delta));
    double worst = 0;
    for (int i : complement(Jp, n))
      worst = std::max(worst, excluded_fraction(t, n, Jp, i, alpha));
    rep.rows.push_back(ineq_row("excluded_variables", inst, n, bound - worst,
                                kCheckTol, "bad fraction " + fmt(worst)));

    // Product-distribution selection on the same instance.
    std::vector<double> marg;
    for (int i = 0; i < n; ++i) marg.push_back(0.3 + 0.2 * (i % 3));
    ProductDist dist(marg);
    const double eta = product_eta(n, eps);
    SelectionTrace pt = select_product(e.f, dist, alpha, eta, {}, rng);
    rep.rows.push_back(ineq_row("size_bound_product", inst, n,
                                4.0 / (dist.p0() * alpha * eta) -
                                    pt.joint().size(),
                                0.0,
                                "|J'| = " + std::to_string(pt.joint().size())));
    const double ms = ms_since(t0);
    for (size_t k = rep.rows.size() - 4; k < rep.rows.size(); ++k)
      rep.rows[k].runtime_ms = ms / 4;
  }
  return rep;
}

CheckReport multiplicative_instance(const CorpusEntry& e, size_t idx) {
  CheckReport rep;
  const int n = e.f.n();
  const double eps = 0.25;
  for (double gamma : {0.5, 1.0}) {
    const auto t0 = Clock::now();
    const std::string inst = e.name + "_gamma" + fmt(gamma);
    RngStream rng(23, idx * 4 + static_cast<std::uint64_t>(gamma * 2));
    const double beta = multiplicative_beta(gamma, eps);
    const double delta = multiplicative_delta(n, eps);
    SelectionTrace tr = select_multiplicative(e.f, beta, delta, {}, rng);
    rep.rows.push_back(ineq_row("size_bound_multiplicative", inst, n,
                                2.0 / (beta * delta) - tr.joint().size(), 0.0,
                                "|J'| = " + std::to_string(tr.joint().size())));
    JuntaModel h = multiplicative_junta(e.f, gamma, eps, {}, {}, rng);
    const double succ = multiplicative_success(e.f, h, gamma);
    rep.rows.push_back(ineq_row("multiplicative_success", inst, n,
                                succ - (1 - eps), 0.0,
                                "success " + fmt(succ)));
    const double ms = ms_since(t0);
    rep.rows[rep.rows.size() - 1].runtime_ms = ms / 2;
    rep.rows[rep.rows.size() - 2].runtime_ms = ms / 2;
  }
  return rep;
}

CheckReport fourier_instance(const CorpusEntry& e) {
  CheckReport rep;
  for (double eps : {0.3, 0.5}) {
    const auto t0 = Clock::now();
    FriedgutSet fs = friedgut_set(e.f, eps, 4.0 / 3.0);
    rep.rows.push_back(ineq_row("friedgut_tail", e.name + "_eps" + fmt(eps),
                                e.f.n(), eps * eps - fs.tail_mass, kCheckTol,
                                "tail mass " + fmt(fs.tail_mass) + " with |I| " +
                                    std::to_string(fs.I.size())));
    rep.rows.back().runtime_ms = ms_since(t0);
  }
  return rep;
}

CheckReport detection_instance(const CorpusEntry& e) {
  CheckReport rep;
  const int n = e.f.n();
  const SampleSet all = exhaustive_samples(e.f);
  const FourierTable ft = transform(e.f);
  for (auto [s, eps] : {std::pair{2.0, 0.2}, std::pair{4.0, 0.1}}) {
    const auto t0 = Clock::now();
    const std::string inst = e.name + "_s" + fmt(s) + "_eps" + fmt(eps);
    DetectionResult d = find_influential(all, s, eps);
    // Expected set straight from the exact spectrum.
    const double th1 = 3 * eps / (16 * s), th2 = 3 * eps / (32 * s * s);
    std::vector<int> truth;
    for (int i = 0; i < n; ++i) {
      bool keep = std::abs(ft.coeffs[bit(i)]) >= th1 - 1e-12;
      for (int j = 0; j < n && !keep; ++j)
        keep = j != i && std::abs(ft.coeffs[bit(i) | bit(j)]) >= th2 - 1e-12;
      if (keep) truth.push_back(i);
    }
    CheckRow row{"detection_set", inst, n, truth == d.I ? 0.0 : -1.0, {}, 0};
    if (truth != d.I)
      row.violations.push_back("detection_set on " + inst +
                               ": detected set differs from the exact one");
    rep.rows.push_back(row);
    rep.rows.push_back(ineq_row("detection_size", inst, n,
                                32 * s * s / eps - d.I.size(), 0.0,
                                "|I| = " + std::to_string(d.I.size())));
    const double ms = ms_since(t0);
    rep.rows[rep.rows.size() - 1].runtime_ms = ms / 2;
    rep.rows[rep.rows.size() - 2].runtime_ms = ms / 2;
  }
  return rep;
}

std::vector<double> grid(double lo, double step, int count) {
  std::vector<double> g;
  for (int k = 0; k < count; ++k) g.push_back(lo + step * k);
  return g;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"inequalities", "concentration", "boosting", "selection",
          "multiplicative", "fourier", "detection", "all"};
}

CheckReport run_suite(const std::string& suite,
                      const std::vector<CorpusEntry>& corpus) {
  if (suite == "inequalities")
    return map_corpus(
        suite, corpus, [](const CorpusEntry& e) { return e.f.n() <= 16; },
        [](const CorpusEntry& e, size_t) {
          return check_structural_inequalities(e.f, e.name);
        });
  if (suite == "concentration")
    return map_corpus(
        suite, corpus,
        [](const CorpusEntry& e) {
          return e.f.n() <= 16 && e.f.flags().submodular &&
                 e.f.flags().nonnegative && max_abs_derivative(e.f) <= 1.0 + 1e-12;
        },
        [](const CorpusEntry& e, size_t) {
          return check_concentration(e.f, grid(0.1, 0.1, 10), e.name);
        });
  if (suite == "boosting") {
    CheckReport rep;
    rep.check = suite;
    for (int k = 0; k < 100; ++k) {
      RngStream rng(31, static_cast<std::uint64_t>(k));
      const int m = 4 + static_cast<int>(rng.below(9));
      SetSystem s = random_down_closed(m, rng);
      rep.merge(check_boosting(s, grid(0.1, 0.1, 9),
                               "family" + std::to_string(k) + "_m" +
                                   std::to_string(m)));
    }
    rep.sort_rows();
    return rep;
  }
  if (suite == "selection")
    return map_corpus(
        suite, corpus,
        [](const CorpusEntry& e) {
          return e.f.n() <= 14 && e.f.flags().submodular && in_unit_range(e.f);
        },
        selection_instance);
  if (suite == "multiplicative")
    return map_corpus(
        suite, corpus,
        [](const CorpusEntry& e) {
          return e.f.n() <= 14 && e.f.flags().submodular &&
                 e.f.flags().monotone && e.f.flags().nonnegative;
        },
        multiplicative_instance);
  if (suite == "fourier")
    return map_corpus(
        suite, corpus,
        [](const CorpusEntry& e) {
          return e.f.n() <= 14 && (e.f.flags().submodular || e.f.flags().xos) &&
                 in_unit_range(e.f);
        },
        [](const CorpusEntry& e, size_t) { return fourier_instance(e); });
  if (suite == "detection")
    return map_corpus(
        suite, corpus,
        [](const CorpusEntry& e) { return e.f.n() <= 16 && in_unit_range(e.f); },
        [](const CorpusEntry& e, size_t) { return detection_instance(e); });
  if (suite == "all") {
    CheckReport rep;
    rep.check = suite;
    for (const auto& s : suite_names())
      if (s != "all") rep.merge(run_suite(s, corpus));
    return rep;
  }
  throw JuntaError("unknown suite '" + suite + "'");
}

}  // namespace juntalab
