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

#include "juntalab/lpcore.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace juntalab {

int LpProblem::add_var(std::string name, double lower, double upper,
                       double cost) {
  if (!(lower <= upper)) throw JuntaError("LP variable with empty bounds");
  if (!std::isfinite(cost)) throw JuntaError("LP cost must be finite");
  vars.push_back({std::move(name), lower, upper, cost});
  return static_cast<int>(vars.size()) - 1;
}

int LpProblem::add_row(std::string name,
                       std::vector<std::pair<int, double>> terms, Sense sense,
                       double rhs) {
  for (const auto& [j, a] : terms)
    if (j < 0 || j >= static_cast<int>(vars.size()) || !std::isfinite(a))
      throw JuntaError("LP row references a bad column or coefficient");
  if (!std::isfinite(rhs)) throw JuntaError("LP rhs must be finite");
  rows.push_back({std::move(name), std::move(terms), sense, rhs});
  return static_cast<int>(rows.size()) - 1;
}

namespace {

std::string num(double v) {
  if (v == kInf) return "+inf";
  if (v == -kInf) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* sense_text(Sense s) {
  return s == Sense::kLe ? "<=" : s == Sense::kEq ? "=" : ">=";
}

}  // namespace

std::string LpProblem::to_text() const {
  std::ostringstream os;
  os << "minimize\n obj:";
  bool any = false;
  for (size_t j = 0; j < vars.size(); ++j)
    if (vars[j].cost != 0.0) {
      os << (any ? " + " : " ") << num(vars[j].cost) << ' ' << vars[j].name;
      any = true;
    }
  if (offset != 0.0) {
    os << (any ? " + " : " ") << num(offset);
    any = true;
  }
  if (!any) os << " 0";
  os << "\nsubject to\n";
  for (const auto& r : rows) {
    os << ' ' << r.name << ':';
    for (size_t k = 0; k < r.terms.size(); ++k)
      os << (k ? " + " : " ") << num(r.terms[k].second) << ' '
         << vars[r.terms[k].first].name;
    if (r.terms.empty()) os << " 0";
    os << ' ' << sense_text(r.sense) << ' ' << num(r.rhs) << '\n';
  }
  os << "bounds\n";
  for (const auto& v : vars)
    os << ' ' << num(v.lower) << " <= " << v.name << " <= " << num(v.upper)
       << '\n';
  os << "end\n";
  return os.str();
}

std::string status_name(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration-limit";
  }
  return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;

// How an original variable maps onto nonnegative standard-form columns:
// x = offset + sign * y[col] (- y[col2] when free).
struct ColMap {
  int col = -1;
  int col2 = -1;
  double offset = 0.0;
  double sign = 1.0;
};

// Dense tableau over standard form  A y = b, y >= 0, b >= 0.
class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), n_(cols), a_(rows * (cols + 1)) {}

  double& at(int r, int c) { return a_[static_cast<size_t>(r) * (n_ + 1) + c]; }
  double& rhs(int r) { return at(r, n_); }
  int rows() const { return m_; }
  int cols() const { return n_; }

  void pivot(int pr, int pc, std::vector<double>& d, double& dval) {
    double* prow = &at(pr, 0);
    const double inv = 1.0 / prow[pc];
    for (int c = 0; c <= n_; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (int r = 0; r < m_; ++r) {
      if (r == pr) continue;
      double* row = &at(r, 0);
      const double f = row[pc];
      if (f == 0.0) continue;
      for (int c = 0; c <= n_; ++c)
        if (prow[c] != 0.0) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
    const double f = d[pc];
    if (f != 0.0) {
      for (int c = 0; c < n_; ++c)
        if (prow[c] != 0.0) d[c] -= f * prow[c];
      dval -= f * prow[n_];
      d[pc] = 0.0;
    }
  }

 private:
  int m_, n_;
  std::vector<double> a_;
};

// Bounded-variable primal simplex. Column c lives in [0, upper[c]];
// nonbasic columns sit at 0 or at their upper bound, basic values are kept
// in `value` (the tableau rhs column is not used after setup).
struct State {
  Tableau& t;
  std::vector<int>& basis;
  std::vector<double>& upper;
  std::vector<char> at_upper;
  std::vector<double> value;  // per row: value of the basic column
};

struct Phase {
  LpStatus status;
  size_t iterations;
};

void step_pivot(State& st, int pr, int pc, std::vector<double>& d) {
  double dummy = 0.0;
  st.t.pivot(pr, pc, d, dummy);
  st.basis[pr] = pc;
}

// Minimizes with reduced costs d. Columns with allowed[c] == false never
// enter.
Phase run_simplex(State& st, std::vector<double>& d,
                  const std::vector<char>& allowed, const SimplexOptions& opt,
                  size_t budget) {
  Tableau& t = st.t;
  std::vector<char> basic(t.cols(), 0);
  for (int b : st.basis)
    if (b >= 0) basic[b] = 1;
  size_t it = 0, degenerate = 0;
  bool bland = false;
  for (;; ++it) {
    if (it >= budget) return {LpStatus::kIterationLimit, it};
    int pc = -1;
    double best = kCostTol;
    for (int c = 0; c < t.cols(); ++c) {
      if (!allowed[c] || basic[c]) continue;
      // Improvement rate when moving off the current bound.
      double gain = st.at_upper[c] ? d[c] : -d[c];
      if (gain <= kCostTol) continue;
      if (bland) {
        pc = c;
        break;
      }
      if (gain > best) {
        best = gain;
        pc = c;
      }
    }
    if (pc < 0) return {LpStatus::kOptimal, it};
    const double dir = st.at_upper[pc] ? -1.0 : 1.0;
    // Basic r changes by -dir * a_rc per unit step.
    int pr = -1;
    bool leave_upper = false;
    double ratio = st.upper[pc];
    for (int r = 0; r < t.rows(); ++r) {
      const double a = dir * t.at(r, pc);
      double q;
      bool to_upper;
      if (a > kPivotTol) {
        q = std::max(0.0, st.value[r]) / a;
        to_upper = false;
      } else if (a < -kPivotTol && std::isfinite(st.upper[st.basis[r]])) {
        q = std::max(0.0, st.upper[st.basis[r]] - st.value[r]) / -a;
        to_upper = true;
      } else {
        continue;
      }
      if (q < ratio - 1e-12 ||
          (q <= ratio + 1e-12 && pr >= 0 && st.basis[r] < st.basis[pr])) {
        ratio = std::min(ratio, q);
        pr = r;
        leave_upper = to_upper;
      }
    }
    if (pr < 0 && !std::isfinite(ratio)) return {LpStatus::kUnbounded, it};
    if (ratio <= 1e-12) {
      if (++degenerate >= opt.degenerate_switch) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
    for (int r = 0; r < t.rows(); ++r)
      st.value[r] -= dir * ratio * t.at(r, pc);
    if (pr < 0) {
      // Bound flip: the entering column reaches its other bound.
      st.at_upper[pc] = !st.at_upper[pc];
      continue;
    }
    const double entering = st.at_upper[pc] ? st.upper[pc] - ratio : ratio;
    const int leaving = st.basis[pr];
    st.at_upper[pc] = 0;
    step_pivot(st, pr, pc, d);
    st.value[pr] = entering;
    basic[leaving] = 0;
    basic[pc] = 1;
    st.at_upper[leaving] = leave_upper;
  }
}

}  // namespace

LpSolution solve(const LpProblem& p, const SimplexOptions& opt) {
  // Standard form: map variables onto bounded nonnegative columns.
  std::vector<ColMap> map(p.vars.size());
  std::vector<double> upper;
  for (size_t j = 0; j < p.vars.size(); ++j) {
    const auto& v = p.vars[j];
    ColMap& cm = map[j];
    const int c = static_cast<int>(upper.size());
    if (std::isfinite(v.lower)) {
      cm = {c, -1, v.lower, 1.0};
      upper.push_back(v.upper - v.lower);
    } else if (std::isfinite(v.upper)) {
      cm = {c, -1, v.upper, -1.0};
      upper.push_back(kInf);
    } else {
      cm = {c, c + 1, 0.0, 1.0};
      upper.push_back(kInf);
      upper.push_back(kInf);
    }
  }
  const int ncols = static_cast<int>(upper.size());
  struct StdRow {
    std::vector<std::pair<int, double>> terms;
    Sense sense;
    double rhs;
  };
  std::vector<StdRow> srows;
  for (const auto& r : p.rows) {
    StdRow s{{}, r.sense, r.rhs};
    std::map<int, double> acc;
    for (const auto& [j, a] : r.terms) {
      const ColMap& cm = map[j];
      s.rhs -= a * cm.offset;
      acc[cm.col] += a * cm.sign;
      if (cm.col2 >= 0) acc[cm.col2] -= a;
    }
    for (auto& [c, a] : acc)
      if (a != 0.0) s.terms.push_back({c, a});
    srows.push_back(std::move(s));
  }

  const int m = static_cast<int>(srows.size());
  int nslack = 0;
  for (const auto& r : srows)
    if (r.sense != Sense::kEq) ++nslack;
  // Columns: structural | slack | artificial (one per row, used if needed).
  const int slack0 = ncols, art0 = ncols + nslack, total = art0 + m;
  upper.resize(total, kInf);
  Tableau t(m, total);
  std::vector<int> basis(m, -1);
  std::vector<char> is_art(total, 0);
  int sc = slack0;
  for (int r = 0; r < m; ++r) {
    const auto& row = srows[r];
    double sign = row.rhs < 0 ? -1.0 : 1.0;
    for (const auto& [c, a] : row.terms) t.at(r, c) = sign * a;
    t.rhs(r) = sign * row.rhs;
    if (row.sense != Sense::kEq) {
      double coef = (row.sense == Sense::kLe ? 1.0 : -1.0) * sign;
      t.at(r, sc) = coef;
      if (coef > 0) basis[r] = sc;
      ++sc;
    }
    if (basis[r] < 0) {
      t.at(r, art0 + r) = 1.0;
      basis[r] = art0 + r;
      is_art[art0 + r] = 1;
    }
  }
  State st{t, basis, upper, std::vector<char>(total, 0),
           std::vector<double>(m, 0.0)};
  for (int r = 0; r < m; ++r) st.value[r] = t.rhs(r);

  LpSolution sol;
  std::vector<char> allowed(total, 1);
  for (int c = art0; c < total; ++c) allowed[c] = 0;

  // Phase 1: minimize the sum of basic artificials.
  bool need_phase1 = false;
  for (int r = 0; r < m; ++r) need_phase1 |= is_art[basis[r]] != 0;
  if (need_phase1) {
    std::vector<double> d(total, 0.0);
    for (int r = 0; r < m; ++r) {
      if (!is_art[basis[r]]) continue;
      for (int c = 0; c < total; ++c) d[c] -= t.at(r, c);
      d[basis[r]] = 0.0;
    }
    Phase ph = run_simplex(st, d, allowed, opt, opt.max_iterations);
    sol.iterations += ph.iterations;
    if (ph.status == LpStatus::kIterationLimit) {
      sol.status = ph.status;
      return sol;
    }
    double infeas = 0.0;
    for (int r = 0; r < m; ++r)
      if (is_art[basis[r]]) infeas += std::max(0.0, st.value[r]);
    if (infeas > 1e-7) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis.
    for (int r = 0; r < m; ++r) {
      if (!is_art[basis[r]]) continue;
      int pc = -1;
      for (int c = 0; c < art0; ++c) {
        bool nonbasic = std::find(basis.begin(), basis.end(), c) == basis.end();
        if (nonbasic && std::abs(t.at(r, c)) > kPivotTol) {
          pc = c;
          break;
        }
      }
      if (pc >= 0) {
        const double v = st.at_upper[pc] ? upper[pc] : 0.0;
        st.at_upper[pc] = 0;
        step_pivot(st, r, pc, d);
        st.value[r] = v;
      } else {
        // Redundant row: clear it so it never constrains phase 2.
        for (int c = 0; c <= total; ++c) t.at(r, c) = 0.0;
        t.at(r, basis[r]) = 1.0;
        st.value[r] = 0.0;
      }
    }
  }

  // Phase 2 on the original costs.
  std::vector<double> cost(total, 0.0);
  for (size_t j = 0; j < p.vars.size(); ++j) {
    const ColMap& cm = map[j];
    const double c = p.vars[j].cost;
    cost[cm.col] += c * cm.sign;
    if (cm.col2 >= 0) cost[cm.col2] -= c;
  }
  std::vector<double> d = cost;
  for (int r = 0; r < m; ++r) {
    double cb = cost[basis[r]];
    if (cb == 0.0) continue;
    for (int c = 0; c < total; ++c) d[c] -= cb * t.at(r, c);
  }
  Phase ph = run_simplex(st, d, allowed, opt,
                         opt.max_iterations - std::min(opt.max_iterations,
                                                       sol.iterations));
  sol.iterations += ph.iterations;
  sol.status = ph.status;

  std::vector<double> y(total, 0.0);
  for (int c = 0; c < total; ++c)
    if (st.at_upper[c]) y[c] = upper[c];
  for (int r = 0; r < m; ++r)
    if (basis[r] >= 0) y[basis[r]] = std::clamp(st.value[r], 0.0, upper[basis[r]]);
  sol.x.resize(p.vars.size());
  for (size_t j = 0; j < p.vars.size(); ++j) {
    const ColMap& cm = map[j];
    double v = cm.offset + cm.sign * y[cm.col];
    if (cm.col2 >= 0) v -= y[cm.col2];
    sol.x[j] = v;
  }
  sol.objective = p.offset;
  for (size_t j = 0; j < p.vars.size(); ++j)
    sol.objective += p.vars[j].cost * sol.x[j];
  return sol;
}

RecheckResult recheck(const LpProblem& p, const std::vector<double>& x,
                      double tol) {
  RecheckResult r;
  r.objective = p.offset;
  if (x.size() != p.vars.size()) {
    r.worst = "assignment size mismatch";
    r.max_violation = kInf;
    return r;
  }
  auto note = [&](double v, const std::string& what) {
    if (v > r.max_violation) {
      r.max_violation = v;
      r.worst = what;
    }
  };
  for (size_t j = 0; j < x.size(); ++j) {
    note(p.vars[j].lower - x[j], "lower bound of " + p.vars[j].name);
    note(x[j] - p.vars[j].upper, "upper bound of " + p.vars[j].name);
    r.objective += p.vars[j].cost * x[j];
  }
  for (const auto& row : p.rows) {
    long double lhs = 0;
    for (const auto& [j, a] : row.terms) lhs += static_cast<long double>(a) * x[j];
    double diff = static_cast<double>(lhs - row.rhs);
    switch (row.sense) {
      case Sense::kLe:
        note(diff, row.name);
        break;
      case Sense::kGe:
        note(-diff, row.name);
        break;
      case Sense::kEq:
        note(std::abs(diff), row.name);
        break;
    }
  }
  r.ok = r.max_violation <= tol;
  return r;
}

size_t submodularity_constraint_count(int t) {
  if (t < 2) return 0;
  return static_cast<size_t>(t) * (t - 1) / 2 * (size_t{1} << (t - 2));
}

namespace {

// (cell, label) -> multiplicity, in a deterministic order.
std::map<std::pair<Mask, double>, size_t> group_samples(
    const SampleSet& samples, const std::vector<int>& vars) {
  std::map<std::pair<Mask, double>, size_t> g;
  for (const auto& s : samples.samples) {
    if (!std::isfinite(s.label)) throw JuntaError("LP: non-finite label");
    ++g[{extract(s.x, vars), s.label}];
  }
  return g;
}

}  // namespace

namespace {

// Column for one linear piece of a cell's loss.
int piece(LpProblem& p, Mask z, int k, double len, double slope) {
  return p.add_var("h" + std::to_string(z) + "_" + std::to_string(k), 0.0,
                   len, slope);
}

}  // namespace

ProperLp build_proper_lp(const SampleSet& samples, const std::vector<int>& J,
                         bool bounded, ProperLpForm form) {
  const int t = static_cast<int>(J.size());
  if (t > 12) throw JuntaError("build_proper_lp: |J| must be <= 12");
  for (int v : J)
    if (v < 0 || v >= samples.n)
      throw JuntaError("build_proper_lp: J out of range");
  ProperLp lp;
  lp.J = J;
  lp.samples = samples.size();
  LpProblem& p = lp.problem;
  const Mask cells = Mask{1} << t;
  auto groups = group_samples(samples, J);
  lp.groups = groups.size();
  const double inv = samples.size() ? 1.0 / samples.size() : 0.0;
  std::vector<std::vector<std::pair<double, double>>> per(cells);
  for (const auto& [key, count] : groups)
    per[key.first].push_back({key.second, inv * count});
  lp.cells.resize(cells);
  const double lo = bounded ? 0.0 : -kInf, hi = bounded ? 1.0 : kInf;
  if (form == ProperLpForm::kSlack) {
    for (Mask z = 0; z < cells; ++z)
      lp.cells[z].terms.push_back(
          {p.add_var("h_" + std::to_string(z), lo, hi, 0.0), 1.0});
    size_t g = 0;
    for (const auto& [key, count] : groups) {
      const auto& [z, label] = key;
      int sl = p.add_var("s_" + std::to_string(g), 0.0, kInf, inv * count);
      int h = lp.cells[z].terms[0].first;
      p.add_row("up_" + std::to_string(g), {{sl, 1.0}, {h, -1.0}}, Sense::kGe,
                -label);
      p.add_row("dn_" + std::to_string(g), {{sl, 1.0}, {h, 1.0}}, Sense::kGe,
                label);
      ++g;
    }
  }
  for (Mask z = 0; z < cells && form == ProperLpForm::kPiecewise; ++z) {
    const auto& pts = per[z];  // sorted by label
    CellExpr& e = lp.cells[z];
    if (pts.empty()) {
      if (bounded) {
        e.terms.push_back({piece(p, z, 0, 1.0, 0.0), 1.0});
      } else {
        e.terms.push_back(
            {p.add_var("h" + std::to_string(z) + "_up", 0.0, kInf, 0.0), 1.0});
        e.terms.push_back(
            {p.add_var("h" + std::to_string(z) + "_dn", 0.0, kInf, 0.0), -1.0});
      }
      continue;
    }
    double W = 0;
    for (const auto& [l, w] : pts) W += w;
    // Breakpoints: the domain ends plus labels strictly inside.
    std::vector<double> bp;
    bp.push_back(bounded ? lo : pts.front().first);
    for (const auto& [l, w] : pts)
      if (l > bp.front() && (!bounded || l < hi)) bp.push_back(l);
    if (bounded) bp.push_back(hi);
    e.base = bp.front();
    for (const auto& [l, w] : pts) p.offset += w * std::abs(e.base - l);
    // Slope on (bp[k], bp[k+1]): weight at or below minus weight above.
    int k = 0;
    for (size_t q = 0; q + 1 < bp.size(); ++q, ++k) {
      const double mid = 0.5 * (bp[q] + bp[q + 1]);
      double slope = 0;
      for (const auto& [l, w] : pts) slope += l < mid ? w : -w;
      e.terms.push_back({piece(p, z, k, bp[q + 1] - bp[q], slope), 1.0});
    }
    if (!bounded) {
      // Unbounded tails: above the top label and below the bottom one.
      e.terms.push_back(
          {p.add_var("h" + std::to_string(z) + "_up", 0.0, kInf, W), 1.0});
      e.terms.push_back(
          {p.add_var("h" + std::to_string(z) + "_dn", 0.0, kInf, W), -1.0});
    }
  }
  auto expand = [&](Mask z, double sgn,
                    std::vector<std::pair<int, double>>& terms, double& rhs) {
    const CellExpr& e = lp.cells[z];
    rhs -= sgn * e.base;
    for (const auto& [c, a] : e.terms) terms.push_back({c, sgn * a});
  };
  // h(z11) + h(z00) <= h(z10) + h(z01) for every pair and setting of the rest.
  for (int i = 0; i < t; ++i)
    for (int j = i + 1; j < t; ++j)
      for (Mask z = 0; z < cells; ++z) {
        if (has(z, i) || has(z, j)) continue;
        std::vector<std::pair<int, double>> terms;
        double rhs = 0.0;
        expand(z | bit(i) | bit(j), 1.0, terms, rhs);
        expand(z, 1.0, terms, rhs);
        expand(z | bit(i), -1.0, terms, rhs);
        expand(z | bit(j), -1.0, terms, rhs);
        p.add_row("sub_" + std::to_string(i) + "_" + std::to_string(j) + "_" +
                      std::to_string(z),
                  std::move(terms), Sense::kLe, rhs);
        ++lp.submodularity_rows;
      }
  return lp;
}

std::vector<double> proper_table(const ProperLp& lp, const LpSolution& sol) {
  std::vector<double> t;
  for (const CellExpr& e : lp.cells) {
    double v = e.base;
    for (const auto& [c, a] : e.terms) v += a * sol.x.at(c);
    t.push_back(v);
  }
  return t;
}

SparseL1Lp build_sparse_l1_lp(const SampleSet& samples,
                              const std::vector<Mask>& parities, double W) {
  if (!(W > 0.0)) throw JuntaError("build_sparse_l1_lp: W must be positive");
  SparseL1Lp lp;
  lp.parities = parities;
  LpProblem& p = lp.problem;
  for (Mask s : parities) {
    if (s & ~full_mask(samples.n))
      throw JuntaError("build_sparse_l1_lp: parity outside the cube");
    lp.pos_var.push_back(p.add_var("ap_" + std::to_string(s), 0.0, kInf, 0.0));
    lp.neg_var.push_back(p.add_var("an_" + std::to_string(s), 0.0, kInf, 0.0));
  }
  std::map<std::pair<Mask, double>, size_t> groups;
  for (const auto& s : samples.samples) ++groups[{s.x, s.label}];
  lp.groups = groups.size();
  const double inv = samples.size() ? 1.0 / samples.size() : 0.0;
  size_t g = 0;
  for (const auto& [key, count] : groups) {
    const auto& [x, label] = key;
    int s = p.add_var("s_" + std::to_string(g), 0.0, kInf, inv * count);
    std::vector<std::pair<int, double>> up{{s, 1.0}}, dn{{s, 1.0}};
    for (size_t k = 0; k < parities.size(); ++k) {
      double c = chi(parities[k], x);
      up.push_back({lp.pos_var[k], -c});
      up.push_back({lp.neg_var[k], c});
      dn.push_back({lp.pos_var[k], c});
      dn.push_back({lp.neg_var[k], -c});
    }
    p.add_row("up_" + std::to_string(g), std::move(up), Sense::kGe, -label);
    p.add_row("dn_" + std::to_string(g), std::move(dn), Sense::kGe, label);
    ++g;
  }
  std::vector<std::pair<int, double>> ball;
  for (size_t k = 0; k < parities.size(); ++k) {
    ball.push_back({lp.pos_var[k], 1.0});
    ball.push_back({lp.neg_var[k], 1.0});
  }
  p.add_row("l1_ball", std::move(ball), Sense::kLe, W);
  return lp;
}

std::vector<double> sparse_coeffs(const SparseL1Lp& lp, const LpSolution& sol) {
  std::vector<double> a;
  for (size_t k = 0; k < lp.parities.size(); ++k)
    a.push_back(sol.x.at(lp.pos_var[k]) - sol.x.at(lp.neg_var[k]));
  return a;
}

}  // namespace juntalab
