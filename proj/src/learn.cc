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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>

namespace juntalab {

double PolynomialModel::predict(Mask x) const {
  double v = 0;
  for (const auto& [s, c] : terms) v += c * chi(s, x);
  return v;
}

double PolynomialModel::predict(const Point& p) const {
  if (p.n != n) throw JuntaError("predict: dimension mismatch");
  return predict(p.bits);
}

double PmacNode::predict(Mask x, int n) const {
  if (kind == Kind::kLeaf) return value;
  Mask z = extract(x, vars);
  std::vector<int> free = complement(vars, n);
  return children[z].predict(extract(x, free),
                             n - static_cast<int>(vars.size()));
}

double PmacTree::predict(const Point& p) const {
  if (p.n != n) throw JuntaError("predict: dimension mismatch");
  return predict(p.bits);
}

size_t pac_sample_count(int t, double eps, double delta) {
  double m = 8.0 * std::ldexp(1.0, t) / (eps * eps) *
             (t + std::log(1.0 / delta));
  return static_cast<size_t>(std::ceil(m));
}

namespace {

// Uniform examples for detection: a Hoeffding-sized random sample when
// affordable, otherwise the full cube when the oracle can enumerate it.
SampleSet detection_samples(const ExampleSource& oracle, size_t need,
                            size_t cap, RngStream& rng) {
  if (need <= cap) return oracle.draw_many(need, rng);
  if (auto all = oracle.enumerate()) return *all;
  throw InsufficientSamples("detection needs " + std::to_string(need) +
                                " examples, above the configured cap",
                            need);
}

// Calls visit(J) for each size-t subset of I in lexicographic order until
// visit returns false.
template <typename Visit>
void for_each_subset(const std::vector<int>& I, int t, const Visit& visit) {
  const int k = static_cast<int>(I.size());
  std::vector<int> idx(t);
  for (int i = 0; i < t; ++i) idx[i] = i;
  for (;;) {
    std::vector<int> J;
    for (int i : idx) J.push_back(I[i]);
    if (!visit(J)) return;
    int i = t - 1;
    while (i >= 0 && idx[i] == k - t + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < t; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Unconstrained per-cell optimum of the bounded l1 objective: the weighted
// median of each cell's labels clamped to [0,1]. Its loss lower-bounds the
// LP; when the table is submodular and every cell has samples it is an LP
// optimum itself.
struct CellMedians {
  std::vector<double> table;
  double loss = 0;
  bool complete = true;
};

CellMedians cell_medians(const SampleSet& samples, const std::vector<int>& J) {
  const size_t cells = size_t{1} << J.size();
  std::vector<std::vector<double>> lab(cells);
  for (const auto& s : samples.samples)
    lab[extract(s.x, J)].push_back(s.label);
  CellMedians r;
  r.table.assign(cells, 0.0);
  const double inv = samples.size() ? 1.0 / samples.size() : 0.0;
  for (size_t z = 0; z < cells; ++z) {
    auto& v = lab[z];
    if (v.empty()) {
      r.complete = false;
      continue;
    }
    std::sort(v.begin(), v.end());
    double med = std::clamp(v[(v.size() - 1) / 2], 0.0, 1.0);
    r.table[z] = med;
    for (double l : v) r.loss += std::abs(med - l) * inv;
  }
  return r;
}

bool submodular_table(int t, const std::vector<double>& h) {
  const Mask cells = Mask{1} << t;
  for (int i = 0; i < t; ++i)
    for (int j = i + 1; j < t; ++j)
      for (Mask z = 0; z < cells; ++z) {
        if (has(z, i) || has(z, j)) continue;
        if (h[z | bit(i) | bit(j)] + h[z] > h[z | bit(i)] + h[z | bit(j)])
          return false;
      }
  return true;
}

JuntaModel zero_model(int n) {
  JuntaModel m;
  m.n = n;
  m.table = {0.0};
  return m;
}

}  // namespace

PacResult pac_proper(const ExampleSource& oracle, double eps,
                     const PacConfig& cfg, RngStream& rng) {
  if (!(eps > 0.0 && eps < 1.0))
    throw JuntaError("pac_proper: eps must lie in (0,1)");
  const int n = oracle.n();
  PacResult res;
  const double s = cfg.s > 0 ? cfg.s : default_junta_size(eps);
  const size_t targets =
      static_cast<size_t>(n) + static_cast<size_t>(n) * (n - 1) / 2;
  SampleSet det = detection_samples(
      oracle, detection_sample_count(eps / (32.0 * s * s), targets),
      cfg.detection_sample_cap, rng);
  res.detection = find_influential(det, s, eps);
  const auto& I = res.detection.I;

  res.t = std::min<int>(cfg.t_cap, static_cast<int>(I.size()));
  res.samples_required = pac_sample_count(res.t, eps, cfg.delta);
  res.samples = std::min(res.samples_required, cfg.max_samples);
  SampleSet train = oracle.draw_many(res.samples, rng);

  res.model = zero_model(n);
  res.best = zero_model(n);
  res.best_error = kInf;
  for_each_subset(I, res.t, [&](const std::vector<int>& J) {
    if (static_cast<size_t>(res.subsets_tried) >= cfg.max_subsets) return false;
    ++res.subsets_tried;
    CellMedians med = cell_medians(train, J);
    // The LP objective is at least med.loss: skip when it cannot improve on
    // the best subset so far.
    if (med.loss >= res.best_error) {
      ++res.subsets_pruned;
      return true;
    }
    JuntaModel h;
    h.n = n;
    h.vars = J;
    double objective;
    size_t iterations = 0;
    if (med.complete && submodular_table(res.t, med.table)) {
      h.table = med.table;
      objective = med.loss;
    } else {
      ProperLp lp = build_proper_lp(train, J, true, ProperLpForm::kPiecewise);
      LpSolution sol = solve(lp.problem);
      if (sol.status != LpStatus::kOptimal) return true;
      h.table = proper_table(lp, sol);
      objective = sol.objective;
      iterations = sol.iterations;
      ++res.lp_solves;
    }
    for (double& v : h.table) v = std::clamp(v, 0.0, 1.0);
    h.provenance = {{"algorithm", "pac_proper"},
                    {"eps", eps},
                    {"empirical_error", objective},
                    {"samples", res.samples},
                    {"lp_iterations", iterations}};
    if (objective < res.best_error) {
      res.best_error = objective;
      res.best = h;
    }
    if (objective <= 0.75 * eps) {
      res.accepted = true;
      res.model = h;
      res.J = J;
      res.empirical_error = objective;
      return false;
    }
    return true;
  });
  if (!res.accepted) {
    res.model.provenance = {{"algorithm", "pac_proper"},
                            {"eps", eps},
                            {"accepted", false}};
    if (res.best_error == kInf) res.best_error = 0;
  }
  return res;
}

std::vector<Mask> low_degree_parities(const std::vector<int>& support, int d) {
  std::vector<Mask> out;
  const int k = static_cast<int>(support.size());
  for (int size = 0; size <= std::min(d, k); ++size)
    for_each_subset(support, size, [&](const std::vector<int>& S) {
      out.push_back(mask_of(S));
      return true;
    });
  return out;
}

namespace {

size_t parity_count(int k, int d) {
  // sum_{j <= d} C(k, j), saturating.
  double total = 0, c = 1;
  for (int j = 0; j <= std::min(d, k); ++j) {
    total += c;
    c = c * (k - j) / (j + 1);
  }
  return total > 1e18 ? static_cast<size_t>(1e18) : static_cast<size_t>(total);
}

}  // namespace

RegressionResult low_influence_regression(const ExampleSource& oracle,
                                          double a, double eps,
                                          const RegressionConfig& cfg,
                                          RngStream& rng) {
  if (!(a > 0.0) || !(eps > 0.0 && eps < 1.0))
    throw JuntaError("low_influence_regression: need a > 0, eps in (0,1)");
  const int n = oracle.n();
  RegressionResult res;
  const double dreal = 2.0 * a / (eps * eps);
  const double threshold =
      cfg.threshold > 0 ? cfg.threshold : std::exp2(-4.0 * dreal) / 2.0;
  SampleSet det = detection_samples(
      oracle, detection_sample_count(threshold / 2.0, n),
      cfg.detection_sample_cap, rng);
  res.detection = cfg.threshold > 0
                      ? find_influential_unate_threshold(det, cfg.threshold)
                      : find_influential_unate(det, a, eps);
  const auto& I = res.detection.I;
  int d = static_cast<int>(std::ceil(dreal));
  if (cfg.max_degree >= 0) d = std::min(d, cfg.max_degree);
  d = std::min<int>(d, static_cast<int>(I.size()));
  const size_t P = parity_count(static_cast<int>(I.size()), d);
  if (P > cfg.max_parities)
    throw JuntaError("low_influence_regression: " + std::to_string(P) +
                     " parities exceed the cap " +
                     std::to_string(cfg.max_parities) +
                     "; raise max_parities to at least " + std::to_string(P));
  std::vector<Mask> par = low_degree_parities(I, d);

  size_t m = cfg.samples ? cfg.samples
                         : static_cast<size_t>(std::ceil(4.0 * P / (eps * eps)));
  m = std::min(m, cfg.max_samples);
  SampleSet train;
  auto all = n <= 24 && m >= (size_t{1} << n) ? oracle.enumerate()
                                              : std::optional<SampleSet>();
  if (all) {
    train = std::move(*all);
    res.exhaustive = true;
  } else {
    train = oracle.draw_many(std::max<size_t>(m, 1), rng);
  }
  res.samples = train.size();

  // Normal equations with a 1e-10 ridge.
  const Eigen::Index rows = static_cast<Eigen::Index>(train.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(par.size());
  Eigen::MatrixXd phi(rows, cols);
  Eigen::VectorXd y(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Sample& s = train.samples[r];
    y(r) = s.label;
    for (Eigen::Index c = 0; c < cols; ++c) phi(r, c) = chi(par[c], s.x);
  }
  Eigen::MatrixXd G = phi.transpose() * phi / static_cast<double>(rows);
  G.diagonal().array() += 1e-10;
  Eigen::VectorXd rhs = phi.transpose() * y / static_cast<double>(rows);
  Eigen::VectorXd coef = G.ldlt().solve(rhs);
  Eigen::VectorXd resid = phi * coef - y;
  res.mean_sq_residual = resid.squaredNorm() / static_cast<double>(rows);

  res.model.n = n;
  res.model.support = I;
  res.model.degree = d;
  for (Eigen::Index c = 0; c < cols; ++c) res.model.terms[par[c]] = coef(c);
  return res;
}

AgnosticResult agnostic_l1(const SampleSet& samples, double a, double eps,
                           double W, const AgnosticConfig& cfg) {
  if (!(a > 0.0) || !(eps > 0.0 && eps < 1.0))
    throw JuntaError("agnostic_l1: need a > 0, eps in (0,1)");
  for (const auto& s : samples.samples)
    if (!(s.label >= -kTol && s.label <= 1.0 + kTol))
      throw JuntaError("agnostic_l1: labels must lie in [0,1]");
  const int n = samples.n;
  std::vector<int> support = cfg.support;
  if (support.empty()) {
    if (n <= cfg.full_support_max_n) {
      for (int i = 0; i < n; ++i) support.push_back(i);
    } else {
      support = find_influential(samples,
                                 cfg.s > 0 ? cfg.s : default_junta_size(eps),
                                 eps)
                    .I;
    }
  }
  int d = static_cast<int>(std::ceil(2.0 * a / (eps * eps)));
  if (cfg.max_degree >= 0) d = std::min(d, cfg.max_degree);
  d = std::min<int>(d, static_cast<int>(support.size()));
  const size_t P = parity_count(static_cast<int>(support.size()), d);
  if (P > cfg.max_parities)
    throw JuntaError("agnostic_l1: " + std::to_string(P) +
                     " parities exceed the cap " +
                     std::to_string(cfg.max_parities));
  std::vector<Mask> par = low_degree_parities(support, d);
  SparseL1Lp lp = build_sparse_l1_lp(samples, par, W);
  LpSolution sol = solve(lp.problem);
  AgnosticResult res;
  res.status = sol.status;
  if (sol.status != LpStatus::kOptimal)
    throw JuntaError("agnostic_l1: LP " + status_name(sol.status));
  res.objective = sol.objective;
  res.model.n = n;
  res.model.support = support;
  res.model.degree = d;
  auto coef = sparse_coeffs(lp, sol);
  for (size_t k = 0; k < par.size(); ++k)
    if (coef[k] != 0.0) res.model.terms[par[k]] = coef[k];
  return res;
}

namespace {

struct Pending {
  PmacNode* node;
  std::shared_ptr<const ExampleSource> source;
  int depth;
};

PmacNode leaf(double value, std::string reason, double mu = 0) {
  PmacNode l;
  l.kind = PmacNode::Kind::kLeaf;
  l.value = value;
  l.reason = std::move(reason);
  l.mu = mu;
  return l;
}

}  // namespace

PmacTree pmac(std::shared_ptr<const ExampleSource> oracle, double gamma,
              double eps, const PmacConfig& cfg, RngStream& rng) {
  if (!(gamma > 0.0 && gamma <= 1.0) || !(eps > 0.0 && eps < 1.0))
    throw JuntaError("pmac: need gamma in (0,1] and eps in (0,1)");
  PmacTree tree;
  tree.n = oracle->n();
  tree.gamma = gamma;
  tree.eps = eps;
  tree.xos = cfg.xos;
  const double depth_limit = 10.0 * std::log2(1.0 / eps);
  tree.depth_cap = static_cast<int>(std::ceil(depth_limit));
  const double eps1 = gamma * eps / 2400.0;
  tree.node_count = 1;

  std::deque<Pending> queue{{&tree.root, oracle, 0}};
  while (!queue.empty()) {
    Pending cur = queue.front();
    queue.pop_front();
    PmacNode& node = *cur.node;
    tree.depth = std::max(tree.depth, cur.depth);
    if (cur.depth >= depth_limit) {
      node = leaf(0, "depth");
      continue;
    }
    if (tree.learner_calls >= cfg.budget) {
      tree.budget_exhausted = true;
      node = leaf(0, "budget");
      continue;
    }
    RngStream nrng = rng.split(static_cast<std::uint64_t>(tree.learner_calls));
    SampleSet S;
    try {
      auto all = cur.source->enumerate();
      S = all ? std::move(*all) : cur.source->draw_many(cfg.node_examples, nrng);
    } catch (const FilterExhausted&) {
      node = leaf(0, "filter_cap");
      continue;
    }
    const bool exact = S.source == SampleSource::kExhaustive;
    double mean = 0;
    for (const auto& s : S.samples) mean += s.label;
    mean /= std::max<size_t>(1, S.size());
    // Exact mean satisfies E <= mu <= 6/5 E directly; a sampled mean within
    // a 1/11 relative error does after scaling by 11/10.
    const double mu = exact ? mean : 1.1 * mean;
    if (!(mu > 0.0)) {
      node = leaf(0, "zero_mean");
      continue;
    }
    const double c = 1.0 / (4.0 * mu);
    auto scaled = std::make_shared<ScaledSource>(cur.source, c, 0.0, 1.0);

    ++tree.learner_calls;
    std::vector<int> J;
    std::vector<double> g;
    try {
      if (cfg.xos) {
        RegressionResult r = low_influence_regression(*scaled, cfg.a, eps1,
                                                      cfg.regression, nrng);
        J = r.model.support;
        g.resize(size_t{1} << J.size());
        for (Mask z = 0; z < g.size(); ++z)
          g[z] = std::clamp(r.model.predict(deposit(z, J)), 0.0, 1.0);
      } else {
        PacResult r = pac_proper(*scaled, eps1, cfg.inner, nrng);
        const JuntaModel& h = r.accepted ? r.model : r.best;
        J = h.vars;
        g = h.table;
      }
    } catch (const FilterExhausted&) {
      node = leaf(0, "filter_cap");
      continue;
    }

    // Per-cell estimates of E_y |g(z) - f'(z,y)| from the node examples.
    std::vector<double> err(g.size(), 0.0);
    std::vector<size_t> cnt(g.size(), 0);
    for (const auto& s : S.samples) {
      Mask z = extract(s.x, J);
      err[z] += std::abs(g[z] - std::clamp(s.label * c, 0.0, 1.0));
      ++cnt[z];
    }
    node.kind = PmacNode::Kind::kInternal;
    node.mu = mu;
    node.vars = J;
    node.children.resize(g.size());
    for (Mask z = 0; z < g.size(); ++z) {
      PmacNode& child = node.children[z];
      ++tree.node_count;
      if (cnt[z] == 0) {
        child = leaf(0, "unvisited");
        continue;
      }
      double e = err[z] / static_cast<double>(cnt[z]);
      if (g[z] >= 1.0 / 20.0 && e <= 20.0 * eps1) {
        child = leaf(4.0 * mu * (1.0 + gamma / 60.0) * g[z], "good", mu);
        continue;
      }
      if (J.empty()) {
        child = leaf(0, "no_progress");
        continue;
      }
      queue.push_back({&child,
                       std::make_shared<SubcubeSource>(cur.source, J, z,
                                                       cfg.filter_attempts),
                       cur.depth + 1});
    }
  }
  return tree;
}

double pmac_success(const SetFunction& f, const PmacTree& h, double gamma) {
  check_dim(f.n(), 22, "pmac_success");
  if (f.n() != h.n) throw JuntaError("pmac_success: dimension mismatch");
  const Mask size = Mask{1} << f.n();
  size_t good = 0;
  for (Mask x = 0; x < size; ++x) {
    double v = f(x), p = h.predict(x);
    if (v - kTol <= p && p <= (1.0 + gamma) * v + kTol) ++good;
  }
  return static_cast<double>(good) / static_cast<double>(size);
}

}  // namespace juntalab
