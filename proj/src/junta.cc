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

#include "juntalab/junta.h"

#include <algorithm>
#include <cmath>
#include <memory>

#include "juntalab/boolfour.h"

namespace juntalab {

namespace {

using json = nlohmann::json;

// Probabilities within this of 1/2 count as ties, which are accepted.
constexpr double kTieSlack = 1e-12;

// Table-backed copy for fast repeated evaluation when affordable.
SetFunction fast(const SetFunction& f) {
  return f.n() <= 22 ? f.materialize() : f;
}

// Pr[test(R)] for R ⊆ support with element k included independently with
// probability q[k]. test receives R as a mask over the original variables.
template <typename Test>
double criterion_prob(const std::vector<int>& support,
                      const std::vector<double>& q, const Test& test,
                      const CriterionConfig& cfg, RngStream& rng,
                      SelectionTrace& trace) {
  const int k = static_cast<int>(support.size());
  if (k <= cfg.exact_cap) {
    double p = 0;
    for (Mask r = 0; r < (Mask{1} << k); ++r) {
      double w = 1;
      for (int j = 0; j < k; ++j) w *= has(r, j) ? q[j] : 1.0 - q[j];
      if (w > 0 && test(deposit(r, support))) p += w;
    }
    return p;
  }
  trace.exact = false;
  trace.criterion_samples += cfg.samples;
  size_t hits = 0;
  for (size_t s = 0; s < cfg.samples; ++s) {
    Mask r = 0;
    for (int j = 0; j < k; ++j)
      if (rng.bernoulli(q[j])) r |= bit(support[j]);
    if (test(r)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(cfg.samples);
}

// Grows `set` by scanning candidates in ascending order, restarting at 0
// after every inclusion.
template <typename Prob>
void grow(int n, std::vector<int>& set, std::vector<double>& probs,
          double cap, const Prob& prob_of, SelectionTrace& trace,
          const char* phase) {
  for (bool added = true; added;) {
    added = false;
    Mask in = mask_of(set);
    for (int i = 0; i < n; ++i) {
      if (has(in, i)) continue;
      double p = prob_of(i);
      if (p >= 0.5 - kTieSlack) {
        set.push_back(i);
        probs.push_back(p);
        if (static_cast<double>(set.size()) > cap) {
          trace.cap_hit = true;
          throw SelectionCapExceeded(
              std::string(phase) + " phase exceeded its size cap", trace);
        }
        added = true;
        break;
      }
    }
  }
}

double clamp_log2(double arg) { return std::log2(std::max(2.0, arg)); }

void check_unit(double v, const char* name) {
  if (!(v > 0.0 && v <= 0.5))
    throw JuntaError(std::string(name) + " must lie in (0, 1/2]");
}

json trace_json(const SelectionTrace& t) {
  return {{"S", t.S},
          {"T", t.T},
          {"s_prob", t.s_prob},
          {"t_prob", t.t_prob},
          {"exact", t.exact},
          {"criterion_samples", t.criterion_samples},
          {"cap", t.cap},
          {"cap_hit", t.cap_hit}};
}

// Projection of f onto vars as a model on n variables.
JuntaModel projection_model(const SetFunction& f, const std::vector<int>& vars,
                            double eps, RngStream& rng) {
  JuntaModel m;
  m.n = f.n();
  m.vars = vars;
  if (f.n() <= 24) {
    m.table = project_table(f.n(), f.tabulate(), vars);
    return m;
  }
  if (vars.size() > 20)
    throw JuntaError("projection: too many cells to estimate");
  // Large n: per-cell Monte-Carlo means.
  const int rest = f.n() - static_cast<int>(vars.size());
  ProductDist uni = ProductDist::uniform(rest);
  m.table.resize(size_t{1} << vars.size());
  for (Mask z = 0; z < m.table.size(); ++z) {
    SetFunction g = restrict_fn(f, vars, z);
    m.table[z] =
        estimate_mean_eps(g, uni, std::max(eps / 4.0, 1e-3), 0.01, rng);
  }
  return m;
}

double l2_error(const SetFunction& f, const JuntaModel& h) {
  const Mask size = Mask{1} << f.n();
  double s = 0;
  for (Mask x = 0; x < size; ++x) {
    double d = f(x) - h.predict(x);
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(size));
}

}  // namespace

double JuntaModel::predict(const Point& p) const {
  if (p.n != n) throw JuntaError("predict: dimension mismatch");
  return predict(p.bits);
}

SetFunction JuntaModel::as_function(StructureFlags flags) const {
  auto self = std::make_shared<const JuntaModel>(*this);
  double lo = 0, hi = 0;
  if (!table.empty()) {
    auto [a, b] = std::minmax_element(table.begin(), table.end());
    lo = std::min(*a * scale, *b * scale);
    hi = std::max(*a * scale, *b * scale);
  }
  return SetFunction(
      n, [self](Mask x) { return self->predict(x); }, flags, {lo, hi});
}

std::vector<int> SelectionTrace::joint() const {
  std::vector<int> j = S;
  j.insert(j.end(), T.begin(), T.end());
  std::sort(j.begin(), j.end());
  j.erase(std::unique(j.begin(), j.end()), j.end());
  return j;
}

SelectionTrace select_additive(const SetFunction& f_in, double alpha,
                               double delta, const CriterionConfig& cfg,
                               RngStream& rng, bool require_flag) {
  if (require_flag && !f_in.flags().submodular)
    throw JuntaError("select_additive: input does not claim submodularity");
  check_unit(alpha, "alpha");
  check_unit(delta, "delta");
  SetFunction f = fast(f_in);
  const int n = f.n();
  const Mask top = full_mask(n);
  SelectionTrace tr;
  tr.alpha = alpha;
  tr.delta = delta;
  tr.cap = 2.0 / (alpha * delta);

  grow(
      n, tr.S, tr.s_prob, tr.cap,
      [&](int i) {
        std::vector<double> q(tr.S.size(), delta);
        return criterion_prob(
            tr.S, q,
            [&](Mask r) { return derivative(f, i, r) > alpha; }, cfg, rng, tr);
      },
      tr, "S");
  grow(
      n, tr.T, tr.t_prob, tr.cap,
      [&](int i) {
        std::vector<double> q(tr.T.size(), delta);
        return criterion_prob(
            tr.T, q,
            [&](Mask r) { return derivative(f, i, top & ~r) < -alpha; }, cfg,
            rng, tr);
      },
      tr, "T");
  return tr;
}

double reduce_alpha(double eps) { return eps * eps / 16.0; }

double reduce_delta(int n, double eps) {
  return 1.0 / (2.0 * clamp_log2(16.0 * n / (eps * eps)));
}

Reduction reduce_once_run(const SetFunction& f, double eps,
                          const CriterionConfig& cfg, RngStream& rng) {
  if (!(eps > 0.0 && eps <= 2.0))
    throw JuntaError("reduce_once: eps must lie in (0,2]");
  const double alpha = reduce_alpha(eps);
  const double delta = reduce_delta(f.n(), eps);
  Reduction r;
  r.trace = select_additive(f, alpha, delta, cfg, rng);
  r.model = projection_model(f, r.trace.joint(), eps, rng);
  r.model.provenance = {{"algorithm", "additive"},
                        {"eps", eps},
                        {"alpha", alpha},
                        {"delta", delta},
                        {"trace", trace_json(r.trace)}};
  if (f.n() <= 20) r.model.provenance["l2_error"] = l2_error(f, r.model);
  return r;
}

JuntaModel reduce_once(const SetFunction& f, double eps,
                       const CriterionConfig& cfg, RngStream& rng) {
  return reduce_once_run(f, eps, cfg, rng).model;
}

JuntaModel approximate_junta(const SetFunction& f, double eps,
                             const JuntaSchedule& schedule,
                             const CriterionConfig& cfg, RngStream& rng) {
  if (!f.flags().submodular)
    throw JuntaError("approximate_junta: input does not claim submodularity");
  std::vector<int> J(f.n());
  for (int i = 0; i < f.n(); ++i) J[i] = i;
  json rounds = json::array();
  // Round r works on the projection onto the current J with budget eps/2^r,
  // so the per-round errors eps/2^{r+1} sum to at most eps.
  for (int r = 0; r < schedule.max_rounds; ++r) {
    if (static_cast<int>(J.size()) <= schedule.target) break;
    if (r > 0 && f.n() > 24) break;
    SetFunction g =
        r == 0 ? f
               : SetFunction::from_table(
                     static_cast<int>(J.size()),
                     project_table(f.n(), f.tabulate(), J), f.flags(),
                     f.range_hint());
    double eps_r = std::ldexp(eps, -r);
    SelectionTrace tr = select_additive(g, reduce_alpha(eps_r),
                                        reduce_delta(g.n(), eps_r), cfg, rng);
    std::vector<int> next;
    for (int k : tr.joint()) next.push_back(J[k]);
    rounds.push_back({{"eps", eps_r},
                      {"alpha", tr.alpha},
                      {"delta", tr.delta},
                      {"size_before", J.size()},
                      {"size_after", next.size()},
                      {"cap", tr.cap}});
    double shrink = J.empty() ? 0.0
                              : 1.0 - static_cast<double>(next.size()) /
                                          static_cast<double>(J.size());
    J = std::move(next);
    if (shrink < schedule.min_shrink) break;
  }
  JuntaModel m = projection_model(f, J, eps, rng);
  m.provenance = {{"algorithm", "additive_iterated"},
                  {"eps", eps},
                  {"rounds", rounds}};
  if (f.n() <= 20) m.provenance["l2_error"] = l2_error(f, m);
  return m;
}

SelectionTrace select_multiplicative(const SetFunction& f_in, double beta,
                                     double delta, const CriterionConfig& cfg,
                                     RngStream& rng) {
  const auto& fl = f_in.flags();
  if (!fl.monotone || !fl.submodular || !fl.nonnegative)
    throw JuntaError(
        "select_multiplicative: input must claim monotone, submodular and "
        "nonnegative");
  if (!(beta > 0.0)) throw JuntaError("beta must be positive");
  check_unit(delta, "delta");
  SetFunction f = fast(f_in);
  const int n = f.n();
  const Mask top = full_mask(n);
  SelectionTrace tr;
  tr.alpha = beta;
  tr.delta = delta;
  tr.cap = 2.0 / (beta * delta);
  grow(
      n, tr.S, tr.s_prob, tr.cap,
      [&](int i) {
        std::vector<double> q(tr.S.size(), delta);
        Mask outside = top & ~mask_of(tr.S);
        return criterion_prob(
            tr.S, q,
            [&](Mask r) {
              return derivative(f, i, r) > beta * f(r | outside);
            },
            cfg, rng, tr);
      },
      tr, "S");
  return tr;
}

double multiplicative_beta(double gamma, double eps) {
  return gamma * gamma / (108.0 * clamp_log2(4.0 / eps));
}

double multiplicative_delta(int n, double eps) {
  return 1.0 / (2.0 * clamp_log2(2.0 * n / eps));
}

JuntaModel multiplicative_junta(const SetFunction& f, double gamma, double eps,
                                const MultiplicativeSchedule& schedule,
                                const CriterionConfig& cfg, RngStream& rng) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw JuntaError("multiplicative_junta: gamma must lie in (0,1]");
  if (!(eps > 0.0 && eps < 1.0))
    throw JuntaError("multiplicative_junta: eps must lie in (0,1)");
  std::vector<int> J(f.n());
  for (int i = 0; i < f.n(); ++i) J[i] = i;
  double scale = 1.0;
  json rounds = json::array();
  const int max_rounds = std::max(1, schedule.max_rounds);
  for (int r = 0; r < max_rounds; ++r) {
    double g_r = max_rounds == 1 ? gamma : std::ldexp(gamma, -(r + 2));
    double e_r = max_rounds == 1 ? eps : std::ldexp(eps, -(r + 1));
    if (r > 0 && f.n() > 24) break;
    SetFunction g =
        r == 0 ? f
               : SetFunction::from_table(
                     static_cast<int>(J.size()),
                     project_table(f.n(), f.tabulate(), J), f.flags(),
                     f.range_hint());
    double beta = multiplicative_beta(g_r, e_r);
    double delta = multiplicative_delta(g.n(), e_r);
    SelectionTrace tr = select_multiplicative(g, beta, delta, cfg, rng);
    std::vector<int> next;
    for (int k : tr.joint()) next.push_back(J[k]);
    scale *= 1.0 + g_r / 3.0;
    rounds.push_back({{"gamma", g_r},
                      {"eps", e_r},
                      {"beta", beta},
                      {"delta", delta},
                      {"size_before", J.size()},
                      {"size_after", next.size()},
                      {"cap", tr.cap}});
    double shrink = J.empty() ? 0.0
                              : 1.0 - static_cast<double>(next.size()) /
                                          static_cast<double>(J.size());
    J = std::move(next);
    if (shrink < schedule.min_shrink) break;
  }
  JuntaModel m = projection_model(f, J, eps, rng);
  m.scale = scale;
  m.provenance = {{"algorithm", "multiplicative"},
                  {"gamma", gamma},
                  {"eps", eps},
                  {"rounds", rounds}};
  if (f.n() <= 20)
    m.provenance["success"] = multiplicative_success(f, m, gamma);
  return m;
}

double multiplicative_success(const SetFunction& f, const JuntaModel& h,
                              double gamma) {
  check_dim(f.n(), 22, "multiplicative_success");
  const Mask size = Mask{1} << f.n();
  size_t good = 0;
  for (Mask x = 0; x < size; ++x) {
    double v = f(x), p = h.predict(x);
    if (v - kTol <= p && p <= (1.0 + gamma) * v + kTol) ++good;
  }
  return static_cast<double>(good) / static_cast<double>(size);
}

SelectionTrace select_product(const SetFunction& f_in, const ProductDist& dist,
                              double alpha, double eta,
                              const CriterionConfig& cfg, RngStream& rng) {
  if (!f_in.flags().submodular)
    throw JuntaError("select_product: input does not claim submodularity");
  if (dist.n() != f_in.n())
    throw JuntaError("select_product: dimension mismatch");
  if (!(dist.p0() > 0.0)) throw JuntaError("select_product: degenerate dist");
  if (!(alpha > 0.0) || !(eta > 0.0 && eta <= 1.0))
    throw JuntaError("select_product: need alpha > 0 and eta in (0,1]");
  SetFunction f = fast(f_in);
  const int n = f.n();
  const Mask top = full_mask(n);
  // D0: Pr[x_i = 0] = (1-p_i)^eta.  D1: Pr[x_i = 1] = p_i^eta.
  std::vector<double> q0(n), q1(n);
  for (int i = 0; i < n; ++i) {
    q0[i] = 1.0 - std::pow(1.0 - dist.p()[i], eta);
    q1[i] = std::pow(dist.p()[i], eta);
  }
  SelectionTrace tr;
  tr.alpha = alpha;
  tr.delta = eta;
  tr.cap = 2.0 / (dist.p0() * alpha * eta);
  auto pick = [](const std::vector<double>& q, const std::vector<int>& s) {
    std::vector<double> out;
    for (int v : s) out.push_back(q[v]);
    return out;
  };
  grow(
      n, tr.S, tr.s_prob, tr.cap,
      [&](int i) {
        return criterion_prob(
            tr.S, pick(q0, tr.S),
            [&](Mask r) { return derivative(f, i, r) > alpha; }, cfg, rng, tr);
      },
      tr, "S");
  grow(
      n, tr.T, tr.t_prob, tr.cap,
      [&](int i) {
        Mask outside = top & ~mask_of(tr.T);
        return criterion_prob(
            tr.T, pick(q1, tr.T),
            [&](Mask r) { return derivative(f, i, outside | r) < -alpha; },
            cfg, rng, tr);
      },
      tr, "T");
  return tr;
}

double product_eta(int n, double eps) {
  return 1.0 / clamp_log2(16.0 * n / (eps * eps));
}

std::vector<double> product_projection(const SetFunction& f,
                                       const ProductDist& dist,
                                       const std::vector<int>& vars) {
  check_dim(f.n(), 24, "product_projection");
  std::vector<double> num(size_t{1} << vars.size(), 0.0);
  std::vector<double> den(num.size(), 0.0);
  const Mask size = Mask{1} << f.n();
  for (Mask x = 0; x < size; ++x) {
    double w = dist.weight(x);
    Mask z = extract(x, vars);
    num[z] += w * f(x);
    den[z] += w;
  }
  for (size_t z = 0; z < num.size(); ++z) num[z] /= den[z];
  return num;
}

double product_sq_error(const SetFunction& f, const JuntaModel& h,
                        const ProductDist& dist) {
  check_dim(f.n(), 22, "product_sq_error");
  const Mask size = Mask{1} << f.n();
  double s = 0;
  for (Mask x = 0; x < size; ++x) {
    double d = f(x) - h.predict(x);
    s += dist.weight(x) * d * d;
  }
  return s;
}

JuntaModel product_junta(const SetFunction& f, const ProductDist& dist,
                         double eps, const CriterionConfig& cfg,
                         RngStream& rng) {
  const double alpha = reduce_alpha(eps);
  const double eta = product_eta(f.n(), eps);
  SelectionTrace tr = select_product(f, dist, alpha, eta, cfg, rng);
  JuntaModel m;
  m.n = f.n();
  m.vars = tr.joint();
  m.table = product_projection(f, dist, m.vars);
  m.provenance = {{"algorithm", "product"},
                  {"eps", eps},
                  {"alpha", alpha},
                  {"eta", eta},
                  {"p0", dist.p0()},
                  {"trace", trace_json(tr)}};
  if (f.n() <= 20)
    m.provenance["sq_error"] = product_sq_error(f, m, dist);
  return m;
}

JuntaModel pseudo_boolean_junta(const SetFunction& f_in, int k, double eps,
                                const CriterionConfig& cfg, RngStream& rng) {
  if (k < 1) throw JuntaError("pseudo_boolean_junta: k must be >= 1");
  if (!(eps > 0.0 && eps < 1.0))
    throw JuntaError("pseudo_boolean_junta: eps must lie in (0,1)");
  SetFunction f = fast(f_in);
  const int n = f.n();
  auto on_grid = [k](double v) {
    double s = v * k;
    return std::abs(s - std::round(s)) <= kTol * k && s > -kTol &&
           s < k + kTol;
  };
  if (n <= 22) {
    for (Mask x = 0; x < (Mask{1} << n); ++x)
      if (!on_grid(f(x)))
        throw JuntaError("pseudo_boolean_junta: value off the {0,1/k,...,1} "
                         "grid at mask " + std::to_string(x));
  } else {
    RngStream spot = rng.split(0x9b);
    for (int s = 0; s < 10000; ++s) {
      Mask x = spot.next_u64() & full_mask(n);
      if (!on_grid(f(x)))
        throw JuntaError("pseudo_boolean_junta: value off grid");
    }
  }
  const double alpha = 1.0 / (k + 1);
  const double delta = 1.0 / (2.0 * clamp_log2(2.0 * n / eps));
  SelectionTrace tr = select_additive(f, alpha, delta, cfg, rng);
  JuntaModel m;
  m.n = n;
  m.vars = tr.joint();
  const Mask rest = full_mask(n) & ~mask_of(m.vars);
  m.table.resize(size_t{1} << m.vars.size());
  for (Mask z = 0; z < m.table.size(); ++z)
    m.table[z] = f(deposit(z, m.vars) | rest);
  m.provenance = {{"algorithm", "pseudo_boolean"},
                  {"k", k},
                  {"eps", eps},
                  {"alpha", alpha},
                  {"delta", delta},
                  {"trace", trace_json(tr)}};
  if (n <= 20) {
    size_t bad = 0;
    for (Mask x = 0; x < (Mask{1} << n); ++x)
      if (std::abs(f(x) - m.predict(x)) > kTol) ++bad;
    m.provenance["disagreement"] = std::ldexp(static_cast<double>(bad), -n);
  }
  return m;
}

}  // namespace juntalab
