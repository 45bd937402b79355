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

#include "juntalab/boolfour.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace juntalab {

void walsh_hadamard(std::vector<double>& v) {
  const size_t size = v.size();
  for (size_t len = 1; len < size; len <<= 1) {
    for (size_t i = 0; i < size; i += len << 1) {
      for (size_t j = i; j < i + len; ++j) {
        double u = v[j], w = v[j + len];
        v[j] = u + w;
        v[j + len] = u - w;
      }
    }
  }
}

FourierTable transform_table(int n, std::vector<double> values) {
  check_dim(n, kMaxFourierDim, "transform");
  if (values.size() != (size_t{1} << n))
    throw JuntaError("transform: table size mismatch");
  walsh_hadamard(values);
  const double inv = std::ldexp(1.0, -n);
  for (double& c : values) c *= inv;
  return {n, std::move(values)};
}

FourierTable transform(const SetFunction& f) {
  check_dim(f.n(), kMaxFourierDim, "transform");
  return transform_table(f.n(), f.tabulate());
}

std::vector<double> inverse(const FourierTable& t) {
  std::vector<double> v = t.coeffs;
  walsh_hadamard(v);
  return v;
}

InfluenceReport influences_table(int n, const std::vector<double>& t,
                                 double kappa) {
  if (kappa < 1.0 || kappa > 2.0)
    throw JuntaError("influences: kappa must lie in [1,2]");
  InfluenceReport r;
  r.kappa = kappa;
  r.per_variable.assign(n, 0.0);
  const Mask size = Mask{1} << n;
  const double w = n > 0 ? std::ldexp(1.0, -(n - 1)) : 0.0;
  for (int i = 0; i < n; ++i) {
    double acc = 0;
    for (Mask x = 0; x < size; ++x) {
      if (has(x, i)) continue;
      double d = std::abs(t[x | bit(i)] - t[x]) / 2.0;
      acc += kappa == 1.0 ? d : kappa == 2.0 ? d * d : std::pow(d, kappa);
    }
    r.per_variable[i] = acc * w;
    r.total += r.per_variable[i];
  }
  return r;
}

InfluenceReport influences(const SetFunction& f, double kappa) {
  check_dim(f.n(), kMaxFourierDim, "influences");
  return influences_table(f.n(), f.tabulate(), kappa);
}

std::vector<double> l2_influences_spectral(const FourierTable& t) {
  std::vector<double> out(t.n, 0.0);
  for (Mask s = 0; s < t.coeffs.size(); ++s) {
    double c2 = t.coeffs[s] * t.coeffs[s];
    for (int i : vars_of(s)) out[i] += c2;
  }
  return out;
}

std::vector<double> project_table(int n, const std::vector<double>& t,
                                  const std::vector<int>& vars) {
  for (int v : vars)
    if (v < 0 || v >= n) throw JuntaError("projection: variable out of range");
  const int k = static_cast<int>(vars.size());
  std::vector<double> cells(size_t{1} << k, 0.0);
  const Mask size = Mask{1} << n;
  for (Mask x = 0; x < size; ++x) cells[extract(x, vars)] += t[x];
  const double inv = std::ldexp(1.0, -(n - k));
  for (double& c : cells) c *= inv;
  return cells;
}

SetFunction projection(const SetFunction& f, const std::vector<int>& I) {
  check_dim(f.n(), kMaxFourierDim, "projection");
  std::vector<int> vars = I;
  std::sort(vars.begin(), vars.end());
  if (std::adjacent_find(vars.begin(), vars.end()) != vars.end())
    throw JuntaError("projection: repeated variable");
  auto cells = std::make_shared<const std::vector<double>>(
      project_table(f.n(), f.tabulate(), vars));
  return SetFunction(
      f.n(), [cells, vars](Mask x) { return (*cells)[extract(x, vars)]; },
      f.flags(), f.range_hint());
}

double mean(const SetFunction& f) {
  check_dim(f.n(), kMaxFourierDim, "mean");
  auto t = f.tabulate();
  double s = 0;
  for (double v : t) s += v;
  return s / static_cast<double>(t.size());
}

double variance(const SetFunction& f) {
  check_dim(f.n(), kMaxFourierDim, "variance");
  auto t = f.tabulate();
  double mu = 0;
  for (double v : t) mu += v;
  mu /= static_cast<double>(t.size());
  double s = 0;
  for (double v : t) s += (v - mu) * (v - mu);
  return s / static_cast<double>(t.size());
}

double norm(const SetFunction& f, int p) {
  check_dim(f.n(), kMaxFourierDim, "norm");
  auto t = f.tabulate();
  if (p == 0) return sup_norm(f);
  double s = 0;
  for (double v : t) s += p == 1 ? std::abs(v) : v * v;
  s /= static_cast<double>(t.size());
  return p == 1 ? s : std::sqrt(s);
}

double sup_norm(const SetFunction& f) {
  double m = 0;
  for (double v : f.tabulate()) m = std::max(m, std::abs(v));
  return m;
}

double distance(const SetFunction& f, const SetFunction& g, int p) {
  if (f.n() != g.n()) throw JuntaError("distance: dimension mismatch");
  if (p != 1 && p != 2) throw JuntaError("distance: p must be 1 or 2");
  check_dim(f.n(), kMaxFourierDim, "distance");
  const Mask size = Mask{1} << f.n();
  double s = 0;
  for (Mask x = 0; x < size; ++x) {
    double d = f(x) - g(x);
    s += p == 1 ? std::abs(d) : d * d;
  }
  s /= static_cast<double>(size);
  return p == 1 ? s : std::sqrt(s);
}

FriedgutSet friedgut_set(const SetFunction& f, double eps, double kappa) {
  if (!(kappa > 1.0 && kappa < 2.0))
    throw JuntaError("friedgut_set: kappa must lie in (1,2)");
  if (!(eps > 0)) throw JuntaError("friedgut_set: eps must be positive");
  check_dim(f.n(), kMaxFourierDim, "friedgut_set");
  const int n = f.n();
  auto table = f.tabulate();
  FourierTable ft = transform_table(n, table);
  InfluenceReport ik = influences_table(n, table, kappa);

  FriedgutSet r;
  r.kappa = kappa;
  r.eps = eps;
  for (Mask s = 0; s < ft.coeffs.size(); ++s)
    r.infl2 += popcount(s) * ft.coeffs[s] * ft.coeffs[s];
  r.d = std::max(1, static_cast<int>(std::ceil(2.0 * r.infl2 / (eps * eps))));
  for (Mask s = 0; s < ft.coeffs.size(); ++s)
    if (popcount(s) > r.d) r.degree_tail += ft.coeffs[s] * ft.coeffs[s];

  if (ik.total <= 0.0) {
    r.alpha = std::numeric_limits<double>::infinity();
  } else {
    double base = std::pow(kappa - 1.0, r.d - 1) * eps * eps / (2.0 * ik.total);
    r.alpha = std::pow(base, kappa / (2.0 - kappa));
  }
  Mask im = 0;
  for (int i = 0; i < n; ++i)
    if (ik.per_variable[i] > 0.0 && ik.per_variable[i] >= r.alpha) {
      r.I.push_back(i);
      im |= bit(i);
    }
  r.p_coeffs = {n, std::vector<double>(ft.coeffs.size(), 0.0)};
  for (Mask s = 0; s < ft.coeffs.size(); ++s) {
    if ((s & ~im) == 0 && popcount(s) <= r.d)
      r.p_coeffs.coeffs[s] = ft.coeffs[s];
    else
      r.tail_mass += ft.coeffs[s] * ft.coeffs[s];
  }
  r.success = r.tail_mass <= eps * eps + kTol;
  return r;
}

OptimalJunta optimal_junta(const SetFunction& f, double eps) {
  check_dim(f.n(), 12, "optimal_junta_size");
  const int n = f.n();
  auto t = f.tabulate();
  const Mask size = Mask{1} << n;
  // Subsets ordered by size, then lexicographically by sorted variable list.
  std::vector<Mask> subsets(size);
  for (Mask s = 0; s < size; ++s) subsets[s] = s;
  std::sort(subsets.begin(), subsets.end(), [](Mask a, Mask b) {
    if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
    return vars_of(a) < vars_of(b);
  });
  for (Mask s : subsets) {
    auto vars = vars_of(s);
    auto cells = project_table(n, t, vars);
    double err = 0;
    for (Mask x = 0; x < size; ++x) {
      double d = t[x] - cells[extract(x, vars)];
      err += d * d;
    }
    err = std::sqrt(err / static_cast<double>(size));
    if (err <= eps + 1e-12)
      return {static_cast<int>(vars.size()), vars, err};
  }
  throw JuntaError("optimal_junta_size: unreachable");
}

int optimal_junta_size(const SetFunction& f, double eps) {
  return optimal_junta(f, eps).size;
}

}  // namespace juntalab
