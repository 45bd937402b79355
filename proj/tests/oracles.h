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

// Small brute-force oracles and fixtures shared by the unit tests. They are
// written directly from the definitions and do not call the library's
// transforms or solvers.

#ifndef JUNTALAB_TESTS_ORACLES_H_
#define JUNTALAB_TESTS_ORACLES_H_

#include <cmath>
#include <vector>

#include "juntalab/setfn.h"

namespace oracle {

using juntalab::Mask;

inline juntalab::SetFunction table_fn(int n, std::vector<double> t) {
  return juntalab::SetFunction::from_table(n, std::move(t));
}

inline juntalab::SetFunction or2() {
  return juntalab::SetFunction::from_table(2, {0, 1, 1, 1},
                                           {true, true, true, true});
}

inline juntalab::SetFunction and2() {
  return juntalab::SetFunction::from_table(2, {0, 0, 0, 1});
}

// f^(S) = 2^-n sum_x f(x) chi_S(x), one coefficient at a time.
inline double coeff(const juntalab::SetFunction& f, Mask S) {
  const int n = f.n();
  double s = 0;
  for (Mask x = 0; x < (Mask{1} << n); ++x) {
    int par = 0;
    for (int i = 0; i < n; ++i)
      if (((S >> i) & 1) && ((x >> i) & 1)) par ^= 1;
    s += par ? -f(x) : f(x);
  }
  return s / static_cast<double>(Mask{1} << n);
}

inline double mean(const juntalab::SetFunction& f) {
  double s = 0;
  for (Mask x = 0; x < (Mask{1} << f.n()); ++x) s += f(x);
  return s / static_cast<double>(Mask{1} << f.n());
}

// E|f - g|^p over the uniform cube.
inline double lp_dist(const juntalab::SetFunction& f,
                      const juntalab::SetFunction& g, int p) {
  double s = 0;
  for (Mask x = 0; x < (Mask{1} << f.n()); ++x)
    s += std::pow(std::abs(f(x) - g(x)), p);
  return s / static_cast<double>(Mask{1} << f.n());
}

// Cell means of f over the coordinates outside `vars`, as a function of x.
inline std::vector<double> projected(const juntalab::SetFunction& f,
                                     const std::vector<int>& vars) {
  const int n = f.n();
  Mask keep = 0;
  for (int v : vars) keep |= Mask{1} << v;
  std::vector<double> sum(Mask{1} << n, 0.0), cnt(Mask{1} << n, 0.0);
  for (Mask x = 0; x < (Mask{1} << n); ++x) {
    sum[x & keep] += f(x);
    cnt[x & keep] += 1;
  }
  std::vector<double> out(Mask{1} << n);
  for (Mask x = 0; x < (Mask{1} << n); ++x) out[x] = sum[x & keep] / cnt[x & keep];
  return out;
}

// Largest f(A∪{i,j}) + f(A) - f(A∪i) - f(A∪j) over A and pairs.
inline double max_second_derivative(int n, const std::vector<double>& t) {
  double worst = -1e300;
  for (Mask x = 0; x < (Mask{1} << n); ++x)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Mask a = x & ~(Mask{1} << i) & ~(Mask{1} << j);
        double d = t[a | (Mask{1} << i) | (Mask{1} << j)] + t[a] -
                   t[a | (Mask{1} << i)] - t[a | (Mask{1} << j)];
        worst = std::max(worst, d);
      }
  return n < 2 ? 0.0 : worst;
}

}  // namespace oracle

#endif  // JUNTALAB_TESTS_ORACLES_H_
