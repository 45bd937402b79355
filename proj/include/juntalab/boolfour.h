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

// Exact Fourier analysis on {0,1}^n with chi_S(x) = (-1)^{sum_{i in S} x_i}.

#ifndef JUNTALAB_BOOLFOUR_H_
#define JUNTALAB_BOOLFOUR_H_

#include <vector>

#include "juntalab/setfn.h"

namespace juntalab {

inline constexpr int kMaxFourierDim = 24;

struct FourierTable {
  int n = 0;
  std::vector<double> coeffs;  // index = mask of S
  bool operator==(const FourierTable&) const = default;
};

struct InfluenceReport {
  std::vector<double> per_variable;
  double total = 0.0;
  double kappa = 1.0;
};

struct FriedgutSet {
  int d = 0;
  double alpha = 0.0;
  double kappa = 4.0 / 3.0;
  double eps = 0.0;
  std::vector<int> I;
  FourierTable p_coeffs;
  double tail_mass = 0.0;
  // sum_{|S|>d} f^(S)^2 and Infl^2(f), for the degree-tail inequality.
  double degree_tail = 0.0;
  double infl2 = 0.0;
  bool success = false;
};

struct OptimalJunta {
  int size = 0;
  std::vector<int> vars;
  double error = 0.0;  // ||f - f_J||_2
};

// In-place unnormalized Walsh-Hadamard butterfly.
void walsh_hadamard(std::vector<double>& v);

FourierTable transform(const SetFunction& f);
FourierTable transform_table(int n, std::vector<double> values);
std::vector<double> inverse(const FourierTable& t);

InfluenceReport influences(const SetFunction& f, double kappa);
InfluenceReport influences_table(int n, const std::vector<double>& t,
                                 double kappa);
// Infl^2_i = sum_{S ni i} f^(S)^2.
std::vector<double> l2_influences_spectral(const FourierTable& t);

// Cell means of f over the coordinates outside vars; size 2^|vars|, cell
// index bit k = value of vars[k].
std::vector<double> project_table(int n, const std::vector<double>& t,
                                  const std::vector<int>& vars);
// f_I as a function on the same n variables.
SetFunction projection(const SetFunction& f, const std::vector<int>& I);

double mean(const SetFunction& f);
double variance(const SetFunction& f);
double norm(const SetFunction& f, int p);  // p in {1,2}; inf for p == 0
double sup_norm(const SetFunction& f);
double distance(const SetFunction& f, const SetFunction& g, int p);

FriedgutSet friedgut_set(const SetFunction& f, double eps,
                         double kappa = 4.0 / 3.0);

OptimalJunta optimal_junta(const SetFunction& f, double eps);
int optimal_junta_size(const SetFunction& f, double eps);

}  // namespace juntalab

#endif  // JUNTALAB_BOOLFOUR_H_
