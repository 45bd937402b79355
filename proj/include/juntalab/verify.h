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

// Exact property checks (structural inequalities, boosting monotonicity,
// tail bounds), lower-bound constructions, the submodularity testers and
// the built-in instance corpora.

#ifndef JUNTALAB_VERIFY_H_
#define JUNTALAB_VERIFY_H_

#include <string>
#include <vector>

#include "juntalab/learn.h"
#include "juntalab/setfn.h"

namespace juntalab {

struct CheckRow {
  std::string check;
  std::string instance;
  int n = 0;
  double slack = 0;  // margin by which the inequality held (< 0: violated)
  std::vector<std::string> violations;
  double runtime_ms = 0;
};

struct CheckReport {
  std::string check;
  std::vector<CheckRow> rows;
  std::vector<std::string> notes;  // skipped sub-checks and why

  size_t instances() const;
  // Worst (smallest) slack over all rows; +inf when empty.
  double slack() const;
  std::vector<std::string> violations() const;
  bool pass() const { return violations().empty(); }
  void merge(const CheckReport& other);
  // Rows sorted by (instance, check) for deterministic output.
  void sort_rows();
};

struct CorpusEntry {
  std::string name;
  SetFunction f;
};

// All families at each n in dims, rescaled to [0,1], plus unscaled
// 1-Lipschitz instances (names prefixed "raw_"). Deterministic.
std::vector<CorpusEntry> builtin_corpus(const std::vector<int>& dims = {4, 8,
                                                                        12, 16});

// Affine rescale of a tabulated function onto [0,1]: f / max when f >= 0,
// otherwise (f - min) / (max - min).
SetFunction normalize(const SetFunction& f);

// Inequalities checked exactly (n <= 16): influence vs l1 norm, variance vs
// Lipschitz constant times mean, l1 vs sup norm, the degree-d Fourier tail
// for every d, and the degree-2 coefficient identity for submodular f.
CheckReport check_structural_inequalities(const SetFunction& f,
                                          const std::string& instance = "f");

// Down-monotone family on m <= 16 elements as a 2^m indicator.
struct SetSystem {
  int m = 0;
  std::vector<char> member;
};

bool is_down_monotone(const SetSystem& s);
// Down-closure of a few random generator sets.
SetSystem random_down_closed(int m, RngStream& rng);
// Exact sigma_p = Pr[random p-biased set lies in the family].
double boosting_sigma(const SetSystem& s, double p);
// phi(p) = ln sigma_p / ln(1-p) must be non-decreasing along p_grid.
CheckReport check_boosting(const SetSystem& s,
                           const std::vector<double>& p_grid,
                           const std::string& instance = "family");

// Exact upper and lower tails of f(x) for uniform x against the submodular
// Chernoff bounds. Rejects f with a derivative outside [-1,1].
CheckReport check_concentration(const SetFunction& f,
                                const std::vector<double>& lambda_grid,
                                const std::string& instance = "f");

struct LowerBoundParams {
  int a = 4;          // linear: variables; xos: block size; product: s
  int n = 16;         // l2_influence: dimension
  int k = -1;         // junta size; -1 picks the stated default
  size_t samples = 1000000;
  double baseline = -1;  // stored regression value; < 0 skips the check
  std::uint64_t seed = 1;
};

struct LowerBoundResult {
  std::string which;
  int n = 0;
  int k = 0;
  double error = 0;        // measured best-junta error
  double exact = -1;       // exact value where computed
  double sigma = 0;        // standard error of a sampled measurement
  double floor = 0;        // asserted floor
  double infl2 = -1;       // l2_influence only
  std::vector<int> vars;   // junta achieving the error
  CheckReport report;
};

// which: linear | xos | l2_influence | product_tight.
LowerBoundResult lower_bound(const std::string& which,
                             const LowerBoundParams& params);
CheckReport lower_bound_suite(const std::string& which,
                              const LowerBoundParams& params);

enum class Verdict { kYes, kNo, kInconclusive };
std::string verdict_name(Verdict v);

struct TesterResult {
  Verdict verdict = Verdict::kInconclusive;
  std::string reason;
  std::vector<int> I;  // detected variables
  std::vector<int> J;  // variables kept for h~
  double distance = 0;  // estimated ||f - h~||_1 (query tester)
  double empirical_error = 0;  // LP objective (example tester)
};

TesterResult test_from_examples(const ExampleSource& oracle, double eps,
                                RngStream& rng, const PacConfig& cfg = {});

struct QueryTesterConfig {
  double s = 0;           // detection size parameter; 0 picks the default
  int exact_cap = 20;     // largest n' handled by the exact final check
  size_t max_table_queries = size_t{1} << 28;
};

TesterResult test_with_queries(const SetFunction& f, double eps,
                               RngStream& rng,
                               const QueryTesterConfig& cfg = {});

// AND of the variables in G embedded in n coordinates, with its exact l1
// distance to the submodular functions and the testing eps = distance / 2.
struct FarInstance {
  std::string name;
  SetFunction f;
  std::vector<int> G;
  double distance = 0;
  double eps = 0;
};

// l1 distance of a G-junta to the submodular cone, from the unbounded
// proper LP on exhaustive samples of the gadget variables.
double submodular_distance(const SetFunction& f, const std::vector<int>& G);
std::vector<FarInstance> far_corpus();

// Random submodular targets depending on t <= 4 of n <= 12 variables,
// rescaled to [0,1]. The relevant variables are returned in `vars`.
struct PlantedTarget {
  std::string name;
  SetFunction f;
  std::vector<int> vars;
};
std::vector<PlantedTarget> planted_targets(size_t count, std::uint64_t seed);

// Named suites over a corpus: inequalities, concentration, boosting,
// selection, multiplicative, fourier, detection, all.
std::vector<std::string> suite_names();
CheckReport run_suite(const std::string& suite,
                      const std::vector<CorpusEntry>& corpus);

}  // namespace juntalab

#endif  // JUNTALAB_VERIFY_H_
