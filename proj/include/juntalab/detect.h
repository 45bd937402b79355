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

// Influential-variable detection from uniform random examples.

#ifndef JUNTALAB_DETECT_H_
#define JUNTALAB_DETECT_H_

#include <vector>

#include "juntalab/estim.h"

namespace juntalab {

struct DetectionResult {
  std::vector<int> I;
  int n = 0;
  double s = 0;
  double eps = 0;
  double accuracy = 0;
  double deg1_threshold = 0;
  double deg2_threshold = 0;  // 0 for the unate variant
  // Thresholds of the sets guaranteed inside (inner) and containing (outer)
  // the output when the accuracy guarantee holds.
  double deg1_inner = 0, deg2_inner = 0;
  double deg1_outer = 0, deg2_outer = 0;
  double size_bound = 0;  // 32 s^2 / eps for the submodular variant
  std::vector<double> deg1;  // estimates of f^({i})
  std::vector<double> deg2;  // row-major n*n, estimates of f^({i,j}), i != j
  size_t samples_used = 0;
  bool exhaustive = false;
  bool unate = false;
};

class InsufficientSamples : public JuntaError {
 public:
  InsufficientSamples(const std::string& what, size_t required)
      : JuntaError(what), required(required) {}
  size_t required;
};

// Hoeffding count so that `targets` estimates of label*chi (range 2) are
// all within `accuracy` with probability >= 5/6.
size_t detection_sample_count(double accuracy, size_t targets);

// Default junta-size parameter ceil(4000/eps^2 * log2(1/eps)), at least 1.
double default_junta_size(double eps);

DetectionResult find_influential(const SampleSet& samples, double s,
                                 double eps);
DetectionResult find_influential_unate(const SampleSet& samples, double a,
                                       double eps);
// Unate detection with a caller-chosen keep threshold in place of
// 2^{-4d}/2 (accuracy threshold/2 is still Hoeffding-checked).
DetectionResult find_influential_unate_threshold(const SampleSet& samples,
                                                 double threshold);

}  // namespace juntalab

#endif  // JUNTALAB_DETECT_H_
