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

#include "juntalab/detect.h"

#include <algorithm>
#include <cmath>

namespace juntalab {

namespace {

constexpr double kCmpSlack = 1e-12;

void validate(const SampleSet& samples) {
  if (samples.samples.empty()) throw JuntaError("detection: no samples");
  if (!samples.uniform_like())
    throw JuntaError("detection: samples must come from the uniform "
                     "distribution");
  for (const auto& s : samples.samples)
    if (!(s.label >= -kTol && s.label <= 1.0 + kTol))
      throw JuntaError("detection: labels must lie in [0,1]");
}

void require_samples(const SampleSet& samples, double accuracy,
                     size_t targets) {
  if (samples.source == SampleSource::kExhaustive) return;
  size_t need = detection_sample_count(accuracy, targets);
  if (samples.size() < need)
    throw InsufficientSamples(
        "detection: " + std::to_string(samples.size()) +
            " samples given, accuracy requires " + std::to_string(need),
        need);
}

// One pass over the samples for all degree-1 (and optionally degree-2)
// coefficient estimates.
void estimate(const SampleSet& samples, bool pairs, DetectionResult& r) {
  const int n = samples.n;
  r.deg1.assign(n, 0.0);
  if (pairs) r.deg2.assign(static_cast<size_t>(n) * n, 0.0);
  std::vector<double> sg(n);
  for (const auto& s : samples.samples) {
    for (int i = 0; i < n; ++i) sg[i] = has(s.x, i) ? -s.label : s.label;
    for (int i = 0; i < n; ++i) r.deg1[i] += sg[i];
    if (!pairs) continue;
    for (int i = 0; i < n; ++i) {
      double si = has(s.x, i) ? -1.0 : 1.0;
      double* row = &r.deg2[static_cast<size_t>(i) * n];
      for (int j = i + 1; j < n; ++j) row[j] += si * sg[j];
    }
  }
  const double inv = 1.0 / static_cast<double>(samples.size());
  for (double& v : r.deg1) v *= inv;
  if (pairs) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double v = r.deg2[static_cast<size_t>(i) * n + j] * inv;
        r.deg2[static_cast<size_t>(i) * n + j] = v;
        r.deg2[static_cast<size_t>(j) * n + i] = v;
      }
  }
  r.samples_used = samples.size();
  r.exhaustive = samples.source == SampleSource::kExhaustive;
}

}  // namespace

size_t detection_sample_count(double accuracy, size_t targets) {
  return sample_size(2.0, accuracy,
                     (1.0 / 6.0) / static_cast<double>(std::max<size_t>(
                                       1, targets)));
}

double default_junta_size(double eps) {
  return std::max(1.0,
                  std::ceil(4000.0 / (eps * eps) * std::log2(1.0 / eps)));
}

DetectionResult find_influential(const SampleSet& samples, double s,
                                 double eps) {
  if (!(s >= 1.0)) throw JuntaError("find_influential: s must be >= 1");
  if (!(eps > 0.0 && eps < 1.0))
    throw JuntaError("find_influential: eps must lie in (0,1)");
  validate(samples);
  const int n = samples.n;
  DetectionResult r;
  r.n = n;
  r.s = s;
  r.eps = eps;
  r.accuracy = eps / (32.0 * s * s);
  r.deg1_threshold = 3.0 * eps / (16.0 * s);
  r.deg2_threshold = 3.0 * eps / (32.0 * s * s);
  r.deg1_inner = eps / (4.0 * s);
  r.deg2_inner = eps / (8.0 * s * s);
  r.deg1_outer = eps / (8.0 * s);
  r.deg2_outer = eps / (16.0 * s * s);
  r.size_bound = 32.0 * s * s / eps;
  require_samples(samples, r.accuracy,
                  static_cast<size_t>(n) + static_cast<size_t>(n) * (n - 1) / 2);
  estimate(samples, true, r);
  for (int i = 0; i < n; ++i) {
    bool keep = std::abs(r.deg1[i]) >= r.deg1_threshold - kCmpSlack;
    for (int j = 0; j < n && !keep; ++j)
      if (j != i && std::abs(r.deg2[static_cast<size_t>(i) * n + j]) >=
                        r.deg2_threshold - kCmpSlack)
        keep = true;
    if (keep) r.I.push_back(i);
  }
  return r;
}

DetectionResult find_influential_unate_threshold(const SampleSet& samples,
                                                 double threshold) {
  if (!(threshold > 0.0))
    throw JuntaError("find_influential_unate: threshold must be positive");
  validate(samples);
  DetectionResult r;
  r.unate = true;
  r.n = samples.n;
  r.deg1_threshold = threshold;
  r.accuracy = threshold / 2.0;
  r.deg1_inner = 2.0 * threshold;
  r.deg1_outer = threshold / 2.0;
  require_samples(samples, r.accuracy, static_cast<size_t>(samples.n));
  estimate(samples, false, r);
  // Estimates below the summation round-off are treated as zero; the
  // formula threshold can be far smaller than that.
  double scale = 0.0;
  for (const auto& s : samples.samples) scale = std::max(scale, std::abs(s.label));
  const double noise = 1e-12 * scale;
  for (int i = 0; i < r.n; ++i)
    if (std::abs(r.deg1[i]) > noise &&
        std::abs(r.deg1[i]) >= threshold - kCmpSlack * threshold)
      r.I.push_back(i);
  return r;
}

DetectionResult find_influential_unate(const SampleSet& samples, double a,
                                       double eps) {
  if (!(a > 0.0) || !(eps > 0.0 && eps < 1.0))
    throw JuntaError("find_influential_unate: need a > 0, eps in (0,1)");
  const double d = 2.0 * a / (eps * eps);
  const double alpha = std::exp2(-4.0 * d);
  DetectionResult r = find_influential_unate_threshold(samples, alpha / 2.0);
  r.accuracy = alpha / 4.0;
  r.deg1_inner = alpha;
  r.deg1_outer = alpha / 4.0;
  r.s = d;
  r.eps = eps;
  return r;
}

}  // namespace juntalab
