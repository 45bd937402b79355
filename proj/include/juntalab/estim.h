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

// Random sampling and Monte-Carlo estimation.

#ifndef JUNTALAB_ESTIM_H_
#define JUNTALAB_ESTIM_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "juntalab/setfn.h"

namespace juntalab {

// xoshiro256** seeded through splitmix64.
//
// State for (seed, stream): a splitmix64 generator is started at
// seed ^ splitmix64(stream + 0x9E3779B97F4A7C15) and its next four outputs
// become the xoshiro state. Streams with distinct ids are independent for
// all practical purposes. Doubles take the top 53 bits of a draw.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  double uniform01();
  bool bernoulli(double p) { return uniform01() < p; }
  // Uniform integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound);

  // Child stream derived from this stream's identity, not its position.
  RngStream split(std::uint64_t child) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

// Worker cap from JUNTALAB_THREADS (default: hardware concurrency).
int worker_count();
// Runs body(i) for i in [0,count) on up to worker_count() threads.
void parallel_for(size_t count, const std::function<void(size_t)>& body);

class ProductDist {
 public:
  ProductDist(std::vector<double> p);
  static ProductDist uniform(int n);

  int n() const { return static_cast<int>(p_.size()); }
  const std::vector<double>& p() const { return p_; }
  double p0() const { return p0_; }
  bool is_uniform() const;
  // Probability of point x.
  double weight(Mask x) const;

 private:
  std::vector<double> p_;
  double p0_;
};

enum class SampleSource { kUniform, kProduct, kExhaustive, kUnknown };

struct Sample {
  Mask x = 0;
  double label = 0.0;
  bool operator==(const Sample&) const = default;
};

struct SampleSet {
  int n = 0;
  SampleSource source = SampleSource::kUnknown;
  std::vector<Sample> samples;

  size_t size() const { return samples.size(); }
  bool uniform_like() const {
    return source == SampleSource::kUniform ||
           source == SampleSource::kExhaustive;
  }
  bool operator==(const SampleSet&) const = default;
};

Mask draw_point(const ProductDist& dist, RngStream& rng);
Mask draw_biased_subset(Mask S, double delta, RngStream& rng);

SampleSet draw_samples(const SetFunction& f, const ProductDist& dist,
                       size_t m, RngStream& rng);
// Every point of the cube once (n <= 24).
SampleSet exhaustive_samples(const SetFunction& f);

// Hoeffding: ceil(range^2 ln(2/delta) / (2 eps^2)).
size_t sample_size(double range_width, double eps, double delta);

double estimate_mean(const SetFunction& f, const ProductDist& dist, size_t m,
                     RngStream& rng);
double estimate_mean_eps(const SetFunction& f, const ProductDist& dist,
                         double eps, double delta, RngStream& rng);
double estimate_fourier_coeff(const SampleSet& samples, Mask S);
// F(x) = E[f(x^)] under independent rounding of x.
double estimate_multilinear(const SetFunction& f, const std::vector<double>& x,
                            size_t m, RngStream& rng);

// Uniform random labeled examples of some target. Draws must be safe to
// call concurrently with distinct RngStreams.
class ExampleSource {
 public:
  virtual ~ExampleSource() = default;
  virtual int n() const = 0;
  virtual Sample draw(RngStream& rng) const = 0;
  // All 2^n labeled points when the source can enumerate them.
  virtual std::optional<SampleSet> enumerate() const { return std::nullopt; }

  SampleSet draw_many(size_t m, RngStream& rng) const;
};

class FunctionSource : public ExampleSource {
 public:
  explicit FunctionSource(SetFunction f, int enumerate_max_n = 16);
  int n() const override { return f_.n(); }
  Sample draw(RngStream& rng) const override;
  std::optional<SampleSet> enumerate() const override;
  const SetFunction& function() const { return f_; }

 private:
  SetFunction f_;
  int enumerate_max_n_;
};

// Examples of the restriction f_z: draws from the parent until x_J = z and
// returns the remaining coordinates compacted in ascending order.
class SubcubeSource : public ExampleSource {
 public:
  SubcubeSource(std::shared_ptr<const ExampleSource> parent,
                std::vector<int> J, Mask z, size_t max_attempts);
  int n() const override { return n_; }
  Sample draw(RngStream& rng) const override;
  std::optional<SampleSet> enumerate() const override;

 private:
  std::shared_ptr<const ExampleSource> parent_;
  std::vector<int> J_;
  std::vector<int> free_;
  Mask z_;
  Mask fixed_;
  Mask jmask_;
  size_t max_attempts_;
  int n_;
};

// Labels multiplied by c and clamped to [lo, hi].
class ScaledSource : public ExampleSource {
 public:
  ScaledSource(std::shared_ptr<const ExampleSource> base, double c, double lo,
               double hi);
  int n() const override { return base_->n(); }
  Sample draw(RngStream& rng) const override;
  std::optional<SampleSet> enumerate() const override;

 private:
  double map(double v) const;
  std::shared_ptr<const ExampleSource> base_;
  double c_, lo_, hi_;
};

// Thrown when a filtered source exceeds its attempt cap.
class FilterExhausted : public JuntaError {
 public:
  using JuntaError::JuntaError;
};

}  // namespace juntalab

#endif  // JUNTALAB_ESTIM_H_
