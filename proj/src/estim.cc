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

#include "juntalab/estim.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace juntalab {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr size_t kChunk = 4096;

// Pairwise sum keeps drift independent of the number of chunks.
double pairwise_sum(const std::vector<double>& v, size_t lo, size_t hi) {
  if (hi - lo <= 8) {
    double s = 0;
    for (size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += kGolden);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
  std::uint64_t t = stream + kGolden;
  std::uint64_t sm = seed ^ splitmix64(t);
  for (auto& s : s_) s = splitmix64(sm);
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::below(std::uint64_t bound) {
  if (bound == 0) throw JuntaError("RngStream::below: zero bound");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t v;
  do v = next_u64();
  while (v >= limit);
  return v % bound;
}

RngStream RngStream::split(std::uint64_t child) const {
  std::uint64_t t = seed_ ^ rotl(stream_ * kGolden + 1, 17);
  return RngStream(splitmix64(t), child);
}

int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("JUNTALAB_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) return std::min(hw, cap);
  }
  return hw;
}

void parallel_for(size_t count, const std::function<void(size_t)>& body) {
  int workers = std::min<size_t>(worker_count(), count);
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i; (i = next.fetch_add(1)) < count;) {
        if (failed) return;
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

ProductDist::ProductDist(std::vector<double> p) : p_(std::move(p)), p0_(1.0) {
  check_dim(n(), kMaxDim, "ProductDist");
  for (double q : p_) {
    if (!(q > 0.0 && q < 1.0))
      throw JuntaError("ProductDist: marginals must lie in (0,1)");
    p0_ = std::min({p0_, q, 1.0 - q});
  }
  if (p_.empty()) p0_ = 0.5;
}

ProductDist ProductDist::uniform(int n) {
  return ProductDist(std::vector<double>(n, 0.5));
}

bool ProductDist::is_uniform() const {
  return std::all_of(p_.begin(), p_.end(), [](double q) { return q == 0.5; });
}

double ProductDist::weight(Mask x) const {
  double w = 1;
  for (int i = 0; i < n(); ++i) w *= has(x, i) ? p_[i] : 1.0 - p_[i];
  return w;
}

Mask draw_point(const ProductDist& dist, RngStream& rng) {
  if (dist.is_uniform()) return rng.next_u64() & full_mask(dist.n());
  Mask x = 0;
  for (int i = 0; i < dist.n(); ++i)
    if (rng.bernoulli(dist.p()[i])) x |= bit(i);
  return x;
}

Mask draw_biased_subset(Mask S, double delta, RngStream& rng) {
  if (delta < 0.0 || delta > 1.0)
    throw JuntaError("draw_biased_subset: delta outside [0,1]");
  Mask out = 0;
  for (int i : vars_of(S))
    if (rng.bernoulli(delta)) out |= bit(i);
  return out;
}

SampleSet draw_samples(const SetFunction& f, const ProductDist& dist, size_t m,
                       RngStream& rng) {
  if (dist.n() != f.n()) throw JuntaError("draw_samples: dimension mismatch");
  SampleSet s;
  s.n = f.n();
  s.source = dist.is_uniform() ? SampleSource::kUniform : SampleSource::kProduct;
  s.samples.reserve(m);
  for (size_t k = 0; k < m; ++k) {
    Mask x = draw_point(dist, rng);
    s.samples.push_back({x, f(x)});
  }
  return s;
}

SampleSet exhaustive_samples(const SetFunction& f) {
  check_dim(f.n(), 24, "exhaustive_samples");
  SampleSet s;
  s.n = f.n();
  s.source = SampleSource::kExhaustive;
  const Mask size = Mask{1} << f.n();
  s.samples.reserve(size);
  for (Mask x = 0; x < size; ++x) s.samples.push_back({x, f(x)});
  return s;
}

size_t sample_size(double range_width, double eps, double delta) {
  if (!(eps > 0) || !(delta > 0 && delta < 1))
    throw JuntaError("sample_size: need eps > 0 and delta in (0,1)");
  double m = range_width * range_width * std::log(2.0 / delta) /
             (2.0 * eps * eps);
  if (!(m < 1e18)) return static_cast<size_t>(1e18);
  return static_cast<size_t>(std::ceil(m));
}

double estimate_mean(const SetFunction& f, const ProductDist& dist, size_t m,
                     RngStream& rng) {
  if (m == 0) throw JuntaError("estimate_mean: m must be >= 1");
  if (dist.n() != f.n()) throw JuntaError("estimate_mean: dimension mismatch");
  // Fixed chunking: chunk c uses stream (base, c), so the result does not
  // depend on the worker count.
  const std::uint64_t base = rng.next_u64();
  const size_t chunks = (m + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
  parallel_for(chunks, [&](size_t c) {
    RngStream r(base, c);
    size_t lo = c * kChunk, hi = std::min(m, lo + kChunk);
    std::vector<double> vals;
    vals.reserve(hi - lo);
    for (size_t k = lo; k < hi; ++k) vals.push_back(f(draw_point(dist, r)));
    partial[c] = pairwise_sum(vals, 0, vals.size());
  });
  return pairwise_sum(partial, 0, partial.size()) / static_cast<double>(m);
}

double estimate_mean_eps(const SetFunction& f, const ProductDist& dist,
                         double eps, double delta, RngStream& rng) {
  return estimate_mean(
      f, dist, std::max<size_t>(1, sample_size(f.range_hint().width(), eps,
                                               delta)),
      rng);
}

double estimate_fourier_coeff(const SampleSet& samples, Mask S) {
  if (samples.samples.empty())
    throw JuntaError("estimate_fourier_coeff: empty sample set");
  if (!samples.uniform_like())
    throw JuntaError(
        "estimate_fourier_coeff: samples not drawn from the uniform "
        "distribution; the estimate would be biased");
  std::vector<double> v;
  v.reserve(samples.size());
  for (const auto& s : samples.samples) v.push_back(s.label * chi(S, s.x));
  return pairwise_sum(v, 0, v.size()) / static_cast<double>(v.size());
}

double estimate_multilinear(const SetFunction& f, const std::vector<double>& x,
                            size_t m, RngStream& rng) {
  if (x.size() != static_cast<size_t>(f.n()))
    throw JuntaError("estimate_multilinear: dimension mismatch");
  Mask vertex = 0;
  bool integral = true;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0 && x[i] <= 1.0))
      throw JuntaError("estimate_multilinear: x outside [0,1]^n");
    if (x[i] == 1.0) vertex |= bit(i);
    else if (x[i] != 0.0) integral = false;
  }
  if (integral) return f(vertex);
  if (m == 0) throw JuntaError("estimate_multilinear: m must be >= 1");
  std::vector<double> v;
  v.reserve(m);
  for (size_t k = 0; k < m; ++k) {
    Mask p = 0;
    for (size_t i = 0; i < x.size(); ++i)
      if (rng.bernoulli(x[i])) p |= bit(i);
    v.push_back(f(p));
  }
  return pairwise_sum(v, 0, v.size()) / static_cast<double>(m);
}

SampleSet ExampleSource::draw_many(size_t m, RngStream& rng) const {
  SampleSet s;
  s.n = n();
  s.source = SampleSource::kUniform;
  s.samples.reserve(m);
  for (size_t k = 0; k < m; ++k) s.samples.push_back(draw(rng));
  return s;
}

FunctionSource::FunctionSource(SetFunction f, int enumerate_max_n)
    : f_(std::move(f)), enumerate_max_n_(enumerate_max_n) {}

Sample FunctionSource::draw(RngStream& rng) const {
  Mask x = rng.next_u64() & full_mask(f_.n());
  return {x, f_(x)};
}

std::optional<SampleSet> FunctionSource::enumerate() const {
  if (f_.n() > enumerate_max_n_) return std::nullopt;
  return exhaustive_samples(f_);
}

SubcubeSource::SubcubeSource(std::shared_ptr<const ExampleSource> parent,
                             std::vector<int> J, Mask z, size_t max_attempts)
    : parent_(std::move(parent)),
      J_(std::move(J)),
      z_(z),
      max_attempts_(max_attempts) {
  free_ = complement(J_, parent_->n());
  fixed_ = deposit(z_, J_);
  jmask_ = mask_of(J_);
  n_ = static_cast<int>(free_.size());
}

Sample SubcubeSource::draw(RngStream& rng) const {
  for (size_t a = 0; a < max_attempts_; ++a) {
    Sample s = parent_->draw(rng);
    if ((s.x & jmask_) == fixed_) return {extract(s.x, free_), s.label};
  }
  throw FilterExhausted("subcube filter exceeded its attempt cap");
}

std::optional<SampleSet> SubcubeSource::enumerate() const {
  auto all = parent_->enumerate();
  if (!all) return std::nullopt;
  SampleSet out;
  out.n = n_;
  out.source = SampleSource::kExhaustive;
  out.samples.resize(size_t{1} << n_);
  for (const auto& s : all->samples)
    if ((s.x & jmask_) == fixed_)
      out.samples[extract(s.x, free_)] = {extract(s.x, free_), s.label};
  return out;
}

ScaledSource::ScaledSource(std::shared_ptr<const ExampleSource> base, double c,
                           double lo, double hi)
    : base_(std::move(base)), c_(c), lo_(lo), hi_(hi) {}

double ScaledSource::map(double v) const {
  return std::clamp(v * c_, lo_, hi_);
}

Sample ScaledSource::draw(RngStream& rng) const {
  Sample s = base_->draw(rng);
  s.label = map(s.label);
  return s;
}

std::optional<SampleSet> ScaledSource::enumerate() const {
  auto all = base_->enumerate();
  if (!all) return std::nullopt;
  for (auto& s : all->samples) s.label = map(s.label);
  return all;
}

}  // namespace juntalab
