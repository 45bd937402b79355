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

#ifndef JUNTALAB_COMMON_H_
#define JUNTALAB_COMMON_H_

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace juntalab {

using Mask = std::uint64_t;

// Absolute tolerance for all floating comparisons.
inline constexpr double kTol = 1e-9;
inline constexpr int kMaxDim = 63;

// Thrown for bad arguments, malformed specs and violated preconditions.
class JuntaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Mask bit(int i) { return Mask{1} << i; }
inline Mask full_mask(int n) { return n >= 64 ? ~Mask{0} : (bit(n) - 1); }
inline int popcount(Mask x) { return std::popcount(x); }
inline bool has(Mask x, int i) { return (x >> i) & 1; }
// (-1)^{|S ∩ x|}
inline int chi(Mask s, Mask x) { return (std::popcount(s & x) & 1) ? -1 : 1; }

inline Mask mask_of(const std::vector<int>& vars) {
  Mask m = 0;
  for (int v : vars) m |= bit(v);
  return m;
}

inline std::vector<int> vars_of(Mask m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

// Gathers the bits of x at positions vars into a compact index; bit k of the
// result is x[vars[k]].
inline Mask extract(Mask x, const std::vector<int>& vars) {
  Mask z = 0;
  for (size_t k = 0; k < vars.size(); ++k) z |= ((x >> vars[k]) & 1) << k;
  return z;
}

// Inverse of extract: scatters bit k of z to position vars[k].
inline Mask deposit(Mask z, const std::vector<int>& vars) {
  Mask x = 0;
  for (size_t k = 0; k < vars.size(); ++k) x |= ((z >> k) & 1) << vars[k];
  return x;
}

// Variables in [0,n) not in vars, ascending.
inline std::vector<int> complement(const std::vector<int>& vars, int n) {
  return vars_of(full_mask(n) & ~mask_of(vars));
}

inline void check_dim(int n, int cap, const std::string& what) {
  if (n < 0 || n > cap)
    throw JuntaError(what + ": dimension " + std::to_string(n) +
                     " outside supported range [0," + std::to_string(cap) + "]");
}

}  // namespace juntalab

#endif  // JUNTALAB_COMMON_H_
