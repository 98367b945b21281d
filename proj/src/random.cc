// Copyright 2026 The nlwm Authors.
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

#include "nlwm/random.h"

#include <cmath>
#include <numeric>

namespace nlwm {

int RoundHalfUp(double x) {
  return static_cast<int>(std::floor(x + 0.5 + 1e-9));
}

int RatioCount(double ratio, int n) { return RoundHalfUp(ratio * n); }

// SplitMix64 finalizer.
std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t HashBytes(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ Mix64(seed);
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return Mix64(h);
}

CounterRng::CounterRng(std::initializer_list<std::uint64_t> key) {
  std::uint64_t s = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t k : key) s = Mix64(s ^ Mix64(k));
  state_ = s;
}

std::uint64_t CounterRng::Next() { return Mix64(state_ ^ Mix64(++counter_)); }

std::uint64_t CounterRng::Below(std::uint64_t bound) {
  // Reject the top partial bucket.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t v;
  do {
    v = Next();
  } while (v >= limit);
  return v % bound;
}

std::vector<int> CounterRng::SampleDistinct(int n, int count) {
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  if (count > n) count = n;
  // Partial Fisher-Yates.
  for (int i = 0; i < count; ++i) {
    const int j = i + static_cast<int>(Below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace nlwm
