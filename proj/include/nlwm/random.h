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

#ifndef NLWM_RANDOM_H_
#define NLWM_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <string_view>
#include <vector>

namespace nlwm {

// round(x) with halves rounded up. A tolerance of 1e-9 absorbs binary
// representation error so that e.g. 0.06 * 25 rounds to 2.
int RoundHalfUp(double x);

// Number of items selected by a ratio over `n` words: round(ratio * n).
int RatioCount(double ratio, int n);

std::uint64_t Mix64(std::uint64_t x);

// 64-bit FNV-1a over bytes; stable across platforms.
std::uint64_t HashBytes(std::string_view bytes, std::uint64_t seed = 0);

// Counter-based generator: the stream is a pure function of the key words,
// so every (seed, sentence, retry) triple reproduces the same draws without
// shared state. Bounded draws use rejection sampling so results do not depend
// on the standard library's distribution implementations.
class CounterRng {
 public:
  explicit CounterRng(std::initializer_list<std::uint64_t> key);

  std::uint64_t Next();

  // Uniform in [0, bound). `bound` must be positive.
  std::uint64_t Below(std::uint64_t bound);

  bool Bit() { return (Next() >> 63) != 0; }

  // `count` distinct values from [0, n), in draw order.
  std::vector<int> SampleDistinct(int n, int count);

 private:
  std::uint64_t state_;
  std::uint64_t counter_ = 0;
};

}  // namespace nlwm

#endif  // NLWM_RANDOM_H_
