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

// Word-level corruption with exact edit budgets.

#ifndef NLWM_CORRUPT_H_
#define NLWM_CORRUPT_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "nlwm/backend.h"
#include "nlwm/text.h"

namespace nlwm {

enum class CorruptionKind { kInsert, kDelete, kSubstitute, kCharSwap };

std::string_view CorruptionKindName(CorruptionKind kind);  // "insert", ...

inline constexpr int kDefaultCorruptionRetries = 16;

struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::kDelete;
  double cr = 0.05;
  std::uint64_t seed = 0;
  std::optional<double> similarity_floor;
  int retries = kDefaultCorruptionRetries;
  // Draw replacement and inserted words from the backend's infill model
  // instead of the fixed vocabulary.
  bool contextual = false;

  // "kind:cr:seed[:floor]".
  std::string ToString() const;
};

// Parses "kind:cr:seed[:floor]", e.g. "delete:0.05:7" or "substitute:0.05:7:0.98".
absl::StatusOr<CorruptionSpec> ParseCorruptionSpec(std::string_view text);

// Comma-separated list of specs.
absl::StatusOr<std::vector<CorruptionSpec>> ParseCorruptionSpecs(
    std::string_view text);

int EditBudget(double cr, int word_count);

// Positions that must not be edited, and insertion gaps that must stay
// closed (gap g sits before word g).
struct Protection {
  std::set<int> words;
  std::set<int> gaps;
};

struct Corruption {
  TokenizedSentence text;
  int edits = 0;
  // Original word indices deleted, replaced or swapped, ascending.
  std::vector<int> touched;
  // Gaps that received a word, ascending.
  std::vector<int> inserted_gaps;
  // For every word of `text`, its index in the original or -1 if inserted.
  std::vector<int> origin;
  int attempts = 1;
  // False when a similarity floor was set and no draw reached it.
  bool passed_floor = true;
};

// `index` and `replicate` key the generator together with `spec.seed`.
// `backend` is needed only for a similarity floor or contextual words.
// NothingToCorrupt when the budget rounds to zero; the caller keeps the
// input as is.
absl::StatusOr<Corruption> Corrupt(const TokenizedSentence& sentence,
                                   const CorruptionSpec& spec, int index,
                                   int replicate = 0,
                                   Backend* backend = nullptr,
                                   const Protection& protection = {});

// The input with no edits and an identity alignment.
Corruption Unchanged(const TokenizedSentence& sentence);

}  // namespace nlwm

#endif  // NLWM_CORRUPT_H_
