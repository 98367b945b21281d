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

// Mask-position selection. The state of a sentence is the list of word
// positions whose words carry the watermark; it is recomputed from the
// received text at extraction time, so it must depend only on features that
// survive light editing: keywords and dependency labels.

#ifndef NLWM_ANCHOR_H_
#define NLWM_ANCHOR_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "nlwm/backend.h"
#include "nlwm/text.h"

namespace nlwm {

enum class Component { kKeyword, kSyntactic, kRandom };

std::string_view ComponentName(Component c);
absl::StatusOr<Component> ParseComponent(std::string_view name);

enum class KeywordSource { kNer, kStatistical };

struct KeywordSet {
  std::vector<int> positions;  // Ascending.
  std::map<int, KeywordSource> sources;
  // Every word inside a recognized entity, keyword or not. Masks avoid them.
  std::vector<int> entity_positions;

  bool Contains(int position) const;
  bool IsEntity(int position) const;
};

struct State {
  std::vector<int> mask_positions;  // Strictly increasing.
  Component component = Component::kKeyword;

  bool empty() const { return mask_positions.empty(); }
  bool operator==(const State&) const = default;
};

struct DependencyOrdering {
  std::vector<std::string> labels;  // Highest entailment first.
  bool discard_coordination = false;

  // The fifteen-label list shipped as data/dependency_order.json.
  static DependencyOrdering Default();

  // The labels actually walked: `labels`, then every other parser label
  // (except ROOT and punct) in ascending order; "cc" dropped when
  // discard_coordination is set.
  std::vector<std::string> Effective() const;

  Json ToJson() const;
  static absl::StatusOr<DependencyOrdering> FromJson(const Json& value);
  static absl::StatusOr<DependencyOrdering> Load(const std::string& path);

  bool operator==(const DependencyOrdering&) const = default;
};

struct AnchorConfig {
  Component component = Component::kKeyword;
  double keyword_ratio = 0.06;
  // Mask budget; negative means max(1, round(keyword_ratio * N)).
  int target_masks = -1;
  DependencyOrdering ordering = DependencyOrdering::Default();
  // Key for the random-position baseline.
  std::uint64_t random_key = 0x5eed;
};

absl::Status ValidateAnchorConfig(const AnchorConfig& config);

int KeywordCount(double keyword_ratio, int word_count);
int TargetMasks(const AnchorConfig& config, int word_count);

// Statistical keyword scores, one per word. Stopwords score zero.
std::vector<double> KeywordScores(const TokenizedSentence& sentence);

absl::StatusOr<KeywordSet> ExtractKeywords(const TokenizedSentence& sentence,
                                           double keyword_ratio,
                                           Backend& backend);

// NoMaskAvailable when no word can be chosen.
absl::StatusOr<State> SelectMasksKeyword(const TokenizedSentence& sentence,
                                         const KeywordSet& keywords);

absl::StatusOr<State> SelectMasksSyntactic(const TokenizedSentence& sentence,
                                           const DependencyOrdering& ordering,
                                           int target_masks,
                                           const KeywordSet& keywords,
                                           Backend& backend);

// Baseline: `target` positions drawn from a generator keyed only by the
// configured key and the word count.
State SelectMasksRandom(const TokenizedSentence& sentence, int target,
                        std::uint64_t key);

// The state function. A sentence where no mask can be placed yields an
// empty state rather than an error.
absl::StatusOr<State> ComputeState(const TokenizedSentence& sentence,
                                   const AnchorConfig& config,
                                   Backend& backend);

// Lowercased words of `sentence` at the state's positions.
std::vector<std::string> StateSurfaces(const TokenizedSentence& sentence,
                                       const State& state);

// Cross-text state equality: same component and same words (case-folded)
// at the mask positions, in order.
bool SameAnchoredState(const TokenizedSentence& a, const State& sa,
                       const TokenizedSentence& b, const State& sb);

struct LabelScore {
  std::string label;
  double mean = 0;
  int count = 0;
};

struct NliOrderingResult {
  DependencyOrdering ordering;
  std::vector<LabelScore> scores;  // Same order as ordering.labels.
};

// Masks every word in turn, substitutes the top-ranked usable infill token,
// and scores NLI(substituted, original). Labels are sorted by mean score
// descending, ties by label.
absl::StatusOr<NliOrderingResult> OrderDependenciesNli(
    const std::vector<TokenizedSentence>& corpus, Backend& backend, int k1);

}  // namespace nlwm

#endif  // NLWM_ANCHOR_H_
