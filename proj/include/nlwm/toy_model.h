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

// Deterministic stand-in for the model sidecar. It answers every wire op
// without any learned weights:
//
//  * infill: guesses a word class for each mask from its neighbours, then
//    ranks that class's words (then a fallback class, then the rest of the
//    512-word vocabulary) by a hash of the masked text and the position.
//    Rank r gets probability proportional to 1/(r+1).
//  * parse: a lexicon plus suffix rules assign labels; modifiers attach to
//    the next noun, objects of prepositions to the preposition, everything
//    else to the root.
//  * ner: runs of capitalized words that are not sentence-initial common
//    words.
//  * nli: stopword-discounted overlap of hypothesis words with the premise.
//  * embed: hashed word and character-trigram features, L2-normalized.

#ifndef NLWM_TOY_MODEL_H_
#define NLWM_TOY_MODEL_H_

#include <string>
#include <string_view>
#include <vector>

#include "nlwm/wire.h"

namespace nlwm {

enum class WordClass {
  kDet,
  kCc,
  kPrep,
  kAux,
  kMark,
  kPrt,
  kPron,
  kSubword,
  kPunct,
  kAdv,
  kAdj,
  kVerb,
  kNoun,
};

struct VocabEntry {
  std::string_view token;
  WordClass word_class;
};

inline constexpr int kToyVocabSize = 512;
inline constexpr int kToyEmbedDim = 64;

// The fixed vocabulary, grouped by class.
const std::vector<VocabEntry>& ToyVocabulary();

// Vocabulary entries that are plain words (no punctuation, no subword
// pieces). Used as the default corruption vocabulary.
std::vector<std::string> ToyWordVocabulary();

class ToyModel {
 public:
  // Answers one request with a complete response envelope. Malformed
  // requests get an error reply rather than a failure.
  Json Handle(const Json& request) const;

  Json Infill(const std::string& masked_text, const std::vector<int>& masks,
              int k) const;
  Json Parse(const std::vector<std::string>& words) const;
  Json Ner(const std::vector<std::string>& words) const;
  double Nli(std::string_view premise, std::string_view hypothesis) const;
  std::vector<double> Embed(std::string_view text) const;
};

}  // namespace nlwm

#endif  // NLWM_TOY_MODEL_H_
