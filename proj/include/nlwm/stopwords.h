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

// Two word lists with different jobs.
//
// EnglishStopwords() is a broad function-word list. The keyword scorer ranks
// these last and the toy NLI discounts them.
//
// The candidate list is what the codec strips from infill candidates. It is
// deliberately narrow (pronouns, negation, clitics): conjunctions,
// prepositions and determiners are exactly the words the syntactic component
// masks, so removing them would leave those masks empty. The built-in list
// is pinned by hash; a replacement can be loaded from a file.

#ifndef NLWM_STOPWORDS_H_
#define NLWM_STOPWORDS_H_

#include <set>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace nlwm {

using WordSet = std::set<std::string, std::less<>>;

const WordSet& EnglishStopwords();

struct StopwordList {
  std::string id;      // "builtin" or the file path.
  std::string sha256;  // Of the canonical text: sorted words, one per line.
  WordSet words;

  // Case-insensitive membership.
  bool Contains(std::string_view word) const;
};

const StopwordList& BuiltinCandidateStopwords();

// Hash the built-in list must have; checked by tests and at load time.
inline constexpr char kBuiltinCandidateStopwordsSha256[] =
    "c1f3e7c89fcf6be90a0b8beaa5f619c98464866f750e21d40c4c0f05ccf34f8a";

// One word per line; '#' starts a comment. When `expected_sha256` is
// nonempty the file's canonical hash must match it.
absl::StatusOr<StopwordList> LoadStopwordFile(std::string_view path,
                                              std::string_view expected_sha256);

std::string CanonicalStopwordText(const WordSet& words);

}  // namespace nlwm

#endif  // NLWM_STOPWORDS_H_
