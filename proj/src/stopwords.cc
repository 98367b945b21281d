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

#include "nlwm/stopwords.h"

#include <fstream>
#include <sstream>

#include "nlwm/status.h"
#include "nlwm/text.h"
#include "nlwm/wire.h"

namespace nlwm {

const WordSet& EnglishStopwords() {
  static const auto* const kWords = new WordSet{
      "a", "about", "above", "after", "again", "against", "all", "am", "an",
      "and", "any", "are", "aren't", "as", "at", "be", "because", "been",
      "before", "being", "below", "between", "both", "but", "by", "can",
      "cannot", "could", "couldn't", "did", "didn't", "do", "does", "doesn't",
      "doing", "don't", "down", "during", "each", "few", "for", "from",
      "further", "had", "hadn't", "has", "hasn't", "have", "haven't",
      "having", "he", "her", "here", "hers", "herself", "him", "himself",
      "his", "how", "i", "if", "in", "into", "is", "isn't", "it", "it's",
      "its", "itself", "just", "me", "more", "most", "my", "myself", "no",
      "nor", "not", "now", "of", "off", "on", "once", "only", "or", "other",
      "ought", "our", "ours", "ourselves", "out", "over", "own", "same",
      "shall", "she", "should", "so", "some", "such", "than", "that", "the",
      "their", "theirs", "them", "themselves", "then", "there", "these",
      "they", "this", "those", "through", "to", "too", "under", "until", "up",
      "upon", "us", "very", "was", "wasn't", "we", "were", "weren't", "what",
      "when", "where", "which", "while", "who", "whom", "why", "will", "with",
      "won't", "would", "wouldn't", "yet", "you", "your", "yours",
      "yourself", "yourselves", "may", "might", "must", "also", "upon",
      "whose", "whether", "although", "though", "unless", "since", "within",
      "without", "among", "toward", "towards", "onto", "n't",
  };
  return *kWords;
}

bool StopwordList::Contains(std::string_view word) const {
  return words.count(AsciiLower(word)) > 0;
}

std::string CanonicalStopwordText(const WordSet& words) {
  std::string out;
  for (const std::string& w : words) out += w + "\n";
  return out;
}

const StopwordList& BuiltinCandidateStopwords() {
  static const StopwordList* const kList = [] {
    auto* list = new StopwordList;
    list->id = "builtin";
    list->words = {
        // Personal and possessive pronouns.
        "i", "me", "my", "mine", "myself", "you", "your", "yours", "yourself",
        "yourselves", "he", "him", "his", "himself", "she", "her", "hers",
        "herself", "it", "its", "itself", "we", "us", "our", "ours",
        "ourselves", "they", "them", "their", "theirs", "themselves",
        // Negation flips meaning outright.
        "not", "no", "never", "n't", "none", "nothing", "nobody", "cannot",
        // Clitic pieces some tokenizers emit as whole tokens.
        "'s", "'re", "'ve", "'d", "'ll", "'m", "s", "t", "d", "ll", "m", "re",
        "ve", "o", "y",
    };
    list->sha256 = Sha256Hex(CanonicalStopwordText(list->words));
    return list;
  }();
  return *kList;
}

absl::StatusOr<StopwordList> LoadStopwordFile(std::string_view path,
                                              std::string_view expected_sha256) {
  std::ifstream in{std::string(path)};
  if (!in) {
    return MakeError(ErrorKind::kIo,
                     "cannot read stopword file " + std::string(path));
  }
  StopwordList list;
  list.id = std::string(path);
  for (std::string line; std::getline(in, line);) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    for (std::string word; fields >> word;) list.words.insert(AsciiLower(word));
  }
  list.sha256 = Sha256Hex(CanonicalStopwordText(list.words));
  if (!expected_sha256.empty() && list.sha256 != expected_sha256) {
    return MakeError(ErrorKind::kDegenerateConfig,
                     "stopword file " + std::string(path) + " has hash " +
                         list.sha256 + ", expected " +
                         std::string(expected_sha256));
  }
  return list;
}

}  // namespace nlwm
