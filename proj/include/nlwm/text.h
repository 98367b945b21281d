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

// Word-level text model: NFC normalization, tokenization, sentence
// splitting, and the edit primitives (substitute / delete / insert) that the
// codec and the corruption simulator are built on.
//
// Tokenization rule: split on whitespace; leading and trailing punctuation of
// each chunk become separate one-code-point punctuation tokens; everything in
// between (including internal hyphens and apostrophes) is one word. A single
// trailing apostrophe directly after a letter stays in the word ("goin'",
// "dogs'") unless the chunk opened with a quote character.

#ifndef NLWM_TEXT_H_
#define NLWM_TEXT_H_

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"

namespace nlwm {

struct Token {
  std::string surface;
  int start = 0;  // Byte offset into the normalized text.
  int end = 0;    // Exclusive.
  bool is_word = false;

  bool operator==(const Token&) const = default;
};

class TokenizedSentence {
 public:
  TokenizedSentence() = default;

  const std::string& text() const { return text_; }
  const std::vector<Token>& tokens() const { return tokens_; }
  // Indices into tokens() of the word tokens, strictly increasing.
  const std::vector<int>& words() const { return words_; }

  int word_count() const { return static_cast<int>(words_.size()); }
  const Token& word_token(int word_index) const {
    return tokens_[words_[word_index]];
  }
  const std::string& word(int word_index) const {
    return word_token(word_index).surface;
  }
  std::vector<std::string> WordSurfaces() const;

  // Reassembles the text from the token spans and the original inter-token
  // bytes. Always equal to text().
  std::string Render() const;

  bool operator==(const TokenizedSentence& other) const {
    return text_ == other.text_;
  }

 private:
  friend absl::StatusOr<TokenizedSentence> TokenizeAllowEmpty(
      std::string_view text);

  std::string text_;
  std::vector<Token> tokens_;
  std::vector<int> words_;
};

std::string NormalizeNfc(std::string_view text);

// True if `c` (a code point) counts as a letter or digit.
bool IsAlnumCodePoint(int c);

// Tokenizes after NFC normalization. Fails with EmptyInput when `text` is
// whitespace-only.
absl::StatusOr<TokenizedSentence> Tokenize(std::string_view text);

// Same as Tokenize but accepts whitespace-only text (yielding no tokens).
// Used for sentences whose every word was deleted.
absl::StatusOr<TokenizedSentence> TokenizeAllowEmpty(std::string_view text);

// Byte spans [start, end) of each sentence in `document`. Everything outside
// the spans is whitespace.
absl::StatusOr<std::vector<std::pair<int, int>>> SplitSentenceSpans(
    std::string_view document);

absl::StatusOr<std::vector<std::string>> SplitSentences(
    std::string_view document);

// Replaces the addressed words. Every other byte of the sentence is kept.
absl::StatusOr<TokenizedSentence> Substitute(
    const TokenizedSentence& sentence,
    const std::map<int, std::string>& assignments);

// Removes the given words together with one adjacent whitespace gap each.
absl::StatusOr<TokenizedSentence> DeleteWords(
    const TokenizedSentence& sentence, const std::vector<int>& word_indices);

// Inserts words at word gaps: gap g < N places the word before word g, gap N
// after the last word. Gaps must be distinct.
absl::StatusOr<TokenizedSentence> InsertWords(
    const TokenizedSentence& sentence,
    const std::vector<std::pair<int, std::string>>& gap_words);

// True if `value` tokenizes to exactly one word token equal to itself.
bool IsSingleWord(std::string_view value);

// ASCII case fold, used for surface comparisons.
std::string AsciiLower(std::string_view s);

// Copies an uppercase initial from `original` onto `replacement`.
std::string MatchInitialCase(std::string_view original,
                             std::string_view replacement);

}  // namespace nlwm

#endif  // NLWM_TEXT_H_
