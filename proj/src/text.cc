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

#include "nlwm/text.h"

#include <algorithm>
#include <array>
#include <set>

#include "nlwm/status.h"
#include "unicode/normalizer2.h"
#include "unicode/uchar.h"
#include "unicode/unistr.h"
#include "unicode/utf8.h"

namespace nlwm {
namespace {

struct CodePoint {
  int offset;
  int length;
  UChar32 value;
};

std::vector<CodePoint> Decode(std::string_view s, int base = 0) {
  std::vector<CodePoint> out;
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const int32_t n = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < n) {
    const int32_t begin = i;
    UChar32 c;
    U8_NEXT(bytes, i, n, c);
    out.push_back({base + begin, i - begin, c});
  }
  return out;
}

bool IsSpace(UChar32 c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v' || (c > 0x7f && u_isUWhiteSpace(c));
}

bool IsApostrophe(UChar32 c) { return c == '\'' || c == 0x2019; }

bool IsQuote(UChar32 c) {
  return IsApostrophe(c) || c == '"' || c == 0x2018 || c == 0x201c ||
         c == 0x201d || c == '`';
}

bool IsLetter(UChar32 c) { return c >= 0 && u_isalpha(c); }

// Appends the tokens of one whitespace-free chunk.
void TokenizeChunk(std::string_view text, int start, int end,
                   std::vector<Token>& tokens) {
  const std::vector<CodePoint> cps =
      Decode(text.substr(start, end - start), start);
  const int n = static_cast<int>(cps.size());
  int lead = 0;
  while (lead < n && !IsAlnumCodePoint(cps[lead].value)) ++lead;
  auto punct = [&](const CodePoint& cp) {
    tokens.push_back({std::string(text.substr(cp.offset, cp.length)),
                      cp.offset, cp.offset + cp.length, false});
  };
  if (lead == n) {
    for (const CodePoint& cp : cps) punct(cp);
    return;
  }
  int core_end = n;  // Exclusive index into cps.
  while (core_end > lead && !IsAlnumCodePoint(cps[core_end - 1].value)) {
    --core_end;
  }
  bool lead_has_quote = false;
  for (int i = 0; i < lead; ++i) lead_has_quote |= IsQuote(cps[i].value);
  if (core_end < n && IsApostrophe(cps[core_end].value) &&
      IsLetter(cps[core_end - 1].value) && !lead_has_quote) {
    ++core_end;
  }
  for (int i = 0; i < lead; ++i) punct(cps[i]);
  const int word_start = cps[lead].offset;
  const int word_end = cps[core_end - 1].offset + cps[core_end - 1].length;
  tokens.push_back({std::string(text.substr(word_start, word_end - word_start)),
                    word_start, word_end, true});
  for (int i = core_end; i < n; ++i) punct(cps[i]);
}

bool IsAsciiOnly(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

// Lowercased words after which a period does not end a sentence.
const std::set<std::string, std::less<>>& Abbreviations() {
  static const auto* const kAbbreviations = new std::set<std::string, std::less<>>{
      "mr",   "mrs",  "ms",   "dr",   "prof", "sr",   "jr",   "st",   "mt",
      "vs",   "etc",  "e.g",  "i.e",  "cf",   "capt", "col",  "gen",  "lt",
      "sgt",  "rev",  "hon",  "gov",  "no",   "vol",  "fig",  "jan",  "feb",
      "mar",  "apr",  "jun",  "jul",  "aug",  "sep",  "sept", "oct",  "nov",
      "dec",  "inc",  "ltd",  "co",   "corp", "approx", "dept", "est", "ft",
      "messrs", "mme", "mlle", "u.s", "u.k", "a.m", "p.m", "ph.d", "viz",
  };
  return *kAbbreviations;
}

bool IsCloser(UChar32 c) {
  return IsQuote(c) || c == ')' || c == ']' || c == '}';
}

bool IsOpener(UChar32 c) {
  return IsQuote(c) || c == '(' || c == '[' || c == '{';
}

bool EndsSentence(std::string_view chunk) {
  std::vector<CodePoint> cps = Decode(chunk);
  int end = static_cast<int>(cps.size());
  while (end > 0 && IsCloser(cps[end - 1].value)) --end;
  if (end == 0) return false;
  const UChar32 last = cps[end - 1].value;
  if (last == '!' || last == '?' || last == 0x2026) return true;
  if (last != '.') return false;
  // Strip the run of periods, any opening punctuation, then test the stem.
  int stem_end = end;
  while (stem_end > 0 && cps[stem_end - 1].value == '.') --stem_end;
  if (end - stem_end > 1) return true;  // Ellipsis.
  int stem_begin = 0;
  while (stem_begin < stem_end && !IsAlnumCodePoint(cps[stem_begin].value)) {
    ++stem_begin;
  }
  if (stem_begin == stem_end) return true;
  const int byte_begin = cps[stem_begin].offset;
  const int byte_end = cps[stem_end - 1].offset + cps[stem_end - 1].length;
  const std::string stem =
      AsciiLower(chunk.substr(byte_begin, byte_end - byte_begin));
  if (Abbreviations().count(stem) > 0) return false;
  // Single-letter initials ("J. Smith").
  if (stem_end - stem_begin == 1 && IsLetter(cps[stem_begin].value)) {
    return false;
  }
  return true;
}

bool StartsSentence(std::string_view chunk) {
  for (const CodePoint& cp : Decode(chunk)) {
    if (IsOpener(cp.value)) continue;
    return u_isupper(cp.value) || u_isdigit(cp.value);
  }
  return false;
}

// Byte ranges of whitespace-separated chunks.
std::vector<std::pair<int, int>> Chunks(std::string_view text) {
  std::vector<std::pair<int, int>> chunks;
  int chunk_start = -1;
  for (const CodePoint& cp : Decode(text)) {
    if (IsSpace(cp.value)) {
      if (chunk_start >= 0) chunks.emplace_back(chunk_start, cp.offset);
      chunk_start = -1;
    } else if (chunk_start < 0) {
      chunk_start = cp.offset;
    }
  }
  if (chunk_start >= 0) {
    chunks.emplace_back(chunk_start, static_cast<int>(text.size()));
  }
  return chunks;
}

}  // namespace

bool IsAlnumCodePoint(int c) { return c >= 0 && u_isalnum(c); }

std::string NormalizeNfc(std::string_view text) {
  if (IsAsciiOnly(text)) return std::string(text);
  UErrorCode error = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(error);
  if (U_FAILURE(error)) return std::string(text);
  icu::UnicodeString source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString normalized = nfc->normalize(source, error);
  if (U_FAILURE(error)) return std::string(text);
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::vector<std::string> TokenizedSentence::WordSurfaces() const {
  std::vector<std::string> out;
  out.reserve(words_.size());
  for (int index : words_) out.push_back(tokens_[index].surface);
  return out;
}

std::string TokenizedSentence::Render() const {
  std::string out;
  out.reserve(text_.size());
  int cursor = 0;
  for (const Token& token : tokens_) {
    out.append(text_, cursor, token.start - cursor);
    out.append(token.surface);
    cursor = token.end;
  }
  out.append(text_, cursor, std::string::npos);
  return out;
}

absl::StatusOr<TokenizedSentence> TokenizeAllowEmpty(std::string_view text) {
  TokenizedSentence sentence;
  sentence.text_ = NormalizeNfc(text);
  const std::string_view normalized = sentence.text_;
  for (const auto& [start, end] : Chunks(normalized)) {
    TokenizeChunk(normalized, start, end, sentence.tokens_);
  }
  for (int i = 0; i < static_cast<int>(sentence.tokens_.size()); ++i) {
    if (sentence.tokens_[i].is_word) sentence.words_.push_back(i);
  }
  return sentence;
}

absl::StatusOr<TokenizedSentence> Tokenize(std::string_view text) {
  if (Chunks(text).empty()) {
    return MakeError(ErrorKind::kEmptyInput, "text is empty or whitespace");
  }
  return TokenizeAllowEmpty(text);
}

absl::StatusOr<std::vector<std::pair<int, int>>> SplitSentenceSpans(
    std::string_view document) {
  const std::vector<std::pair<int, int>> chunks = Chunks(document);
  if (chunks.empty()) {
    return MakeError(ErrorKind::kEmptyInput, "document is empty");
  }
  std::vector<std::pair<int, int>> spans;
  int sentence_start = chunks.front().first;
  for (size_t i = 0; i + 1 < chunks.size(); ++i) {
    const auto [start, end] = chunks[i];
    const auto [next_start, next_end] = chunks[i + 1];
    if (EndsSentence(document.substr(start, end - start)) &&
        StartsSentence(document.substr(next_start, next_end - next_start))) {
      spans.emplace_back(sentence_start, end);
      sentence_start = next_start;
    }
  }
  spans.emplace_back(sentence_start, chunks.back().second);
  return spans;
}

absl::StatusOr<std::vector<std::string>> SplitSentences(
    std::string_view document) {
  NLWM_ASSIGN_OR_RETURN(auto spans, SplitSentenceSpans(document));
  std::vector<std::string> sentences;
  sentences.reserve(spans.size());
  for (const auto& [start, end] : spans) {
    sentences.emplace_back(document.substr(start, end - start));
  }
  return sentences;
}

bool IsSingleWord(std::string_view value) {
  absl::StatusOr<TokenizedSentence> tokenized = TokenizeAllowEmpty(value);
  if (!tokenized.ok()) return false;
  return tokenized->tokens().size() == 1 && tokenized->tokens()[0].is_word &&
         tokenized->text() == value;
}

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string MatchInitialCase(std::string_view original,
                             std::string_view replacement) {
  std::string out(replacement);
  if (!original.empty() && !out.empty() &&
      original[0] >= 'A' && original[0] <= 'Z' && out[0] >= 'a' &&
      out[0] <= 'z') {
    out[0] = static_cast<char>(out[0] - 'a' + 'A');
  }
  return out;
}

namespace {

absl::Status CheckReplacement(std::string_view value) {
  if (!IsSingleWord(value)) {
    return MakeError(ErrorKind::kNonWordReplacement,
                     "'" + std::string(value) + "' is not a single word");
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<TokenizedSentence> Substitute(
    const TokenizedSentence& sentence,
    const std::map<int, std::string>& assignments) {
  for (const auto& [index, value] : assignments) {
    if (index < 0 || index >= sentence.word_count()) {
      return MakeError(ErrorKind::kIndexOutOfRange,
                       "word index " + std::to_string(index) + " not in [0, " +
                           std::to_string(sentence.word_count()) + ")");
    }
    NLWM_RETURN_IF_ERROR(CheckReplacement(NormalizeNfc(value)));
  }
  if (assignments.empty()) return sentence;

  const std::string& text = sentence.text();
  std::string out;
  out.reserve(text.size() + 16);
  int cursor = 0;
  for (const auto& [index, value] : assignments) {
    const Token& token = sentence.word_token(index);
    out.append(text, cursor, token.start - cursor);
    out.append(NormalizeNfc(value));
    cursor = token.end;
  }
  out.append(text, cursor, std::string::npos);

  NLWM_ASSIGN_OR_RETURN(TokenizedSentence result, TokenizeAllowEmpty(out));
  bool consistent = result.word_count() == sentence.word_count();
  for (auto it = assignments.begin(); consistent && it != assignments.end();
       ++it) {
    consistent = result.word(it->first) == NormalizeNfc(it->second);
  }
  if (!consistent) {
    return MakeError(ErrorKind::kNonWordReplacement,
                     "replacement merges with neighbouring punctuation");
  }
  return result;
}

absl::StatusOr<TokenizedSentence> DeleteWords(
    const TokenizedSentence& sentence, const std::vector<int>& word_indices) {
  std::set<int> unique(word_indices.begin(), word_indices.end());
  if (unique.size() != word_indices.size()) {
    return absl::InvalidArgumentError("duplicate word index in deletion");
  }
  const std::vector<Token>& tokens = sentence.tokens();
  const std::string& text = sentence.text();
  std::vector<std::pair<int, int>> ranges;
  for (int w : unique) {
    if (w < 0 || w >= sentence.word_count()) {
      return MakeError(ErrorKind::kIndexOutOfRange,
                       "word index " + std::to_string(w));
    }
    const int t = sentence.words()[w];
    if (t > 0) {
      ranges.emplace_back(tokens[t - 1].end, tokens[t].end);
    } else if (t + 1 < static_cast<int>(tokens.size())) {
      ranges.emplace_back(tokens[t].start, tokens[t + 1].start);
    } else {
      ranges.emplace_back(tokens[t].start, tokens[t].end);
    }
  }
  std::sort(ranges.begin(), ranges.end());
  std::string out;
  int cursor = 0;
  for (const auto& [start, end] : ranges) {
    if (start > cursor) out.append(text, cursor, start - cursor);
    cursor = std::max(cursor, end);
  }
  out.append(text, cursor, std::string::npos);
  if (!text.empty() && !IsSpace(static_cast<unsigned char>(text[0]))) {
    size_t first = 0;
    while (first < out.size() && IsSpace(static_cast<unsigned char>(out[first]))) {
      ++first;
    }
    out.erase(0, first);
  }
  NLWM_ASSIGN_OR_RETURN(TokenizedSentence result, TokenizeAllowEmpty(out));
  if (result.word_count() != sentence.word_count() -
                                 static_cast<int>(unique.size())) {
    return absl::InternalError(
        "deletion changed tokenization of '" + text + "'");
  }
  return result;
}

absl::StatusOr<TokenizedSentence> InsertWords(
    const TokenizedSentence& sentence,
    const std::vector<std::pair<int, std::string>>& gap_words) {
  const int n = sentence.word_count();
  std::map<int, std::string> by_gap;
  for (const auto& [gap, word] : gap_words) {
    if (gap < 0 || gap > n) {
      return MakeError(ErrorKind::kIndexOutOfRange,
                       "gap " + std::to_string(gap) + " not in [0, " +
                           std::to_string(n) + "]");
    }
    NLWM_RETURN_IF_ERROR(CheckReplacement(NormalizeNfc(word)));
    if (!by_gap.emplace(gap, NormalizeNfc(word)).second) {
      return absl::InvalidArgumentError("duplicate insertion gap");
    }
  }
  std::string out = sentence.text();
  // Right to left so earlier offsets stay valid.
  for (auto it = by_gap.rbegin(); it != by_gap.rend(); ++it) {
    const auto& [gap, word] = *it;
    if (n == 0) {
      out = word + (out.empty() ? "" : " ") + out;
    } else if (gap < n) {
      out.insert(sentence.word_token(gap).start, word + " ");
    } else {
      out.insert(sentence.word_token(n - 1).end, " " + word);
    }
  }
  NLWM_ASSIGN_OR_RETURN(TokenizedSentence result, TokenizeAllowEmpty(out));
  if (result.word_count() != n + static_cast<int>(by_gap.size())) {
    return absl::InternalError(
        "insertion changed tokenization of '" + sentence.text() + "'");
  }
  return result;
}

}  // namespace nlwm
