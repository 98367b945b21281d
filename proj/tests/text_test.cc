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

#include <fstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "nlwm/random.h"
#include "nlwm/status.h"

namespace nlwm {
namespace {

std::vector<std::string> Surfaces(const TokenizedSentence& s) {
  std::vector<std::string> out;
  for (const Token& t : s.tokens()) out.push_back(t.surface);
  return out;
}

std::vector<std::string> ReadCorpus() {
  std::ifstream in(std::string(NLWM_TEST_DATA_DIR) + "/corpus200.txt");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

TEST(TokenizeTest, SplitsTrailingPunctuation) {
  auto s = Tokenize("I waited for the food.");
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_EQ(Surfaces(*s), (std::vector<std::string>{"I", "waited", "for",
                                                     "the", "food", "."}));
  EXPECT_EQ(s->word_count(), 5);
  EXPECT_FALSE(s->tokens().back().is_word);
}

TEST(TokenizeTest, KeepsInternalHyphenAndTrailingElision) {
  auto s = Tokenize("a-goin' to fight");
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->WordSurfaces(),
            (std::vector<std::string>{"a-goin'", "to", "fight"}));
  EXPECT_EQ(s->tokens().size(), 3u);
}

TEST(TokenizeTest, QuotedWordLosesBothQuotes) {
  auto s = Tokenize("she said 'goin' twice");
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->WordSurfaces(),
            (std::vector<std::string>{"she", "said", "goin", "twice"}));
}

TEST(TokenizeTest, EmptyInput) {
  EXPECT_TRUE(IsKind(Tokenize("").status(), ErrorKind::kEmptyInput));
  EXPECT_TRUE(IsKind(Tokenize(" \t\n").status(), ErrorKind::kEmptyInput));
}

TEST(TokenizeTest, PunctuationOnlyHasNoWords) {
  auto s = Tokenize("... !");
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->word_count(), 0);
  EXPECT_EQ(s->tokens().size(), 4u);
}

TEST(TokenizeTest, NormalizesToNfc) {
  // "e" + combining acute accent becomes U+00E9.
  auto s = Tokenize("caf\x65\xcc\x81 noir");
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->text(), "caf\xc3\xa9 noir");
  EXPECT_EQ(s->word(0), "caf\xc3\xa9");
  EXPECT_EQ(s->word_token(1).start, 6);
}

TEST(TokenizeTest, CurlyQuotesAreSeparated) {
  auto s = Tokenize("\xe2\x80\x9cNo,\xe2\x80\x9d he said.");
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->WordSurfaces(), (std::vector<std::string>{"No", "he", "said"}));
}

// Checks the structural invariants on one input.
void ExpectWellFormed(const TokenizedSentence& s) {
  EXPECT_EQ(s.Render(), s.text());
  int cursor = 0;
  for (const Token& t : s.tokens()) {
    ASSERT_LT(t.start, t.end);
    ASSERT_GE(t.start, cursor);
    for (int i = cursor; i < t.start; ++i) {
      EXPECT_NE(std::string(" \t\n\r\f\v").find(s.text()[i]), std::string::npos)
          << "non-whitespace gap in '" << s.text() << "'";
    }
    EXPECT_EQ(s.text().substr(t.start, t.end - t.start), t.surface);
    cursor = t.end;
  }
  int previous = -1;
  for (int w : s.words()) {
    EXPECT_GT(w, previous);
    previous = w;
    const Token& t = s.tokens()[w];
    EXPECT_TRUE(t.is_word);
    bool has_alnum = false;
    for (unsigned char c : t.surface) has_alnum |= (c >= 0x80) || std::isalnum(c);
    EXPECT_TRUE(has_alnum) << t.surface;
  }
}

TEST(TokenizeTest, RoundTripOnCorpus) {
  const std::vector<std::string> corpus = ReadCorpus();
  ASSERT_GE(corpus.size(), 200u);
  for (const std::string& line : corpus) {
    auto s = Tokenize(line);
    ASSERT_TRUE(s.ok()) << line;
    EXPECT_EQ(s->text(), line);
    ExpectWellFormed(*s);
  }
}

TEST(TokenizeTest, RoundTripOnGeneratedText) {
  const std::vector<std::string> pieces = {
      "word", "it's", "a-b", "(", ")", ",", ".", "\"", "'", "--", "x", "42",
      "\xc3\xa9t\xc3\xa9", "\xe2\x80\x94", "goin'", "?!", " ", "  ", "\t"};
  for (int trial = 0; trial < 500; ++trial) {
    CounterRng rng({17, static_cast<std::uint64_t>(trial)});
    std::string text;
    const int n = 1 + static_cast<int>(rng.Below(12));
    for (int i = 0; i < n; ++i) {
      text += pieces[rng.Below(pieces.size())];
      if (rng.Below(3) != 0) text += " ";
    }
    auto s = TokenizeAllowEmpty(text);
    ASSERT_TRUE(s.ok());
    ExpectWellFormed(*s);
  }
}

TEST(SplitSentencesTest, SplitsOnTerminalPunctuation) {
  auto s = SplitSentences("He left. She stayed.");
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(*s, (std::vector<std::string>{"He left.", "She stayed."}));
}

TEST(SplitSentencesTest, AbbreviationSuppressesSplit) {
  auto s = SplitSentences("Mr. Smith ran.");
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(*s, (std::vector<std::string>{"Mr. Smith ran."}));
  auto initials = SplitSentences("It was J. Harker who wrote. Then he slept.");
  ASSERT_TRUE(initials.ok());
  EXPECT_EQ(initials->size(), 2u);
}

TEST(SplitSentencesTest, NoTerminalPunctuation) {
  auto s = SplitSentences("no terminal punctuation here");
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(*s, (std::vector<std::string>{"no terminal punctuation here"}));
}

TEST(SplitSentencesTest, LowercaseContinuationDoesNotSplit) {
  auto s = SplitSentences("Wait... then what? she asked. \"Go!\" He went.");
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(*s, (std::vector<std::string>{"Wait... then what? she asked.",
                                          "\"Go!\"", "He went."}));
}

TEST(SplitSentencesTest, EmptyInput) {
  EXPECT_TRUE(IsKind(SplitSentences("   ").status(), ErrorKind::kEmptyInput));
}

TEST(SplitSentencesTest, ReconstructsAndIsIdempotent) {
  const std::vector<std::string> corpus = ReadCorpus();
  std::string document = "  ";
  for (size_t i = 0; i < 40; ++i) document += corpus[i] + (i % 3 ? " " : "\n");
  auto spans = SplitSentenceSpans(document);
  ASSERT_TRUE(spans.ok());
  std::string rebuilt;
  int cursor = 0;
  for (const auto& [start, end] : *spans) {
    const std::string separator = document.substr(cursor, start - cursor);
    EXPECT_EQ(separator.find_first_not_of(" \n"), std::string::npos);
    rebuilt += separator + document.substr(start, end - start);
    cursor = end;
  }
  rebuilt += document.substr(cursor);
  EXPECT_EQ(rebuilt, document);
  auto sentences = SplitSentences(document);
  ASSERT_TRUE(sentences.ok());
  for (const std::string& sentence : *sentences) {
    EXPECT_FALSE(sentence.empty());
    auto again = SplitSentences(sentence);
    ASSERT_TRUE(again.ok());
    EXPECT_EQ(*again, std::vector<std::string>{sentence});
  }
}

TEST(SubstituteTest, ReplacesOnlyAddressedWord) {
  auto s = Tokenize(
      "I thought the main villains were pretty well done and fairly well "
      "acted.");
  ASSERT_TRUE(s.ok());
  int position = -1;
  for (int i = 0; i < s->word_count(); ++i) {
    if (s->word(i) == "and") position = i;
  }
  auto out = Substitute(*s, {{position, "but"}});
  ASSERT_TRUE(out.ok()) << out.status();
  EXPECT_EQ(out->text(),
            "I thought the main villains were pretty well done but fairly "
            "well acted.");
  EXPECT_EQ(out->word_count(), s->word_count());
}

TEST(SubstituteTest, IdentityMap) {
  auto s = Tokenize("Nothing changes here.");
  ASSERT_TRUE(s.ok());
  auto out = Substitute(*s, {});
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out->text(), s->text());
  auto same = Substitute(*s, {{1, "changes"}});
  ASSERT_TRUE(same.ok());
  EXPECT_EQ(same->text(), s->text());
}

TEST(SubstituteTest, RejectsMultiWordValue) {
  auto s = Tokenize("one two three");
  ASSERT_TRUE(s.ok());
  EXPECT_TRUE(IsKind(Substitute(*s, {{1, "two words"}}).status(),
                     ErrorKind::kNonWordReplacement));
  EXPECT_TRUE(IsKind(Substitute(*s, {{1, "two."}}).status(),
                     ErrorKind::kNonWordReplacement));
  EXPECT_TRUE(IsKind(Substitute(*s, {{1, ""}}).status(),
                     ErrorKind::kNonWordReplacement));
}

TEST(SubstituteTest, RejectsOutOfRange) {
  auto s = Tokenize("one two three");
  ASSERT_TRUE(s.ok());
  EXPECT_TRUE(IsKind(Substitute(*s, {{3, "four"}}).status(),
                     ErrorKind::kIndexOutOfRange));
}

TEST(SubstituteTest, IsPositionallyLocal) {
  const std::vector<std::string> corpus = ReadCorpus();
  for (size_t i = 0; i < corpus.size(); ++i) {
    auto s = Tokenize(corpus[i]);
    ASSERT_TRUE(s.ok());
    if (s->word_count() < 2) continue;
    CounterRng rng({5, i});
    const int target = static_cast<int>(rng.Below(s->word_count()));
    auto out = Substitute(*s, {{target, "zebra"}});
    ASSERT_TRUE(out.ok()) << corpus[i];
    ASSERT_EQ(out->tokens().size(), s->tokens().size());
    for (size_t t = 0; t < s->tokens().size(); ++t) {
      if (static_cast<int>(t) == s->words()[target]) continue;
      EXPECT_EQ(out->tokens()[t].surface, s->tokens()[t].surface);
    }
    // Inter-token bytes are unchanged as well.
    const Token& replaced = s->word_token(target);
    EXPECT_EQ(out->text().substr(0, replaced.start),
              s->text().substr(0, replaced.start));
    EXPECT_EQ(out->text().substr(replaced.start + 5),
              s->text().substr(replaced.end));
  }
}

TEST(DeleteWordsTest, RemovesWordsAndOneGap) {
  auto s = Tokenize("I waited for the food.");
  ASSERT_TRUE(s.ok());
  auto out = DeleteWords(*s, {4});
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out->text(), "I waited for the.");
  auto first = DeleteWords(*s, {0, 1});
  ASSERT_TRUE(first.ok());
  EXPECT_EQ(first->text(), "for the food.");
  auto all = DeleteWords(*s, {0, 1, 2, 3, 4});
  ASSERT_TRUE(all.ok());
  EXPECT_EQ(all->word_count(), 0);
}

TEST(InsertWordsTest, InsertsAtGaps) {
  auto s = Tokenize("I waited for the food.");
  ASSERT_TRUE(s.ok());
  auto out = InsertWords(*s, {{0, "so"}, {5, "today"}, {2, "long"}});
  ASSERT_TRUE(out.ok()) << out.status();
  EXPECT_EQ(out->text(), "so I waited long for the food today.");
  EXPECT_TRUE(IsKind(InsertWords(*s, {{6, "x"}}).status(),
                     ErrorKind::kIndexOutOfRange));
}

TEST(TextHelpersTest, MatchInitialCase) {
  EXPECT_EQ(MatchInitialCase("The", "a"), "A");
  EXPECT_EQ(MatchInitialCase("the", "a"), "a");
  EXPECT_EQ(MatchInitialCase("The", "Ida"), "Ida");
}

TEST(RoundHalfUpTest, Halves) {
  EXPECT_EQ(RoundHalfUp(0.25), 0);
  EXPECT_EQ(RoundHalfUp(0.5), 1);
  EXPECT_EQ(RatioCount(0.05, 20), 1);
  EXPECT_EQ(RatioCount(0.06, 25), 2);
  EXPECT_EQ(RatioCount(0.025, 10), 0);
  EXPECT_EQ(RatioCount(0.025, 20), 1);
  EXPECT_EQ(RatioCount(0.05, 10), 1);
}

}  // namespace
}  // namespace nlwm
