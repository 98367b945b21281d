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

#include "nlwm/anchor.h"

#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "gtest/gtest.h"
#include "nlwm/random.h"
#include "nlwm/status.h"
#include "nlwm/transport.h"

namespace nlwm {
namespace {

// Toy model, except for ops with a canned result.
class PatchedTransport : public Transport {
 public:
  explicit PatchedTransport(std::map<std::string, Json> canned)
      : canned_(std::move(canned)) {}

  absl::StatusOr<Json> Call(const Json& request) override {
    auto it = canned_.find(request["op"].get<std::string>());
    if (it == canned_.end()) return toy_.Call(request);
    return absl::StatusOr<Json>(absl::in_place, OkResponse(request, it->second));
  }

 private:
  std::map<std::string, Json> canned_;
  ToyTransport toy_;
};

TokenizedSentence Sentence(std::string_view text) { return *Tokenize(text); }

std::vector<TokenizedSentence> Corpus() {
  std::ifstream in(std::string(NLWM_TEST_DATA_DIR) + "/corpus200.txt");
  std::vector<TokenizedSentence> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(Sentence(line));
  }
  return out;
}

// "<w0> <w1> ... <w9>." with a flat parse: word 0 is ROOT, the rest nsubj.
Json FlatParse(int n, std::map<int, std::string> labels = {}) {
  Json words = Json::array();
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      words.push_back({{"head", nullptr}, {"label", "ROOT"}});
    } else {
      auto it = labels.find(i);
      words.push_back(
          {{"head", 0}, {"label", it == labels.end() ? "nsubj" : it->second}});
    }
  }
  return {{"words", words}};
}

TEST(KeywordCountTest, RoundsAndFloorsAtOne) {
  EXPECT_EQ(KeywordCount(0.05, 20), 1);
  EXPECT_EQ(KeywordCount(0.06, 3), 1);
  EXPECT_EQ(KeywordCount(0.06, 25), 2);  // 1.5 rounds up
  EXPECT_EQ(KeywordCount(0.07, 50), 4);  // 3.5 rounds up
  EXPECT_EQ(KeywordCount(0.03, 16), 1);
}

TEST(KeywordScoreTest, MatchesHandComputedValues) {
  const auto scores = KeywordScores(Sentence("the dog saw the dog"));
  ASSERT_EQ(scores.size(), 5u);
  EXPECT_EQ(scores[0], 0.0);
  EXPECT_EQ(scores[3], 0.0);
  EXPECT_NEAR(scores[1], 1.1812322, 1e-6);  // 2 / (1 + ln 2)
  EXPECT_NEAR(scores[2], 0.4765054, 1e-6);  // 1 / (1 + ln 3)
  EXPECT_NEAR(scores[4], 0.7664486, 1e-6);  // 2 / (1 + ln 5)
  const auto named = KeywordScores(Sentence("we met Mina"));
  EXPECT_NEAR(named[2], 1.5 / (1 + std::log(3.0)), 1e-12);
}

TEST(ExtractKeywordsTest, NamedEntityComesFirst) {
  Backend backend(std::make_shared<ToyTransport>());
  const TokenizedSentence s = Sentence(
      "Heathcliff stood at the gate and watched the road until the light was "
      "gone from the hills above the farm.");
  ASSERT_EQ(s.word_count(), 20);
  auto keywords = ExtractKeywords(s, 0.05, backend);
  ASSERT_TRUE(keywords.ok()) << keywords.status();
  EXPECT_EQ(keywords->positions, std::vector<int>{0});
  EXPECT_EQ(keywords->sources.at(0), KeywordSource::kNer);
}

TEST(ExtractKeywordsTest, StatisticalFallbackAndTinySentence) {
  Backend backend(std::make_shared<ToyTransport>());
  auto keywords = ExtractKeywords(Sentence("the dog saw the dog"), 0.06, backend);
  ASSERT_TRUE(keywords.ok());
  EXPECT_EQ(keywords->positions, std::vector<int>{1});
  EXPECT_EQ(keywords->sources.at(1), KeywordSource::kStatistical);
  auto tiny = ExtractKeywords(Sentence("dogs bark loudly"), 0.06, backend);
  ASSERT_TRUE(tiny.ok());
  EXPECT_EQ(tiny->positions.size(), 1u);
}

TEST(ExtractKeywordsTest, AllStopwordsStillYieldsAKeyword) {
  Backend backend(std::make_shared<ToyTransport>());
  auto keywords = ExtractKeywords(Sentence("it was the"), 0.06, backend);
  ASSERT_TRUE(keywords.ok());
  EXPECT_EQ(keywords->positions, std::vector<int>{0});
}

TEST(SelectMasksKeywordTest, TakesRightNeighbourThenLeft) {
  const TokenizedSentence s =
      Sentence("one two three four five six seven eight nine ten");
  KeywordSet middle;
  middle.positions = {4};
  auto state = SelectMasksKeyword(s, middle);
  ASSERT_TRUE(state.ok());
  EXPECT_EQ(state->mask_positions, std::vector<int>{5});

  KeywordSet last;
  last.positions = {9};
  state = SelectMasksKeyword(s, last);
  ASSERT_TRUE(state.ok());
  EXPECT_EQ(state->mask_positions, std::vector<int>{8});

  KeywordSet blocked;
  blocked.positions = {4};
  blocked.entity_positions = {5, 6};
  state = SelectMasksKeyword(s, blocked);
  ASSERT_TRUE(state.ok());
  EXPECT_EQ(state->mask_positions, std::vector<int>{7});
}

TEST(SelectMasksKeywordTest, AdjacentKeywordsDoNotShareAMask) {
  const TokenizedSentence s = Sentence("a b c d e");
  KeywordSet keywords;
  keywords.positions = {1, 3};
  auto state = SelectMasksKeyword(s, keywords);
  ASSERT_TRUE(state.ok());
  EXPECT_EQ(state->mask_positions, (std::vector<int>{2, 4}));
  keywords.positions = {3, 4};
  state = SelectMasksKeyword(s, keywords);
  ASSERT_TRUE(state.ok());
  EXPECT_EQ(state->mask_positions, (std::vector<int>{1, 2}));
}

TEST(ComputeStateTest, OneWordSentenceHasEmptyState) {
  Backend backend(std::make_shared<ToyTransport>());
  for (Component c :
       {Component::kKeyword, Component::kSyntactic, Component::kRandom}) {
    AnchorConfig config;
    config.component = c;
    config.target_masks = c == Component::kRandom ? 0 : -1;
    auto state = ComputeState(Sentence("Hello."), config, backend);
    ASSERT_TRUE(state.ok()) << ComponentName(c);
    EXPECT_TRUE(state->empty()) << ComponentName(c);
  }
  EXPECT_TRUE(IsKind(
      SelectMasksKeyword(Sentence("Hello."), KeywordSet{{0}, {}, {}}).status(),
      ErrorKind::kNoMaskAvailable));
}

TEST(SelectMasksSyntacticTest, FollowsLabelOrder) {
  // "Bob and Ann saw the cat": cc at 1, det at 4.
  const TokenizedSentence s = Sentence("Bob and Ann saw the cat");
  Backend backend(std::make_shared<PatchedTransport>(std::map<std::string, Json>{
      {"parse", FlatParse(6, {{1, "cc"}, {4, "det"}})}}));
  KeywordSet none;
  DependencyOrdering ordering{{"cc", "det"}, false};
  auto state = SelectMasksSyntactic(s, ordering, 1, none, backend);
  ASSERT_TRUE(state.ok()) << state.status();
  EXPECT_EQ(state->mask_positions, std::vector<int>{1});

  state = SelectMasksSyntactic(s, ordering, 2, none, backend);
  ASSERT_TRUE(state.ok());
  EXPECT_EQ(state->mask_positions, (std::vector<int>{1, 4}));

  ordering.discard_coordination = true;
  state = SelectMasksSyntactic(s, ordering, 1, none, backend);
  ASSERT_TRUE(state.ok());
  EXPECT_EQ(state->mask_positions, std::vector<int>{4});

  state = SelectMasksSyntactic(s, ordering, 0, none, backend);
  ASSERT_TRUE(state.ok());
  EXPECT_TRUE(state->empty());
}

TEST(SelectMasksSyntacticTest, SkipsKeywordsAndFallsThroughToOtherLabels) {
  const TokenizedSentence s = Sentence("Bob and Ann saw the cat");
  Backend backend(std::make_shared<PatchedTransport>(std::map<std::string, Json>{
      {"parse", FlatParse(6, {{1, "cc"}, {4, "det"}})}}));
  KeywordSet keywords;
  keywords.positions = {1};
  DependencyOrdering ordering{{"cc"}, false};
  // cc is taken by a keyword; next come the remaining labels in ascending
  // order, and "det" sorts before "nsubj".
  auto state = SelectMasksSyntactic(s, ordering, 1, keywords, backend);
  ASSERT_TRUE(state.ok());
  EXPECT_EQ(state->mask_positions, std::vector<int>{4});
}

TEST(DependencyOrderingTest, EffectiveListAppendsRemainingLabels) {
  const DependencyOrdering ordering = DependencyOrdering::Default();
  const auto effective = ordering.Effective();
  ASSERT_GE(effective.size(), 15u);
  EXPECT_EQ(std::vector<std::string>(effective.begin(), effective.begin() + 15),
            ordering.labels);
  std::set<std::string> unique(effective.begin(), effective.end());
  EXPECT_EQ(unique.size(), effective.size());
  EXPECT_FALSE(unique.count("ROOT"));
  EXPECT_FALSE(unique.count("punct"));
  EXPECT_TRUE(std::is_sorted(effective.begin() + 15, effective.end()));
  DependencyOrdering discard = ordering;
  discard.discard_coordination = true;
  for (const std::string& l : discard.Effective()) EXPECT_NE(l, "cc");
}

TEST(DependencyOrderingTest, ShippedFileMatchesDefaultAndRoundTrips) {
  auto loaded = DependencyOrdering::Load(std::string(NLWM_SOURCE_DIR) +
                                         "/data/dependency_order.json");
  ASSERT_TRUE(loaded.ok()) << loaded.status();
  EXPECT_EQ(*loaded, DependencyOrdering::Default());
  auto again = DependencyOrdering::FromJson(loaded->ToJson());
  ASSERT_TRUE(again.ok());
  EXPECT_EQ(*again, *loaded);
}

TEST(DependencyOrderingTest, RejectsMalformedInput) {
  EXPECT_FALSE(DependencyOrdering::FromJson(Json::array()).ok());
  EXPECT_FALSE(DependencyOrdering::FromJson({{"labels", {"cc", "cc"}}}).ok());
  EXPECT_FALSE(DependencyOrdering::FromJson({{"labels", Json::array()}}).ok());
  EXPECT_FALSE(
      DependencyOrdering::FromJson({{"labels", {"cc"}}, {"extra", 1}}).ok());
  EXPECT_FALSE(
      DependencyOrdering::FromJson({{"labels", {"cc"}}, {"discard_coordination", 1}})
          .ok());
}

TEST(OrderDependenciesNliTest, TiesBreakByLabel) {
  const std::vector<TokenizedSentence> corpus = {
      Sentence("Bob and Ann saw the cat")};
  Backend backend(std::make_shared<PatchedTransport>(std::map<std::string, Json>{
      {"parse", FlatParse(6, {{1, "cc"}, {4, "det"}})},
      {"nli", {{"entailment", 0.5}}}}));
  auto result = OrderDependenciesNli(corpus, backend, 8);
  ASSERT_TRUE(result.ok()) << result.status();
  EXPECT_EQ(result->ordering.labels,
            (std::vector<std::string>{"ROOT", "cc", "det", "nsubj"}));
  for (const LabelScore& s : result->scores) EXPECT_DOUBLE_EQ(s.mean, 0.5);
}

TEST(OrderDependenciesNliTest, ToyCorpusOrderingIsSortedAndStable) {
  std::vector<TokenizedSentence> corpus = Corpus();
  corpus.resize(20);
  Backend backend(std::make_shared<ToyTransport>());
  auto a = OrderDependenciesNli(corpus, backend, 8);
  ASSERT_TRUE(a.ok()) << a.status();
  ASSERT_FALSE(a->scores.empty());
  for (size_t i = 1; i < a->scores.size(); ++i) {
    EXPECT_GE(a->scores[i - 1].mean, a->scores[i].mean);
  }
  Backend fresh(std::make_shared<ToyTransport>());
  auto b = OrderDependenciesNli(corpus, fresh, 8);
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(a->ordering, b->ordering);
}

TEST(AnchorPropertyTest, KeywordStatesAvoidKeywordsAndEntities) {
  Backend backend(std::make_shared<ToyTransport>());
  for (double kr : {0.03, 0.06, 0.2}) {
    for (const TokenizedSentence& s : Corpus()) {
      auto keywords = ExtractKeywords(s, kr, backend);
      ASSERT_TRUE(keywords.ok());
      EXPECT_EQ(static_cast<int>(keywords->positions.size()),
                std::min(s.word_count(), KeywordCount(kr, s.word_count())));
      AnchorConfig config;
      config.keyword_ratio = kr;
      auto state = ComputeState(s, config, backend);
      ASSERT_TRUE(state.ok());
      EXPECT_LE(static_cast<int>(state->mask_positions.size()),
                TargetMasks(config, s.word_count()));
      for (size_t i = 0; i < state->mask_positions.size(); ++i) {
        const int p = state->mask_positions[i];
        EXPECT_TRUE(p >= 0 && p < s.word_count());
        EXPECT_FALSE(keywords->Contains(p)) << s.text();
        EXPECT_FALSE(keywords->IsEntity(p)) << s.text();
        if (i > 0) EXPECT_LT(state->mask_positions[i - 1], p);
      }
    }
  }
}

TEST(AnchorPropertyTest, SyntacticStatesRespectBudgetAndAreDeterministic) {
  Backend a(std::make_shared<ToyTransport>());
  Backend b(std::make_shared<ToyTransport>(), /*memoize=*/false);
  AnchorConfig config;
  config.component = Component::kSyntactic;
  config.keyword_ratio = 0.05;
  for (const TokenizedSentence& s : Corpus()) {
    auto sa = ComputeState(s, config, a);
    auto sb = ComputeState(s, config, b);
    ASSERT_TRUE(sa.ok() && sb.ok());
    EXPECT_EQ(*sa, *sb);
    auto keywords = ExtractKeywords(s, config.keyword_ratio, a);
    auto tree = a.ParseDependencies(s);
    ASSERT_TRUE(keywords.ok() && tree.ok());
    int eligible = 0;
    for (int p = 0; p < s.word_count(); ++p) {
      const bool excluded = keywords->Contains(p) || keywords->IsEntity(p) ||
                            tree->arcs[p].label == "ROOT" ||
                            tree->arcs[p].label == "punct";
      if (!excluded) ++eligible;
    }
    for (int p : sa->mask_positions) {
      EXPECT_FALSE(keywords->Contains(p) || keywords->IsEntity(p));
    }
    EXPECT_EQ(static_cast<int>(sa->mask_positions.size()),
              std::min(TargetMasks(config, s.word_count()), eligible));
    EXPECT_TRUE(std::is_sorted(sa->mask_positions.begin(),
                               sa->mask_positions.end()));
  }
}

TEST(AnchorPropertyTest, RandomStateDependsOnlyOnLength) {
  CounterRng gen({77});
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + gen.Below(40);
    std::string a, b;
    for (int i = 0; i < n; ++i) {
      a += "w" + std::to_string(gen.Below(100)) + " ";
      b += "v" + std::to_string(gen.Below(100)) + " ";
    }
    const int target = gen.Below(n + 1);
    const State sa = SelectMasksRandom(Sentence(a), target, 9);
    const State sb = SelectMasksRandom(Sentence(b), target, 9);
    EXPECT_EQ(sa, sb);
    EXPECT_EQ(static_cast<int>(sa.mask_positions.size()), target);
    std::set<int> unique(sa.mask_positions.begin(), sa.mask_positions.end());
    EXPECT_EQ(unique.size(), sa.mask_positions.size());
  }
}

TEST(SameAnchoredStateTest, ComparesCaseFoldedWords) {
  const TokenizedSentence a = Sentence("The cat sat down.");
  const TokenizedSentence b = Sentence("Oh the Cat sat down.");
  EXPECT_TRUE(SameAnchoredState(a, State{{1}, Component::kKeyword}, b,
                                State{{2}, Component::kKeyword}));
  EXPECT_FALSE(SameAnchoredState(a, State{{1}, Component::kKeyword}, b,
                                 State{{3}, Component::kKeyword}));
  EXPECT_FALSE(SameAnchoredState(a, State{{1}, Component::kKeyword}, b,
                                 State{{2}, Component::kSyntactic}));
}

}  // namespace
}  // namespace nlwm
