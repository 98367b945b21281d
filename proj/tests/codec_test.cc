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

#include "nlwm/codec.h"

#include <fstream>
#include <functional>
#include <mutex>

#include "gtest/gtest.h"
#include "nlwm/random.h"
#include "nlwm/status.h"
#include "nlwm/transport.h"

namespace nlwm {
namespace {

// Answers ops with `fn` when it returns a non-null result, else the toy model.
class FnTransport : public Transport {
 public:
  using Fn = std::function<Json(const Json&)>;
  explicit FnTransport(Fn fn) : fn_(std::move(fn)) {}

  absl::StatusOr<Json> Call(const Json& request) override {
    Json result = fn_(request);
    if (result.is_null()) return toy_.Call(request);
    return absl::StatusOr<Json>(absl::in_place, OkResponse(request, result));
  }

 private:
  Fn fn_;
  ToyTransport toy_;
};

// Toy model that also keeps every infill request it forwards.
class LoggingTransport : public Transport {
 public:
  absl::StatusOr<Json> Call(const Json& request) override {
    if (request["op"] == "infill") {
      std::lock_guard<std::mutex> lock(mu_);
      Json copy = request;
      copy.erase("id");
      infills_.push_back(CanonicalJson(copy));
    }
    return toy_.Call(request);
  }

  std::vector<std::string> TakeInfills() {
    std::lock_guard<std::mutex> lock(mu_);
    return std::exchange(infills_, {});
  }

 private:
  ToyTransport toy_;
  std::mutex mu_;
  std::vector<std::string> infills_;
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

Json Candidates(std::vector<std::string> tokens) {
  Json out = Json::array();
  double p = 0.5;
  for (const std::string& t : tokens) {
    out.push_back({{"token", t}, {"prob", p}, {"subword", false}});
    p /= 2;
  }
  return out;
}

std::string RandomBits(CounterRng& rng, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += rng.Bit() ? '1' : '0';
  return out;
}

// Independent enumerator: recursion over the candidate lists, substitution
// by hand, the state function as the only shared piece.
std::vector<std::vector<std::string>> BruteForceValid(
    const TokenizedSentence& sentence, const State& state,
    const std::vector<CandidateSet>& sets, const AnchorConfig& anchor,
    Backend& backend) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> tuple;
  std::function<void(size_t)> walk = [&](size_t m) {
    if (m == sets.size()) {
      std::map<int, std::string> assignment;
      for (size_t i = 0; i < sets.size(); ++i) {
        std::string w = tuple[i];
        const std::string& old = sentence.word(sets[i].mask_position);
        if (!old.empty() && std::isupper(static_cast<unsigned char>(old[0])) &&
            !w.empty()) {
          w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
        }
        assignment[sets[i].mask_position] = w;
      }
      auto changed = Substitute(sentence, assignment);
      auto after = ComputeState(*changed, anchor, backend);
      if (after.ok() && after->mask_positions == state.mask_positions &&
          after->component == state.component) {
        out.push_back(tuple);
      }
      return;
    }
    for (const std::string& t : sets[m].tokens) {
      tuple.push_back(t);
      walk(m + 1);
      tuple.pop_back();
    }
  };
  walk(0);
  std::sort(out.begin(), out.end());
  return out;
}

TEST(CapacityTest, FloorLog2) {
  const std::vector<std::pair<size_t, int>> cases = {
      {0, 0}, {1, 0}, {2, 1}, {3, 1}, {4, 2}, {5, 2}, {8, 3}, {255, 7}, {256, 8}};
  for (auto [n, bits] : cases) EXPECT_EQ(CapacityBits(n), bits) << n;
}

TEST(BitsTest, IndexToBitsIsMsbFirst) {
  EXPECT_EQ(IndexToBits(1, 1), "1");
  EXPECT_EQ(IndexToBits(1, 3), "001");
  EXPECT_EQ(IndexToBits(6, 3), "110");
  EXPECT_EQ(IndexToBits(0, 0), "");
  EXPECT_TRUE(IsMessage("0101"));
  EXPECT_FALSE(IsMessage("01a"));
}

TEST(BitsTest, SourceChunksGreedily) {
  BitSource bits("101");
  EXPECT_EQ(bits.Take(1), "1");
  EXPECT_EQ(bits.Take(2), "01");
  EXPECT_EQ(bits.Take(2), "");
}

TEST(CodecConfigTest, RejectsBadK) {
  CodecConfig config;
  EXPECT_TRUE(ValidateCodecConfig(config).ok());
  config.k2 = 1;
  EXPECT_TRUE(IsKind(ValidateCodecConfig(config), ErrorKind::kDegenerateConfig));
  config.k2 = 40;
  EXPECT_TRUE(IsKind(ValidateCodecConfig(config), ErrorKind::kDegenerateConfig));
}

TEST(CandidateSetTest, ToyTopTwoAfterFilteringAlphabetized) {
  const TokenizedSentence s = Sentence("The old man walked slowly to the house.");
  Backend backend(std::make_shared<ToyTransport>());
  CodecConfig config;
  config.k1 = 8;
  config.k2 = 2;
  auto sets = BuildCandidateSets(s, State{{3}, Component::kKeyword}, config,
                                 backend);
  ASSERT_TRUE(sets.ok()) << sets.status();
  ASSERT_EQ(sets->size(), 1u);
  // Independent filter over the raw toy reply.
  ToyModel model;
  Json raw = model.Infill(MaskedText(s, {3}), {3}, 8);
  std::vector<std::string> expected;
  for (const Json& c : raw["masks"][0]["candidates"]) {
    const std::string token = c["token"].get<std::string>();
    if (c["subword"].get<bool>() || !IsSingleWord(token)) continue;
    if (BuiltinCandidateStopwords().Contains(token)) continue;
    if (expected.size() < 2) expected.push_back(token);
  }
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ((*sets)[0].tokens, expected);
  EXPECT_EQ((*sets)[0].mask_position, 3);
  // Frozen from a toy run.
  EXPECT_EQ((*sets)[0].tokens, (std::vector<std::string>{"or", "then"}));
}

TEST(CandidateSetTest, SortsFiltersAndDropsEmptyMasks) {
  Backend backend(std::make_shared<FnTransport>([](const Json& req) -> Json {
    if (req["op"] != "infill") return nullptr;
    return {{"masks",
             {{{"position", 1},
               {"candidates", Candidates({"but", ",", "and", "##ing", "but"})}},
              {{"position", 3}, {"candidates", Candidates({"he", "not", "n't"})}}}}};
  }));
  // A reply repeating a token is rejected before filtering.
  Backend clean(std::make_shared<FnTransport>([](const Json& req) -> Json {
    if (req["op"] != "infill") return nullptr;
    Json subword = Candidates({"but", ",", "and", "ing"});
    subword[3]["subword"] = true;
    return {{"masks",
             {{{"position", 1}, {"candidates", subword}},
              {{"position", 3}, {"candidates", Candidates({"he", "not", "never"})}}}}};
  }));
  const TokenizedSentence s = Sentence("a b c d e");
  CodecConfig config;
  config.k1 = 4;
  config.k2 = 4;
  EXPECT_FALSE(
      BuildCandidateSets(s, State{{1, 3}, Component::kKeyword}, config, backend)
          .ok());
  auto sets =
      BuildCandidateSets(s, State{{1, 3}, Component::kKeyword}, config, clean);
  ASSERT_TRUE(sets.ok()) << sets.status();
  ASSERT_EQ(sets->size(), 1u);
  EXPECT_EQ((*sets)[0].mask_position, 1);
  EXPECT_EQ((*sets)[0].tokens, (std::vector<std::string>{"and", "but"}));
}

// Scripted sentence "Bob and Ann saw the cat": syntactic masks {1, 4}
// (cc, det). Putting "or" at 1 and "this" at 4 relabels word 4.
std::shared_ptr<Transport> ScriptedSyntactic() {
  return std::make_shared<FnTransport>([](const Json& req) -> Json {
    if (req["op"] == "ner") return {{"entities", Json::array()}};
    if (req["op"] == "infill") {
      return {{"masks",
               {{{"position", 1}, {"candidates", Candidates({"or", "but"})}},
                {{"position", 4}, {"candidates", Candidates({"this", "that"})}}}}};
    }
    if (req["op"] != "parse") return nullptr;
    const auto& words = req["words"];
    const bool broken = words[1] == "or" && words[4] == "this";
    Json arcs = Json::array();
    for (size_t i = 0; i < words.size(); ++i) {
      std::string label = "nsubj";
      if (i == 1) label = "cc";
      if (i == 4 && !broken) label = "det";
      if (i == 0) {
        arcs.push_back({{"head", nullptr}, {"label", "ROOT"}});
      } else {
        arcs.push_back({{"head", 0}, {"label", label}});
      }
    }
    return {{"words", arcs}};
  });
}

CodecConfig ScriptedConfig() {
  CodecConfig config;
  config.k1 = 2;
  config.k2 = 2;
  config.anchor.component = Component::kSyntactic;
  config.anchor.target_masks = 2;
  config.anchor.ordering = {{"cc", "det"}, false};
  return config;
}

TEST(ValidSetTest, OneBrokenCombinationLeavesThree) {
  Backend backend(ScriptedSyntactic());
  const CodecConfig config = ScriptedConfig();
  const TokenizedSentence s = Sentence("Bob and Ann saw the cat");
  auto plan = PlanSentence(s, config, backend);
  ASSERT_TRUE(plan.ok()) << plan.status();
  EXPECT_EQ(plan->state.mask_positions, (std::vector<int>{1, 4}));
  const std::vector<std::vector<std::string>> expected = {
      {"but", "that"}, {"but", "this"}, {"or", "that"}};
  EXPECT_EQ(plan->valid.elements, expected);
  EXPECT_EQ(plan->valid.capacity_bits, 1);
  EXPECT_EQ(BruteForceValid(s, plan->state, plan->sets, config.anchor, backend),
            expected);
}

TEST(ValidSetTest, CapExceededIsProductTooLarge) {
  Backend backend(ScriptedSyntactic());
  CodecConfig config = ScriptedConfig();
  config.enumeration_cap = 3;
  auto plan = PlanSentence(Sentence("Bob and Ann saw the cat"), config, backend);
  EXPECT_TRUE(IsKind(plan.status(), ErrorKind::kProductTooLarge));
}

TEST(EmbedTest, IndexSelectsElement) {
  const TokenizedSentence s = Sentence("cats and dogs");
  SentencePlan plan;
  plan.state = State{{1}, Component::kSyntactic};
  plan.valid.positions = {1};
  plan.valid.elements = {{"and"}, {"but"}};
  plan.valid.capacity_bits = 1;
  BitSource one("1");
  auto r = EmbedWithPlan(s, plan, one);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->watermarked.text(), "cats but dogs");
  EXPECT_EQ(r->record.bits, "1");

  BitSource empty("");
  r = EmbedWithPlan(s, plan, empty);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->watermarked.text(), "cats and dogs");
  EXPECT_EQ(r->record.bits, "");
}

TEST(EmbedTest, ZeroCapacityKeepsClosestElement) {
  const TokenizedSentence s = Sentence("cats and dogs");
  SentencePlan plan;
  plan.valid.positions = {1};
  plan.valid.elements = {{"and"}};
  BitSource bits("1");
  auto r = EmbedWithPlan(s, plan, bits);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->watermarked.text(), "cats and dogs");
  EXPECT_EQ(r->record.bits, "");
  EXPECT_EQ(bits.remaining(), 1u);

  plan.valid.positions = {0, 1};
  plan.valid.elements = {{"rats", "or"}, {"cats", "or"}, {"cats", "nor"}};
  plan.valid.capacity_bits = 0;  // Forced; the rule only needs matches.
  r = EmbedWithPlan(s, plan, bits);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->watermarked.text(), "cats or dogs");
}

TEST(EmbedTest, GreedyChunkingAcrossSentences) {
  BitSource bits("101");
  SentencePlan a;
  a.valid.positions = {0};
  a.valid.elements = {{"x"}, {"y"}};
  a.valid.capacity_bits = 1;
  SentencePlan b;
  b.valid.positions = {0};
  b.valid.elements = {{"p"}, {"q"}, {"r"}, {"s"}};
  b.valid.capacity_bits = 2;
  auto ra = EmbedWithPlan(Sentence("w one"), a, bits);
  auto rb = EmbedWithPlan(Sentence("w two"), b, bits);
  ASSERT_TRUE(ra.ok() && rb.ok());
  EXPECT_EQ(ra->record.bits, "1");
  EXPECT_EQ(rb->record.bits, "01");
  EXPECT_EQ(ra->watermarked.text(), "y one");
  EXPECT_EQ(rb->watermarked.text(), "q two");
}

TEST(DecodeTest, FallbackAndModulo) {
  ValidSet valid;
  valid.positions = {0};
  valid.elements = {{"and"}, {"but"}};
  valid.capacity_bits = 1;
  EXPECT_EQ(DecodeIndex(valid, {"xor"}), 0u);
  EXPECT_EQ(DecodeIndex(valid, {"But"}), 1u);
  valid.elements = {{"a"}, {"b"}, {"c"}};
  EXPECT_EQ(DecodeIndex(valid, {"c"}), 0u);  // 2 mod 2
  valid.positions = {0, 1};
  valid.elements = {{"a", "x"}, {"b", "y"}, {"b", "z"}};
  EXPECT_EQ(DecodeIndex(valid, {"q", "y"}), 1u);
}

TEST(RoundTripTest, ScriptedSentence) {
  Backend backend(ScriptedSyntactic());
  const CodecConfig config = ScriptedConfig();
  const TokenizedSentence s = Sentence("Bob and Ann saw the cat");
  for (const std::string& m : {"0", "1"}) {
    BitSource bits(m);
    auto embedded = Embed(s, bits, config, backend);
    ASSERT_TRUE(embedded.ok());
    auto extracted = Extract(embedded->watermarked, config, backend);
    ASSERT_TRUE(extracted.ok());
    EXPECT_EQ(extracted->bits, m);
  }
}

class ToyRoundTripTest
    : public ::testing::TestWithParam<std::tuple<Component, int>> {};

TEST_P(ToyRoundTripTest, ErrorlessAndStatePreserving) {
  const auto [component, k2] = GetParam();
  auto transport = std::make_shared<LoggingTransport>();
  Backend backend(transport);
  CodecConfig config;
  config.k2 = k2;
  config.anchor.component = component;
  config.anchor.keyword_ratio = component == Component::kKeyword ? 0.06 : 0.05;
  CounterRng rng({static_cast<std::uint64_t>(k2), 31});
  long total_capacity = 0;
  for (const TokenizedSentence& s : Corpus()) {
    const std::string message = RandomBits(rng, 12);
    BitSource bits(message);
    transport->TakeInfills();
    auto embedded = Embed(s, bits, config, backend);
    ASSERT_TRUE(embedded.ok()) << embedded.status();
    const auto embed_infills = transport->TakeInfills();
    EXPECT_EQ(message.substr(0, embedded->record.bits.size()),
              embedded->record.bits);

    auto before = ComputeState(s, config.anchor, backend);
    auto after = ComputeState(embedded->watermarked, config.anchor, backend);
    ASSERT_TRUE(before.ok() && after.ok());
    EXPECT_EQ(*before, *after) << s.text();

    Backend fresh(transport);  // No memo, so the extract request is logged.
    auto extracted = Extract(embedded->watermarked, config, fresh);
    ASSERT_TRUE(extracted.ok());
    EXPECT_EQ(extracted->bits, embedded->record.bits) << s.text();
    const auto extract_infills = transport->TakeInfills();
    if (!embed_infills.empty()) {
      ASSERT_FALSE(extract_infills.empty());
      EXPECT_EQ(embed_infills.front(), extract_infills.front());
    }
    total_capacity += embedded->record.capacity;
  }
  EXPECT_GT(total_capacity, 0);
}

INSTANTIATE_TEST_SUITE_P(
    Components, ToyRoundTripTest,
    ::testing::Combine(::testing::Values(Component::kKeyword,
                                         Component::kSyntactic),
                       ::testing::Values(2, 4)));

TEST(ValidSetPropertyTest, MatchesBruteForceOnCorpus) {
  Backend backend(std::make_shared<ToyTransport>());
  for (Component component : {Component::kKeyword, Component::kSyntactic}) {
    CodecConfig config;
    config.k2 = 3;
    config.anchor.component = component;
    config.anchor.keyword_ratio = 0.07;
    int checked = 0;
    for (const TokenizedSentence& s : Corpus()) {
      auto plan = PlanSentence(s, config, backend);
      ASSERT_TRUE(plan.ok());
      size_t product = 1;
      for (const CandidateSet& set : plan->sets) product *= set.tokens.size();
      if (product > 256) continue;
      ++checked;
      EXPECT_EQ(plan->valid.elements,
                BruteForceValid(s, plan->state, plan->sets, config.anchor,
                                backend))
          << s.text();
      for (const CandidateSet& set : plan->sets) {
        EXPECT_TRUE(std::is_sorted(set.tokens.begin(), set.tokens.end()));
        EXPECT_LE(static_cast<int>(set.tokens.size()), config.k2);
        for (const std::string& t : set.tokens) {
          EXPECT_FALSE(config.stopwords.Contains(t));
          EXPECT_TRUE(IsSingleWord(t));
        }
      }
    }
    EXPECT_GT(checked, 150);
  }
}

TEST(ValidSetPropertyTest, CapacityGrowsWithK2) {
  Backend backend(std::make_shared<ToyTransport>());
  for (Component component : {Component::kKeyword, Component::kSyntactic}) {
    CodecConfig two;
    two.k2 = 2;
    two.anchor.component = component;
    CodecConfig four = two;
    four.k2 = 4;
    for (const TokenizedSentence& s : Corpus()) {
      auto a = PlanSentence(s, two, backend);
      auto b = PlanSentence(s, four, backend);
      ASSERT_TRUE(a.ok() && b.ok());
      EXPECT_GE(b->valid.capacity_bits, a->valid.capacity_bits) << s.text();
    }
  }
}

TEST(CorpusTest, EmbedExtractAndJsonl) {
  std::vector<TokenizedSentence> corpus = Corpus();
  corpus.resize(40);
  Backend backend(std::make_shared<ToyTransport>());
  CodecConfig config;
  CounterRng rng({5});
  const std::string message = RandomBits(rng, 400);
  auto run = EmbedCorpus(corpus, message, config, backend, 1);
  ASSERT_TRUE(run.ok()) << run.status();
  auto parallel = EmbedCorpus(corpus, message, config, backend, 4);
  ASSERT_TRUE(parallel.ok());
  EXPECT_EQ(run->ToJsonl(), parallel->ToJsonl());
  EXPECT_EQ(message.substr(0, run->Bits().size()), run->Bits());

  std::vector<TokenizedSentence> marked;
  for (const SentenceRecord& r : run->records) {
    marked.push_back(Sentence(r.watermarked));
  }
  auto extracted = ExtractCorpus(marked, config, backend, 3);
  ASSERT_TRUE(extracted.ok());
  EXPECT_EQ(extracted->Bits(), run->Bits());
  EXPECT_EQ(extracted->TotalCapacity(), run->TotalCapacity());

  auto reread = WatermarkRun::FromJsonl(run->ToJsonl());
  ASSERT_TRUE(reread.ok()) << reread.status();
  EXPECT_EQ(reread->ToJsonl(), run->ToJsonl());
  EXPECT_FALSE(WatermarkRun::FromJsonl("{\"i\":0}\n").ok());
}

TEST(CorpusTest, EmptyMessageConsumesNothing) {
  std::vector<TokenizedSentence> corpus = Corpus();
  corpus.resize(10);
  Backend backend(std::make_shared<ToyTransport>());
  auto run = EmbedCorpus(corpus, "", CodecConfig{}, backend);
  ASSERT_TRUE(run.ok());
  EXPECT_EQ(run->Bits(), "");
  EXPECT_EQ(run->records.size(), 10u);
}

TEST(CorpusTest, CapacitiesOneAndTwoSplitMessage) {
  // Sentence capacities come from the scripted backend: 1 bit each.
  Backend backend(ScriptedSyntactic());
  const CodecConfig config = ScriptedConfig();
  auto run = EmbedCorpus({Sentence("Bob and Ann saw the cat"),
                          Sentence("Tom and Sue met the dog")},
                         "10", config, backend);
  ASSERT_TRUE(run.ok()) << run.status();
  ASSERT_EQ(run->records.size(), 2u);
  EXPECT_EQ(run->records[0].bits, "1");
  EXPECT_EQ(run->records[1].bits, "0");
}

}  // namespace
}  // namespace nlwm
