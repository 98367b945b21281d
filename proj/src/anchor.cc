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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "nlwm/random.h"
#include "nlwm/status.h"
#include "nlwm/stopwords.h"

namespace nlwm {
namespace {

constexpr double kCapitalBonus = 1.5;

bool IsUpperInitial(std::string_view w) {
  return !w.empty() && w[0] >= 'A' && w[0] <= 'Z';
}

}  // namespace

std::string_view ComponentName(Component c) {
  switch (c) {
    case Component::kKeyword:
      return "keyword";
    case Component::kSyntactic:
      return "syntactic";
    case Component::kRandom:
      return "random";
  }
  return "?";
}

absl::StatusOr<Component> ParseComponent(std::string_view name) {
  for (Component c :
       {Component::kKeyword, Component::kSyntactic, Component::kRandom}) {
    if (ComponentName(c) == name) return c;
  }
  return MakeError(ErrorKind::kDegenerateConfig,
                   "unknown component '" + std::string(name) + "'");
}

bool KeywordSet::Contains(int position) const {
  return std::binary_search(positions.begin(), positions.end(), position);
}

bool KeywordSet::IsEntity(int position) const {
  return std::binary_search(entity_positions.begin(), entity_positions.end(),
                            position);
}

DependencyOrdering DependencyOrdering::Default() {
  return {{"expl", "cc", "auxpass", "agent", "mark", "aux", "prep", "det",
           "prt", "parataxis", "predet", "case", "csubj", "acl", "advcl"},
          false};
}

std::vector<std::string> DependencyOrdering::Effective() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  auto keep = [&](const std::string& label) {
    if (discard_coordination && label == "cc") return;
    if (seen.insert(label).second) out.push_back(label);
  };
  for (const std::string& l : labels) keep(l);
  for (const std::string& l : DependencyLabels()) {
    if (l != "ROOT" && l != "punct") keep(l);
  }
  return out;
}

Json DependencyOrdering::ToJson() const {
  std::vector<std::string> written;
  for (const std::string& l : labels) {
    if (!(discard_coordination && l == "cc")) written.push_back(l);
  }
  return Json{{"labels", written},
              {"discard_coordination", discard_coordination}};
}

absl::StatusOr<DependencyOrdering> DependencyOrdering::FromJson(
    const Json& value) {
  auto bad = [](const std::string& why) {
    return MakeError(ErrorKind::kDegenerateConfig, "ordering: " + why);
  };
  if (!value.is_object()) return bad("not an object");
  for (const auto& [key, v] : value.items()) {
    if (key != "labels" && key != "discard_coordination") {
      return bad("unknown key '" + key + "'");
    }
  }
  if (!value.contains("labels") || !value["labels"].is_array()) {
    return bad("missing labels");
  }
  DependencyOrdering ordering;
  std::set<std::string> seen;
  for (const Json& l : value["labels"]) {
    if (!l.is_string()) return bad("labels must be strings");
    const std::string label = l.get<std::string>();
    if (!seen.insert(label).second) return bad("duplicate label " + label);
    ordering.labels.push_back(label);
  }
  if (ordering.labels.empty()) return bad("empty label list");
  if (value.contains("discard_coordination")) {
    if (!value["discard_coordination"].is_boolean()) {
      return bad("discard_coordination must be boolean");
    }
    ordering.discard_coordination = value["discard_coordination"].get<bool>();
  }
  if (ordering.discard_coordination) {
    std::erase(ordering.labels, "cc");
  }
  return ordering;
}

absl::StatusOr<DependencyOrdering> DependencyOrdering::Load(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) return MakeError(ErrorKind::kIo, "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json value = Json::parse(buffer.str(), nullptr, false);
  if (value.is_discarded()) {
    return MakeError(ErrorKind::kDegenerateConfig, path + " is not JSON");
  }
  return FromJson(value);
}

absl::Status ValidateAnchorConfig(const AnchorConfig& config) {
  if (!(config.keyword_ratio > 0.0 && config.keyword_ratio <= 1.0)) {
    return MakeError(ErrorKind::kDegenerateConfig,
                     "keyword ratio must be in (0, 1]");
  }
  if (config.component == Component::kSyntactic &&
      config.ordering.Effective().empty()) {
    return MakeError(ErrorKind::kDegenerateConfig, "empty ordering");
  }
  return absl::OkStatus();
}

int KeywordCount(double keyword_ratio, int word_count) {
  return std::max(1, RatioCount(keyword_ratio, word_count));
}

int TargetMasks(const AnchorConfig& config, int word_count) {
  if (config.target_masks >= 0) return config.target_masks;
  return KeywordCount(config.keyword_ratio, word_count);
}

std::vector<double> KeywordScores(const TokenizedSentence& sentence) {
  const int n = sentence.word_count();
  std::map<std::string, int> tf;
  std::vector<std::string> lower(n);
  for (int i = 0; i < n; ++i) {
    lower[i] = AsciiLower(sentence.word(i));
    ++tf[lower[i]];
  }
  std::vector<double> scores(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (EnglishStopwords().count(lower[i])) continue;
    double s = tf[lower[i]] / (1.0 + std::log(1.0 + i));
    if (i > 0 && IsUpperInitial(sentence.word(i))) s *= kCapitalBonus;
    scores[i] = s;
  }
  return scores;
}

absl::StatusOr<KeywordSet> ExtractKeywords(const TokenizedSentence& sentence,
                                           double keyword_ratio,
                                           Backend& backend) {
  const int n = sentence.word_count();
  if (n == 0) return MakeError(ErrorKind::kEmptyInput, "sentence has no words");
  NLWM_ASSIGN_OR_RETURN(std::vector<EntitySpan> entities,
                        backend.RecognizeEntities(sentence));
  KeywordSet out;
  for (const EntitySpan& e : entities) {
    for (int p = e.start; p <= e.end; ++p) out.entity_positions.push_back(p);
  }
  const int count = KeywordCount(keyword_ratio, n);
  std::vector<int> chosen;
  for (int p : out.entity_positions) {
    if (static_cast<int>(chosen.size()) == count) break;
    chosen.push_back(p);
    out.sources[p] = KeywordSource::kNer;
  }
  const std::vector<double> scores = KeywordScores(sentence);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Stable: equal scores keep the earlier word first.
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  for (int p : order) {
    if (static_cast<int>(chosen.size()) == count) break;
    if (out.sources.count(p)) continue;
    chosen.push_back(p);
    out.sources[p] = KeywordSource::kStatistical;
  }
  std::sort(chosen.begin(), chosen.end());
  out.positions = std::move(chosen);
  return out;
}

absl::StatusOr<State> SelectMasksKeyword(const TokenizedSentence& sentence,
                                         const KeywordSet& keywords) {
  const int n = sentence.word_count();
  std::set<int> chosen;
  auto usable = [&](int p) {
    return !keywords.Contains(p) && !keywords.IsEntity(p) && !chosen.count(p);
  };
  for (int k : keywords.positions) {
    int pick = -1;
    for (int p = k + 1; p < n && pick < 0; ++p) {
      if (usable(p)) pick = p;
    }
    for (int p = k - 1; p >= 0 && pick < 0; --p) {
      if (usable(p)) pick = p;
    }
    if (pick >= 0) chosen.insert(pick);
  }
  if (chosen.empty()) {
    return MakeError(ErrorKind::kNoMaskAvailable,
                     "every word is a keyword or an entity");
  }
  return State{{chosen.begin(), chosen.end()}, Component::kKeyword};
}

absl::StatusOr<State> SelectMasksSyntactic(const TokenizedSentence& sentence,
                                           const DependencyOrdering& ordering,
                                           int target_masks,
                                           const KeywordSet& keywords,
                                           Backend& backend) {
  State state{{}, Component::kSyntactic};
  if (target_masks <= 0 || sentence.word_count() == 0) return state;
  NLWM_ASSIGN_OR_RETURN(DepTree tree, backend.ParseDependencies(sentence));
  std::set<int> chosen;
  for (const std::string& label : ordering.Effective()) {
    for (int p = 0; p < sentence.word_count(); ++p) {
      if (static_cast<int>(chosen.size()) == target_masks) break;
      if (tree.arcs[p].label != label) continue;
      if (keywords.Contains(p) || keywords.IsEntity(p)) continue;
      chosen.insert(p);
    }
    if (static_cast<int>(chosen.size()) == target_masks) break;
  }
  state.mask_positions.assign(chosen.begin(), chosen.end());
  return state;
}

State SelectMasksRandom(const TokenizedSentence& sentence, int target,
                        std::uint64_t key) {
  const int n = sentence.word_count();
  CounterRng rng({key, static_cast<std::uint64_t>(n)});
  std::vector<int> picks = rng.SampleDistinct(n, std::min(target, n));
  std::sort(picks.begin(), picks.end());
  return State{std::move(picks), Component::kRandom};
}

absl::StatusOr<State> ComputeState(const TokenizedSentence& sentence,
                                   const AnchorConfig& config,
                                   Backend& backend) {
  if (sentence.word_count() == 0) return State{{}, config.component};
  const int target = TargetMasks(config, sentence.word_count());
  if (config.component == Component::kRandom) {
    return SelectMasksRandom(sentence, target, config.random_key);
  }
  NLWM_ASSIGN_OR_RETURN(
      KeywordSet keywords,
      ExtractKeywords(sentence, config.keyword_ratio, backend));
  if (config.component == Component::kSyntactic) {
    return SelectMasksSyntactic(sentence, config.ordering, target, keywords,
                                backend);
  }
  absl::StatusOr<State> state = SelectMasksKeyword(sentence, keywords);
  if (IsKind(state.status(), ErrorKind::kNoMaskAvailable)) {
    return State{{}, Component::kKeyword};
  }
  if (!state.ok()) return state.status();
  if (static_cast<int>(state->mask_positions.size()) > target) {
    state->mask_positions.resize(target);
  }
  return state;
}

std::vector<std::string> StateSurfaces(const TokenizedSentence& sentence,
                                       const State& state) {
  std::vector<std::string> out;
  for (int p : state.mask_positions) out.push_back(AsciiLower(sentence.word(p)));
  return out;
}

bool SameAnchoredState(const TokenizedSentence& a, const State& sa,
                       const TokenizedSentence& b, const State& sb) {
  return sa.component == sb.component &&
         StateSurfaces(a, sa) == StateSurfaces(b, sb);
}

absl::StatusOr<NliOrderingResult> OrderDependenciesNli(
    const std::vector<TokenizedSentence>& corpus, Backend& backend, int k1) {
  if (corpus.empty()) {
    return MakeError(ErrorKind::kEmptyInput, "empty corpus");
  }
  std::map<std::string, std::pair<double, int>> totals;
  for (const TokenizedSentence& sentence : corpus) {
    if (sentence.word_count() == 0) continue;
    NLWM_ASSIGN_OR_RETURN(DepTree tree, backend.ParseDependencies(sentence));
    for (int p = 0; p < sentence.word_count(); ++p) {
      NLWM_ASSIGN_OR_RETURN(std::vector<CandidateDist> dists,
                            backend.InfillTopK(sentence, {p}, k1));
      const Candidate* top = nullptr;
      for (const Candidate& c : dists[0].entries) {
        if (!c.subword && IsSingleWord(c.token)) {
          top = &c;
          break;
        }
      }
      if (top == nullptr) continue;
      NLWM_ASSIGN_OR_RETURN(
          TokenizedSentence substituted,
          Substitute(sentence,
                     {{p, MatchInitialCase(sentence.word(p), top->token)}}));
      NLWM_ASSIGN_OR_RETURN(double score,
                            backend.NliEntail(substituted.text(), sentence.text()));
      auto& [sum, count] = totals[tree.arcs[p].label];
      sum += score;
      ++count;
    }
  }
  NliOrderingResult result;
  for (const auto& [label, total] : totals) {
    result.scores.push_back({label, total.first / total.second, total.second});
  }
  std::sort(result.scores.begin(), result.scores.end(),
            [](const LabelScore& a, const LabelScore& b) {
              if (a.mean != b.mean) return a.mean > b.mean;
              return a.label < b.label;
            });
  for (const LabelScore& s : result.scores) {
    result.ordering.labels.push_back(s.label);
  }
  return result;
}

}  // namespace nlwm
