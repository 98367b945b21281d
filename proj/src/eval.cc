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

#include "nlwm/eval.h"

#include <algorithm>
#include <cstdio>
#include <map>

#include "nlwm/random.h"
#include "nlwm/status.h"

namespace nlwm {
namespace {

// Original index -> corrupted index, -1 for removed words.
std::vector<int> ForwardMap(const Corruption& c, int original_words) {
  std::vector<int> out(original_words, -1);
  for (size_t j = 0; j < c.origin.size(); ++j) {
    if (c.origin[j] >= 0) out[c.origin[j]] = static_cast<int>(j);
  }
  return out;
}

bool Touched(const Corruption& c, int original_index) {
  return std::binary_search(c.touched.begin(), c.touched.end(),
                            original_index);
}

// Maps positions through `forward`; false if any word did not survive
// unedited or changed surface.
bool MapsOnto(const std::vector<int>& from, const std::vector<int>& to,
              const std::vector<int>& forward, const Corruption& c,
              const TokenizedSentence& original) {
  std::vector<int> mapped;
  for (int p : from) {
    if (forward[p] < 0 || Touched(c, p)) return false;
    if (c.text.word(forward[p]) != original.word(p)) return false;
    mapped.push_back(forward[p]);
  }
  std::sort(mapped.begin(), mapped.end());
  return mapped == to;
}

Json RateOrNull(double rate, long bits) {
  if (bits == 0) return nullptr;
  return rate;
}

std::string FormatRate(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

BerCount CountBitErrors(std::string_view truth, std::string_view extracted) {
  BerCount out;
  const size_t common = std::min(truth.size(), extracted.size());
  for (size_t i = 0; i < common; ++i) {
    if (truth[i] != extracted[i]) ++out.errors;
  }
  out.errors += static_cast<long>(std::max(truth.size(), extracted.size()) -
                                   common);
  out.length = static_cast<long>(std::max(truth.size(), extracted.size()));
  return out;
}

absl::StatusOr<double> BitErrorRate(std::string_view truth,
                                    std::string_view extracted) {
  if (truth.empty()) {
    return MakeError(ErrorKind::kEmptyTruth, "no embedded bits to compare");
  }
  const BerCount c = CountBitErrors(truth, extracted);
  return static_cast<double>(c.errors) / c.length;
}

double BitsPerWord(const WatermarkRun& run) {
  long words = 0;
  long bits = 0;
  for (const SentenceRecord& r : run.records) {
    auto s = TokenizeAllowEmpty(r.original);
    if (s.ok()) words += s->word_count();
    bits += static_cast<long>(r.bits.size());
  }
  return words == 0 ? 0.0 : static_cast<double>(bits) / words;
}

absl::StatusOr<double> RobustnessG1(const std::vector<TextPair>& pairs,
                                    const AnchorConfig& config,
                                    Backend& backend, int jobs) {
  if (pairs.empty()) return MakeError(ErrorKind::kEmptyInput, "no pairs");
  std::vector<char> same(pairs.size(), 0);
  NLWM_RETURN_IF_ERROR(ParallelFor(
      static_cast<int>(pairs.size()), jobs, [&](int i) -> absl::Status {
        const auto& [a, b] = pairs[i];
        NLWM_ASSIGN_OR_RETURN(State sa, ComputeState(a, config, backend));
        NLWM_ASSIGN_OR_RETURN(State sb, ComputeState(b, config, backend));
        same[i] = SameAnchoredState(a, sa, b, sb);
        return absl::OkStatus();
      }));
  return static_cast<double>(std::count(same.begin(), same.end(), 1)) /
         pairs.size();
}

absl::StatusOr<double> RobustnessG2(const std::vector<TextPair>& pairs,
                                    const CodecConfig& config,
                                    Backend& backend, int jobs) {
  if (pairs.empty()) return MakeError(ErrorKind::kEmptyInput, "no pairs");
  std::vector<char> same(pairs.size(), 0);
  NLWM_RETURN_IF_ERROR(ParallelFor(
      static_cast<int>(pairs.size()), jobs, [&](int i) -> absl::Status {
        NLWM_ASSIGN_OR_RETURN(SentencePlan a,
                              PlanSentence(pairs[i].first, config, backend));
        NLWM_ASSIGN_OR_RETURN(SentencePlan b,
                              PlanSentence(pairs[i].second, config, backend));
        same[i] = a.valid.elements == b.valid.elements;
        return absl::OkStatus();
      }));
  return static_cast<double>(std::count(same.begin(), same.end(), 1)) /
         pairs.size();
}

absl::StatusOr<Protection> AnchorProtection(const TokenizedSentence& sentence,
                                            const AnchorConfig& config,
                                            Backend& backend) {
  Protection out;
  const int n = sentence.word_count();
  NLWM_ASSIGN_OR_RETURN(State state, ComputeState(sentence, config, backend));
  out.words.insert(state.mask_positions.begin(), state.mask_positions.end());
  if (config.component == Component::kRandom || n == 0) return out;
  NLWM_ASSIGN_OR_RETURN(
      KeywordSet keywords,
      ExtractKeywords(sentence, config.keyword_ratio, backend));
  out.words.insert(keywords.positions.begin(), keywords.positions.end());
  out.words.insert(keywords.entity_positions.begin(),
                   keywords.entity_positions.end());
  if (config.component != Component::kKeyword) return out;
  // Same walk as the keyword mask rule.
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
    if (pick < 0) {
      for (int g = k + 1; g <= n; ++g) out.gaps.insert(g);
      continue;
    }
    chosen.insert(pick);
    if (pick > k) {
      for (int p = k; p <= pick; ++p) out.words.insert(p);
      for (int g = k + 1; g <= pick; ++g) out.gaps.insert(g);
    } else {
      for (int p = pick; p < n; ++p) out.words.insert(p);
      for (int g = pick + 1; g <= n; ++g) out.gaps.insert(g);
    }
  }
  return out;
}

absl::StatusOr<bool> AnchorFeaturesPreserved(const TokenizedSentence& original,
                                             const Corruption& corruption,
                                             const AnchorConfig& config,
                                             Backend& backend) {
  const TokenizedSentence& changed = corruption.text;
  const int n = original.word_count();
  const int m = changed.word_count();
  if (config.component == Component::kRandom) return n == m;
  if (n == 0 || m == 0) return n == m;
  if (KeywordCount(config.keyword_ratio, n) !=
          KeywordCount(config.keyword_ratio, m) ||
      TargetMasks(config, n) != TargetMasks(config, m)) {
    return false;
  }
  NLWM_ASSIGN_OR_RETURN(KeywordSet before,
                        ExtractKeywords(original, config.keyword_ratio, backend));
  NLWM_ASSIGN_OR_RETURN(KeywordSet after,
                        ExtractKeywords(changed, config.keyword_ratio, backend));
  const std::vector<int> forward = ForwardMap(corruption, n);
  if (!MapsOnto(before.positions, after.positions, forward, corruption,
                original) ||
      !MapsOnto(before.entity_positions, after.entity_positions, forward,
                corruption, original)) {
    return false;
  }
  if (config.component != Component::kSyntactic) return true;

  NLWM_ASSIGN_OR_RETURN(State state, ComputeState(original, config, backend));
  NLWM_ASSIGN_OR_RETURN(DepTree tree_before, backend.ParseDependencies(original));
  NLWM_ASSIGN_OR_RETURN(DepTree tree_after, backend.ParseDependencies(changed));
  const std::vector<std::string> walk = config.ordering.Effective();
  std::map<std::string, int> rank;
  for (size_t i = 0; i < walk.size(); ++i) rank[walk[i]] = static_cast<int>(i);
  int reach = static_cast<int>(walk.size()) - 1;
  const int target = TargetMasks(config, n);
  if (static_cast<int>(state.mask_positions.size()) == target) {
    reach = -1;
    for (int p : state.mask_positions) {
      reach = std::max(reach, rank.at(tree_before.arcs[p].label));
    }
  }
  for (int j = 0; j < m; ++j) {
    const int o = corruption.origin[j];
    const std::string& label = tree_after.arcs[j].label;
    if (o >= 0 && !Touched(corruption, o)) {
      if (label != tree_before.arcs[o].label) return false;
    } else {
      auto it = rank.find(label);
      if (it != rank.end() && it->second <= reach) return false;
    }
  }
  return true;
}

std::string RandomMessage(std::uint64_t seed, long length) {
  CounterRng rng({seed, 0x6d657373616765ULL});
  std::string out;
  out.reserve(length);
  for (long i = 0; i < length; ++i) out += rng.Bit() ? '1' : '0';
  return out;
}

absl::StatusOr<EvaluationReport> RunExperiment(
    const std::vector<TokenizedSentence>& corpus, const CodecConfig& config,
    const ExperimentOptions& options, Backend& backend) {
  NLWM_RETURN_IF_ERROR(ValidateCodecConfig(config));
  if (corpus.empty()) return MakeError(ErrorKind::kEmptyInput, "empty corpus");
  const int n = static_cast<int>(corpus.size());
  EvaluationReport report;
  report.sentences = n;
  report.config = options.config_echo;

  std::vector<SentencePlan> plans(n);
  NLWM_RETURN_IF_ERROR(ParallelFor(n, options.jobs, [&](int i) -> absl::Status {
    NLWM_ASSIGN_OR_RETURN(plans[i], PlanSentence(corpus[i], config, backend));
    return absl::OkStatus();
  }));
  for (int i = 0; i < n; ++i) {
    report.capacity_bits += plans[i].valid.capacity_bits;
    report.words += corpus[i].word_count();
  }
  BitSource source(RandomMessage(options.message_seed, report.capacity_bits));
  WatermarkRun run;
  std::vector<TokenizedSentence> marked;
  for (int i = 0; i < n; ++i) {
    NLWM_ASSIGN_OR_RETURN(EmbedResult r,
                          EmbedWithPlan(corpus[i], plans[i], source));
    r.record.index = i;
    report.message_bits += static_cast<long>(r.record.bits.size());
    marked.push_back(std::move(r.watermarked));
    run.records.push_back(std::move(r.record));
  }
  report.bpw = report.words == 0
                   ? 0.0
                   : static_cast<double>(report.message_bits) / report.words;

  if (options.semantic_scores) {
    std::vector<double> es(n), ss(n);
    NLWM_RETURN_IF_ERROR(ParallelFor(n, options.jobs, [&](int i) -> absl::Status {
      NLWM_ASSIGN_OR_RETURN(es[i], backend.NliEntail(corpus[i].text(),
                                                     marked[i].text()));
      NLWM_ASSIGN_OR_RETURN(std::vector<double> a,
                            backend.EmbedSentence(corpus[i].text()));
      NLWM_ASSIGN_OR_RETURN(std::vector<double> b,
                            backend.EmbedSentence(marked[i].text()));
      ss[i] = Cosine(a, b);
      return absl::OkStatus();
    }));
    double es_sum = 0, ss_sum = 0;
    for (int i = 0; i < n; ++i) {
      es_sum += es[i];
      ss_sum += ss[i];
    }
    report.es = es_sum / n;
    report.ss = ss_sum / n;
  }

  // Plans of the watermarked text; the uncorrupted row reuses them.
  std::vector<SentencePlan> marked_plans(n);
  NLWM_RETURN_IF_ERROR(ParallelFor(n, options.jobs, [&](int i) -> absl::Status {
    NLWM_ASSIGN_OR_RETURN(marked_plans[i],
                          PlanSentence(marked[i], config, backend));
    return absl::OkStatus();
  }));

  struct Sample {
    BerCount ber;
    bool same_state = false;
    bool same_valid = false;
    bool edited = false;
    bool below_floor = false;
  };
  auto score = [&](int i, const Corruption& c, Sample& out) -> absl::Status {
    SentencePlan fresh;
    const SentencePlan* plan = &marked_plans[i];
    if (c.edits > 0) {
      NLWM_ASSIGN_OR_RETURN(fresh, PlanSentence(c.text, config, backend));
      plan = &fresh;
    }
    NLWM_ASSIGN_OR_RETURN(SentenceRecord got, ExtractWithPlan(c.text, *plan));
    out.ber = CountBitErrors(run.records[i].bits, got.bits);
    out.same_state = SameAnchoredState(marked[i], marked_plans[i].state,
                                       c.text, plan->state);
    out.same_valid = marked_plans[i].valid.elements == plan->valid.elements;
    out.edited = c.edits > 0;
    out.below_floor = !c.passed_floor;
    return absl::OkStatus();
  };
  auto add_row = [&](const std::string& name, double cr,
                     const std::vector<std::vector<Sample>>& reps) {
    CorruptionRow row;
    row.spec = name;
    row.cr = cr;
    row.replicates = static_cast<int>(reps.size());
    for (const auto& samples : reps) {
      BerCount pooled;
      long g1 = 0, g2 = 0;
      for (const Sample& s : samples) {
        pooled.errors += s.ber.errors;
        pooled.length += s.ber.length;
        g1 += s.same_state;
        g2 += s.same_valid;
        (s.edited ? row.edited : row.unedited) += 1;
        row.below_floor += s.below_floor;
      }
      row.errors += pooled.errors;
      row.bits += pooled.length;
      row.ber += pooled.length == 0
                     ? 0.0
                     : static_cast<double>(pooled.errors) / pooled.length;
      row.r_g1 += static_cast<double>(g1) / n;
      row.r_g2 += static_cast<double>(g2) / n;
    }
    row.ber /= row.replicates;
    row.r_g1 /= row.replicates;
    row.r_g2 /= row.replicates;
    report.rows.push_back(row);
  };

  {
    std::vector<Sample> samples(n);
    NLWM_RETURN_IF_ERROR(ParallelFor(n, options.jobs, [&](int i) {
      return score(i, Unchanged(marked[i]), samples[i]);
    }));
    add_row("none", 0.0, {samples});
  }
  for (const CorruptionSpec& spec : options.specs) {
    const int reps =
        spec.kind == CorruptionKind::kDelete ? 1 : std::max(1, options.replicates);
    std::vector<std::vector<Sample>> all(reps, std::vector<Sample>(n));
    for (int r = 0; r < reps; ++r) {
      NLWM_RETURN_IF_ERROR(
          ParallelFor(n, options.jobs, [&](int i) -> absl::Status {
            absl::StatusOr<Corruption> c =
                Corrupt(marked[i], spec, i, r, &backend);
            if (IsKind(c.status(), ErrorKind::kNothingToCorrupt) ||
                IsKind(c.status(), ErrorKind::kEmptyInput)) {
              c = Unchanged(marked[i]);
            }
            if (!c.ok()) return c.status();
            return score(i, *c, all[r][i]);
          }));
    }
    add_row(spec.ToString(), spec.cr, all);
  }
  report.counters = backend.counters();
  return report;
}

Json EvaluationReport::ToJson() const {
  Json rows_json = Json::array();
  for (const CorruptionRow& r : rows) {
    rows_json.push_back({{"spec", r.spec},
                         {"cr", r.cr},
                         {"replicates", r.replicates},
                         {"ber", RateOrNull(r.ber, r.bits)},
                         {"r_g1", r.r_g1},
                         {"r_g2", r.r_g2},
                         {"errors", r.errors},
                         {"bits", r.bits},
                         {"edited", r.edited},
                         {"unedited", r.unedited},
                         {"below_floor", r.below_floor}});
  }
  Json calls = Json::object();
  for (int op = 0; op < kOpCount; ++op) {
    calls[std::string(OpName(static_cast<Op>(op)))] = counters.calls[op];
  }
  calls["cache_hits"] = counters.cache_hits;
  return Json{{"sentences", sentences},
              {"words", words},
              {"capacity_bits", capacity_bits},
              {"message_bits", message_bits},
              {"bpw", bpw},
              {"es", es ? Json(*es) : Json(nullptr)},
              {"ss", ss ? Json(*ss) : Json(nullptr)},
              {"rows", rows_json},
              {"config", config},
              {"backend_calls", calls}};
}

std::string EvaluationReport::ToCsv() const {
  std::string out = "spec,cr,replicates,ber,r_g1,r_g2,bpw\n";
  for (const CorruptionRow& r : rows) {
    out += r.spec + "," + FormatRate(r.cr) + "," + std::to_string(r.replicates) +
           "," + (r.bits == 0 ? "" : FormatRate(r.ber)) + "," +
           FormatRate(r.r_g1) + "," + FormatRate(r.r_g2) + "," +
           FormatRate(bpw) + "\n";
  }
  return out;
}

}  // namespace nlwm
