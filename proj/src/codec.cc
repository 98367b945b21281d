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

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>
#include <thread>

#include "nlwm/status.h"

namespace nlwm {
namespace {

int MatchCount(const std::vector<std::string>& a,
               const std::vector<std::string>& b) {
  int n = 0;
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (AsciiLower(a[i]) == AsciiLower(b[i])) ++n;
  }
  return n;
}

// Highest match count, earliest index on ties. Elements must be nonempty.
size_t ClosestElement(const ValidSet& valid,
                      const std::vector<std::string>& words) {
  size_t best = 0;
  int best_matches = -1;
  for (size_t i = 0; i < valid.elements.size(); ++i) {
    const int m = MatchCount(valid.elements[i], words);
    if (m > best_matches) {
      best = i;
      best_matches = m;
    }
  }
  return best;
}

std::vector<std::string> WordsAt(const TokenizedSentence& sentence,
                                 const std::vector<int>& positions) {
  std::vector<std::string> out;
  for (int p : positions) out.push_back(sentence.word(p));
  return out;
}

}  // namespace

absl::Status ValidateCodecConfig(const CodecConfig& config) {
  if (config.k1 < 1) {
    return MakeError(ErrorKind::kDegenerateConfig, "k1 must be positive");
  }
  if (config.k2 < 2 || config.k2 > config.k1) {
    return MakeError(ErrorKind::kDegenerateConfig,
                     "k2 must satisfy 2 <= k2 <= k1");
  }
  if (config.enumeration_cap < 1) {
    return MakeError(ErrorKind::kDegenerateConfig,
                     "enumeration cap must be positive");
  }
  return ValidateAnchorConfig(config.anchor);
}

int CapacityBits(size_t n) {
  int bits = 0;
  while (n > 1) {
    n >>= 1;
    ++bits;
  }
  return bits;
}

absl::StatusOr<std::vector<CandidateSet>> BuildCandidateSets(
    const TokenizedSentence& sentence, const State& state,
    const CodecConfig& config, Backend& backend) {
  std::vector<CandidateSet> out;
  if (state.empty()) return out;
  NLWM_ASSIGN_OR_RETURN(
      std::vector<CandidateDist> dists,
      backend.InfillTopK(sentence, state.mask_positions, config.k1));
  for (const CandidateDist& dist : dists) {
    CandidateSet set{dist.mask_position, {}};
    std::set<std::string> seen;
    for (const Candidate& c : dist.entries) {
      if (static_cast<int>(set.tokens.size()) == config.k2) break;
      if (c.subword || !IsSingleWord(c.token)) continue;
      if (config.stopwords.Contains(c.token)) continue;
      if (!seen.insert(AsciiLower(c.token)).second) continue;
      set.tokens.push_back(c.token);
    }
    if (set.tokens.empty()) continue;
    std::sort(set.tokens.begin(), set.tokens.end());
    out.push_back(std::move(set));
  }
  return out;
}

absl::StatusOr<TokenizedSentence> ApplyTuple(
    const TokenizedSentence& sentence, const std::vector<int>& positions,
    const std::vector<std::string>& tuple) {
  std::map<int, std::string> assignments;
  for (size_t i = 0; i < positions.size(); ++i) {
    assignments[positions[i]] =
        MatchInitialCase(sentence.word(positions[i]), tuple[i]);
  }
  return Substitute(sentence, assignments);
}

absl::StatusOr<ValidSet> BuildValidSet(
    const TokenizedSentence& sentence, const State& state,
    const std::vector<CandidateSet>& sets, const CodecConfig& config,
    Backend& backend) {
  ValidSet valid;
  if (sets.empty()) return valid;
  size_t product = 1;
  for (const CandidateSet& s : sets) {
    valid.positions.push_back(s.mask_position);
    product *= s.tokens.size();
    if (product > static_cast<size_t>(config.enumeration_cap)) {
      return MakeError(ErrorKind::kProductTooLarge,
                       "candidate product exceeds " +
                           std::to_string(config.enumeration_cap));
    }
  }
  // Odometer with the last mask fastest gives lexicographic tuple order
  // because each set is sorted.
  std::vector<size_t> digit(sets.size(), 0);
  for (size_t step = 0; step < product; ++step) {
    std::vector<std::string> tuple;
    for (size_t m = 0; m < sets.size(); ++m) {
      tuple.push_back(sets[m].tokens[digit[m]]);
    }
    NLWM_ASSIGN_OR_RETURN(TokenizedSentence candidate,
                          ApplyTuple(sentence, valid.positions, tuple));
    NLWM_ASSIGN_OR_RETURN(State after,
                          ComputeState(candidate, config.anchor, backend));
    if (after == state) valid.elements.push_back(std::move(tuple));
    for (size_t m = sets.size(); m-- > 0;) {
      if (++digit[m] < sets[m].tokens.size()) break;
      digit[m] = 0;
    }
  }
  valid.capacity_bits = CapacityBits(valid.elements.size());
  return valid;
}

absl::StatusOr<SentencePlan> PlanSentence(const TokenizedSentence& sentence,
                                          const CodecConfig& config,
                                          Backend& backend) {
  SentencePlan plan;
  NLWM_ASSIGN_OR_RETURN(plan.state,
                        ComputeState(sentence, config.anchor, backend));
  NLWM_ASSIGN_OR_RETURN(
      plan.sets, BuildCandidateSets(sentence, plan.state, config, backend));
  NLWM_ASSIGN_OR_RETURN(plan.valid, BuildValidSet(sentence, plan.state,
                                                  plan.sets, config, backend));
  return plan;
}

std::string BitSource::Take(int n) {
  const size_t take = std::min(static_cast<size_t>(std::max(n, 0)), remaining());
  std::string out = bits_.substr(next_, take);
  next_ += take;
  return out;
}

std::string IndexToBits(size_t index, int width) {
  std::string out(width, '0');
  for (int i = 0; i < width; ++i) {
    if ((index >> (width - 1 - i)) & 1) out[i] = '1';
  }
  return out;
}

bool IsMessage(std::string_view bits) {
  return std::all_of(bits.begin(), bits.end(),
                     [](char c) { return c == '0' || c == '1'; });
}

absl::StatusOr<EmbedResult> EmbedWithPlan(const TokenizedSentence& sentence,
                                          const SentencePlan& plan,
                                          BitSource& bits) {
  EmbedResult result;
  result.record.original = sentence.text();
  result.record.positions = plan.state.mask_positions;
  result.record.capacity = plan.valid.capacity_bits;
  result.record.component = plan.state.component;
  const ValidSet& valid = plan.valid;
  if (valid.elements.empty()) {
    result.watermarked = sentence;
  } else {
    size_t index;
    if (valid.capacity_bits == 0) {
      index = ClosestElement(valid, WordsAt(sentence, valid.positions));
    } else {
      result.record.bits = bits.Take(valid.capacity_bits);
      std::string padded = result.record.bits;
      padded.resize(valid.capacity_bits, '0');
      index = std::stoull(padded, nullptr, 2);
    }
    NLWM_ASSIGN_OR_RETURN(
        result.watermarked,
        ApplyTuple(sentence, valid.positions, valid.elements[index]));
  }
  result.record.watermarked = result.watermarked.text();
  return result;
}

absl::StatusOr<EmbedResult> Embed(const TokenizedSentence& sentence,
                                  BitSource& bits, const CodecConfig& config,
                                  Backend& backend) {
  NLWM_ASSIGN_OR_RETURN(SentencePlan plan,
                        PlanSentence(sentence, config, backend));
  return EmbedWithPlan(sentence, plan, bits);
}

size_t DecodeIndex(const ValidSet& valid,
                   const std::vector<std::string>& observed) {
  if (valid.elements.empty()) return 0;
  const std::vector<std::string> folded = [&] {
    std::vector<std::string> v;
    for (const std::string& w : observed) v.push_back(AsciiLower(w));
    return v;
  }();
  for (size_t i = 0; i < valid.elements.size(); ++i) {
    if (MatchCount(valid.elements[i], folded) ==
        static_cast<int>(folded.size())) {
      return i % (size_t{1} << valid.capacity_bits);
    }
  }
  return ClosestElement(valid, folded) % (size_t{1} << valid.capacity_bits);
}

absl::StatusOr<SentenceRecord> ExtractWithPlan(const TokenizedSentence& sentence,
                                               const SentencePlan& plan) {
  SentenceRecord record;
  record.original = sentence.text();
  record.watermarked = sentence.text();
  record.positions = plan.state.mask_positions;
  record.capacity = plan.valid.capacity_bits;
  record.component = plan.state.component;
  if (plan.valid.capacity_bits > 0) {
    const size_t index =
        DecodeIndex(plan.valid, WordsAt(sentence, plan.valid.positions));
    record.bits = IndexToBits(index, plan.valid.capacity_bits);
  }
  return record;
}

absl::StatusOr<SentenceRecord> Extract(const TokenizedSentence& sentence,
                                       const CodecConfig& config,
                                       Backend& backend) {
  NLWM_ASSIGN_OR_RETURN(SentencePlan plan,
                        PlanSentence(sentence, config, backend));
  return ExtractWithPlan(sentence, plan);
}

Json SentenceRecord::ToJson() const {
  return Json{{"i", index},
              {"original", original},
              {"watermarked", watermarked},
              {"bits", bits},
              {"positions", positions},
              {"capacity", capacity},
              {"component", std::string(ComponentName(component))}};
}

absl::StatusOr<SentenceRecord> SentenceRecord::FromJson(const Json& value) {
  auto bad = [](const std::string& why) {
    return MakeError(ErrorKind::kIo, "run record: " + why);
  };
  static const std::set<std::string> kKeys = {
      "i", "original", "watermarked", "bits", "positions", "capacity",
      "component"};
  if (!value.is_object() || value.size() != kKeys.size()) {
    return bad("expected " + std::to_string(kKeys.size()) + " fields");
  }
  for (const auto& [key, v] : value.items()) {
    if (!kKeys.count(key)) return bad("unknown field " + key);
  }
  SentenceRecord r;
  try {
    r.index = value.at("i").get<int>();
    r.original = value.at("original").get<std::string>();
    r.watermarked = value.at("watermarked").get<std::string>();
    r.bits = value.at("bits").get<std::string>();
    r.positions = value.at("positions").get<std::vector<int>>();
    r.capacity = value.at("capacity").get<int>();
    NLWM_ASSIGN_OR_RETURN(
        r.component, ParseComponent(value.at("component").get<std::string>()));
  } catch (const Json::exception& e) {
    return bad(e.what());
  }
  if (!IsMessage(r.bits)) return bad("bits must be 0/1");
  return r;
}

std::string WatermarkRun::Bits() const {
  std::string out;
  for (const SentenceRecord& r : records) out += r.bits;
  return out;
}

long WatermarkRun::TotalCapacity() const {
  long total = 0;
  for (const SentenceRecord& r : records) total += r.capacity;
  return total;
}

std::string WatermarkRun::ToJsonl() const {
  std::string out;
  for (const SentenceRecord& r : records) {
    out += r.ToJson().dump(-1, ' ', false, Json::error_handler_t::strict);
    out += '\n';
  }
  return out;
}

absl::StatusOr<WatermarkRun> WatermarkRun::FromJsonl(std::string_view text) {
  WatermarkRun run;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty()) continue;
    Json value = Json::parse(line, nullptr, false);
    if (value.is_discarded()) {
      return MakeError(ErrorKind::kIo,
                       "line " + std::to_string(line_no) + " is not JSON");
    }
    NLWM_ASSIGN_OR_RETURN(SentenceRecord r, SentenceRecord::FromJson(value));
    run.records.push_back(std::move(r));
  }
  return run;
}

absl::Status ParallelFor(int n, int jobs,
                         const std::function<absl::Status(int)>& fn) {
  std::vector<absl::Status> results(n);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < n; i = next++) results[i] = fn(i);
  };
  const int threads = std::max(1, std::min(jobs, n));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  for (const absl::Status& s : results) {
    if (!s.ok()) return s;
  }
  return absl::OkStatus();
}

absl::StatusOr<WatermarkRun> EmbedCorpus(
    const std::vector<TokenizedSentence>& corpus, const std::string& message,
    const CodecConfig& config, Backend& backend, int jobs) {
  NLWM_RETURN_IF_ERROR(ValidateCodecConfig(config));
  if (!IsMessage(message)) {
    return MakeError(ErrorKind::kDegenerateConfig, "message must be 0/1");
  }
  const int n = static_cast<int>(corpus.size());
  std::vector<SentencePlan> plans(n);
  NLWM_RETURN_IF_ERROR(ParallelFor(n, jobs, [&](int i) -> absl::Status {
    NLWM_ASSIGN_OR_RETURN(plans[i], PlanSentence(corpus[i], config, backend));
    return absl::OkStatus();
  }));
  WatermarkRun run;
  BitSource bits(message);
  for (int i = 0; i < n; ++i) {
    NLWM_ASSIGN_OR_RETURN(EmbedResult r,
                          EmbedWithPlan(corpus[i], plans[i], bits));
    r.record.index = i;
    run.records.push_back(std::move(r.record));
  }
  return run;
}

absl::StatusOr<WatermarkRun> ExtractCorpus(
    const std::vector<TokenizedSentence>& corpus, const CodecConfig& config,
    Backend& backend, int jobs) {
  NLWM_RETURN_IF_ERROR(ValidateCodecConfig(config));
  const int n = static_cast<int>(corpus.size());
  WatermarkRun run;
  run.records.resize(n);
  NLWM_RETURN_IF_ERROR(ParallelFor(n, jobs, [&](int i) -> absl::Status {
    NLWM_ASSIGN_OR_RETURN(run.records[i], Extract(corpus[i], config, backend));
    run.records[i].index = i;
    return absl::OkStatus();
  }));
  return run;
}

}  // namespace nlwm
