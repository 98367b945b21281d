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

// Embedding and extraction. Messages are strings over {'0','1'}.

#ifndef NLWM_CODEC_H_
#define NLWM_CODEC_H_

#include <functional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "nlwm/anchor.h"
#include "nlwm/backend.h"
#include "nlwm/stopwords.h"
#include "nlwm/text.h"

namespace nlwm {

inline constexpr int kDefaultEnumerationCap = 4096;

struct CodecConfig {
  int k1 = kDefaultK1;
  int k2 = 4;
  AnchorConfig anchor;
  StopwordList stopwords = BuiltinCandidateStopwords();
  int enumeration_cap = kDefaultEnumerationCap;
};

absl::Status ValidateCodecConfig(const CodecConfig& config);

struct CandidateSet {
  int mask_position = 0;
  std::vector<std::string> tokens;  // Sorted, distinct.

  bool operator==(const CandidateSet&) const = default;
};

struct ValidSet {
  // Masks that kept at least one candidate; tuples follow this order.
  std::vector<int> positions;
  std::vector<std::vector<std::string>> elements;  // Lexicographic.
  int capacity_bits = 0;
};

// floor(log2(n)), 0 for n <= 1.
int CapacityBits(size_t n);

// Masks the whole state at once. Masks left with no candidate are omitted.
absl::StatusOr<std::vector<CandidateSet>> BuildCandidateSets(
    const TokenizedSentence& sentence, const State& state,
    const CodecConfig& config, Backend& backend);

// Product of the candidate sets, filtered to the tuples that leave
// ComputeState unchanged. ProductTooLarge past the enumeration cap.
absl::StatusOr<ValidSet> BuildValidSet(
    const TokenizedSentence& sentence, const State& state,
    const std::vector<CandidateSet>& sets, const CodecConfig& config,
    Backend& backend);

// Applies a tuple at `positions`, keeping the original's initial capital.
absl::StatusOr<TokenizedSentence> ApplyTuple(
    const TokenizedSentence& sentence, const std::vector<int>& positions,
    const std::vector<std::string>& tuple);

// Everything the codec derives from one sentence before bits are assigned.
struct SentencePlan {
  State state;
  std::vector<CandidateSet> sets;
  ValidSet valid;
};

absl::StatusOr<SentencePlan> PlanSentence(const TokenizedSentence& sentence,
                                          const CodecConfig& config,
                                          Backend& backend);

// Reads a message front to back; Take() returns fewer bits once exhausted.
class BitSource {
 public:
  explicit BitSource(std::string bits) : bits_(std::move(bits)) {}

  std::string Take(int n);
  size_t remaining() const { return bits_.size() - next_; }

 private:
  std::string bits_;
  size_t next_ = 0;
};

struct SentenceRecord {
  int index = 0;
  std::string original;
  std::string watermarked;
  std::string bits;  // Consumed while embedding, or read while extracting.
  std::vector<int> positions;
  int capacity = 0;
  Component component = Component::kKeyword;

  Json ToJson() const;
  static absl::StatusOr<SentenceRecord> FromJson(const Json& value);
};

struct EmbedResult {
  TokenizedSentence watermarked;
  SentenceRecord record;
};

// Consumes up to capacity bits. A short final chunk is padded with zeros for
// the index but only the real bits are reported as consumed.
absl::StatusOr<EmbedResult> Embed(const TokenizedSentence& sentence,
                                  BitSource& bits, const CodecConfig& config,
                                  Backend& backend);

// Embedding step once the plan is known.
absl::StatusOr<EmbedResult> EmbedWithPlan(const TokenizedSentence& sentence,
                                          const SentencePlan& plan,
                                          BitSource& bits);

absl::StatusOr<SentenceRecord> Extract(const TokenizedSentence& sentence,
                                       const CodecConfig& config,
                                       Backend& backend);

absl::StatusOr<SentenceRecord> ExtractWithPlan(const TokenizedSentence& sentence,
                                               const SentencePlan& plan);

// Index the extractor reads from an observed tuple: exact match if present
// (reduced modulo 2^capacity), otherwise the element agreeing at the most
// masks, earliest on ties.
size_t DecodeIndex(const ValidSet& valid,
                   const std::vector<std::string>& observed);

std::string IndexToBits(size_t index, int width);

bool IsMessage(std::string_view bits);

struct WatermarkRun {
  std::vector<SentenceRecord> records;

  std::string Bits() const;
  long TotalCapacity() const;
  std::string ToJsonl() const;
  static absl::StatusOr<WatermarkRun> FromJsonl(std::string_view text);
};

// Sentences are planned on `jobs` threads; bits are then assigned in order.
absl::StatusOr<WatermarkRun> EmbedCorpus(
    const std::vector<TokenizedSentence>& corpus, const std::string& message,
    const CodecConfig& config, Backend& backend, int jobs = 1);

absl::StatusOr<WatermarkRun> ExtractCorpus(
    const std::vector<TokenizedSentence>& corpus, const CodecConfig& config,
    Backend& backend, int jobs = 1);

// Runs fn(i) for i in [0, n) on up to `jobs` threads and returns the first
// error by index.
absl::Status ParallelFor(int n, int jobs,
                         const std::function<absl::Status(int)>& fn);

}  // namespace nlwm

#endif  // NLWM_CODEC_H_
