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

// Metrics and the corruption experiment.

#ifndef NLWM_EVAL_H_
#define NLWM_EVAL_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "nlwm/codec.h"
#include "nlwm/corrupt.h"

namespace nlwm {

struct BerCount {
  long errors = 0;
  long length = 0;  // max(|truth|, |extracted|)
};

// Mismatches over the common prefix plus every missing or surplus bit.
BerCount CountBitErrors(std::string_view truth, std::string_view extracted);

// EmptyTruth when `truth` is empty.
absl::StatusOr<double> BitErrorRate(std::string_view truth,
                                    std::string_view extracted);

// Consumed bits over the word count of the original sentences.
double BitsPerWord(const WatermarkRun& run);

// Each pair is (reference text, received text).
using TextPair = std::pair<TokenizedSentence, TokenizedSentence>;

absl::StatusOr<double> RobustnessG1(const std::vector<TextPair>& pairs,
                                    const AnchorConfig& config,
                                    Backend& backend, int jobs = 1);

absl::StatusOr<double> RobustnessG2(const std::vector<TextPair>& pairs,
                                    const CodecConfig& config,
                                    Backend& backend, int jobs = 1);

// Words and gaps whose editing can move the state: keywords, entity words,
// mask words, and for the keyword component every word and gap between a
// keyword and its mask.
absl::StatusOr<Protection> AnchorProtection(const TokenizedSentence& sentence,
                                            const AnchorConfig& config,
                                            Backend& backend);

// True when the corrupted text yields the same anchor inputs as the
// original: the same keyword and target counts, the same keyword and entity
// words at aligned positions, and, for the syntactic component, unchanged
// labels on surviving words with no edited word carrying a label the walk
// reaches.
absl::StatusOr<bool> AnchorFeaturesPreserved(const TokenizedSentence& original,
                                             const Corruption& corruption,
                                             const AnchorConfig& config,
                                             Backend& backend);

struct ExperimentOptions {
  std::vector<CorruptionSpec> specs;
  std::uint64_t message_seed = 1;
  // Samples per sentence for insert, substitute and charswap; delete uses 1.
  int replicates = 5;
  int jobs = 1;
  // Entailment and embedding similarity between original and watermarked.
  bool semantic_scores = false;
  Json config_echo = Json::object();
};

struct CorruptionRow {
  std::string spec;  // "none" for the uncorrupted row.
  double cr = 0;
  int replicates = 1;
  double ber = 0;
  double r_g1 = 0;
  double r_g2 = 0;
  long errors = 0;  // Summed over replicates.
  long bits = 0;
  long edited = 0;  // Sentence samples that received edits.
  long unedited = 0;
  long below_floor = 0;
};

struct EvaluationReport {
  int sentences = 0;
  long words = 0;
  long capacity_bits = 0;
  long message_bits = 0;
  double bpw = 0;
  std::optional<double> es;
  std::optional<double> ss;
  std::vector<CorruptionRow> rows;
  Json config = Json::object();
  Backend::Counters counters;

  Json ToJson() const;
  std::string ToCsv() const;
};

// Seeded uniform bits.
std::string RandomMessage(std::uint64_t seed, long length);

// Embeds a capacity-sized random message, then for the uncorrupted case and
// every spec corrupts, extracts and scores. BER pools errors and lengths
// over sentences within a replicate; replicate rates are averaged.
absl::StatusOr<EvaluationReport> RunExperiment(
    const std::vector<TokenizedSentence>& corpus, const CodecConfig& config,
    const ExperimentOptions& options, Backend& backend);

}  // namespace nlwm

#endif  // NLWM_EVAL_H_
