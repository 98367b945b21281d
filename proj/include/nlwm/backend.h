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

// Typed client over a Transport. Every reply is schema-checked before it is
// handed to the rest of the library.

#ifndef NLWM_BACKEND_H_
#define NLWM_BACKEND_H_

#include <array>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "absl/status/statusor.h"
#include "nlwm/text.h"
#include "nlwm/wire.h"

namespace nlwm {

inline constexpr int kDefaultK1 = 32;

struct Candidate {
  std::string token;
  double prob = 0;
  bool subword = false;

  bool operator==(const Candidate&) const = default;
};

// Top-k infill distribution for one mask, ordered by prob descending then
// token ascending.
struct CandidateDist {
  int mask_position = 0;
  std::vector<Candidate> entries;

  bool operator==(const CandidateDist&) const = default;
};

inline constexpr int kRootHead = -1;

struct DepArc {
  int head = kRootHead;  // Word index, or kRootHead.
  std::string label;

  bool operator==(const DepArc&) const = default;
};

struct DepTree {
  std::vector<DepArc> arcs;  // One per word.

  bool operator==(const DepTree&) const = default;
};

struct EntitySpan {
  int start = 0;
  int end = 0;  // Inclusive.
  std::string kind;

  bool operator==(const EntitySpan&) const = default;
};

// Dependency labels a parser may return (ClearNLP style, as used by spaCy's
// English models). "ROOT" is reserved for the head-less word.
const std::set<std::string, std::less<>>& DependencyLabels();

class Transport {
 public:
  virtual ~Transport() = default;
  // Sends one stamped request and returns the raw reply. Implementations
  // must be safe to call from several threads.
  virtual absl::StatusOr<Json> Call(const Json& request) = 0;
};

// Result decoders. `request` is the request the result answers.
absl::StatusOr<std::vector<CandidateDist>> DecodeInfill(const Json& request,
                                                        const Json& result);
absl::StatusOr<DepTree> DecodeParse(const Json& request, const Json& result);
absl::StatusOr<std::vector<EntitySpan>> DecodeNer(const Json& request,
                                                  const Json& result);
absl::StatusOr<double> DecodeNli(const Json& result);
absl::StatusOr<std::vector<double>> DecodeEmbed(const Json& result);

// The sentence text with each listed word replaced by kMaskToken.
std::string MaskedText(const TokenizedSentence& sentence,
                       const std::vector<int>& mask_positions);

double Cosine(const std::vector<double>& a, const std::vector<double>& b);

class Backend {
 public:
  struct Counters {
    std::array<long, kOpCount> calls{};  // Requests that reached the transport.
    long cache_hits = 0;
  };

  // With `memoize`, identical requests are answered from memory after the
  // first round trip. Safe because every backend is deterministic.
  explicit Backend(std::shared_ptr<Transport> transport, bool memoize = true);

  Backend(const Backend&) = delete;
  Backend& operator=(const Backend&) = delete;

  // Masks all `mask_positions` at once and returns one distribution per mask,
  // in the order given.
  absl::StatusOr<std::vector<CandidateDist>> InfillTopK(
      const TokenizedSentence& sentence, const std::vector<int>& mask_positions,
      int k);
  absl::StatusOr<DepTree> ParseDependencies(const TokenizedSentence& sentence);
  absl::StatusOr<std::vector<EntitySpan>> RecognizeEntities(
      const TokenizedSentence& sentence);
  absl::StatusOr<double> NliEntail(std::string_view premise,
                                   std::string_view hypothesis);
  absl::StatusOr<std::vector<double>> EmbedSentence(std::string_view text);

  Counters counters() const;

 private:
  absl::StatusOr<Json> Roundtrip(const Json& request);

  std::shared_ptr<Transport> transport_;
  const bool memoize_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, Json> cache_;
  Counters counters_;
  int embed_dim_ = 0;  // First dimension seen; 0 until then.
};

}  // namespace nlwm

#endif  // NLWM_BACKEND_H_
