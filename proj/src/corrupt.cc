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

#include "nlwm/corrupt.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "nlwm/random.h"
#include "nlwm/status.h"
#include "nlwm/toy_model.h"
#include "unicode/utf8.h"

namespace nlwm {
namespace {

constexpr int kContextualK = 16;

const std::vector<std::string>& Vocabulary() {
  static const auto* words = new std::vector<std::string>(ToyWordVocabulary());
  return *words;
}

std::vector<std::string> Split(std::string_view text, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t end = text.find(sep, start);
    out.emplace_back(text.substr(start, end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

std::optional<double> ParseDouble(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

struct CodePoint {
  int value;
  int start;
  int end;
};

std::vector<CodePoint> Decode(const std::string& word) {
  std::vector<CodePoint> out;
  const auto* s = reinterpret_cast<const uint8_t*>(word.data());
  const int32_t n = static_cast<int32_t>(word.size());
  int32_t i = 0;
  while (i < n) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, n, c);
    out.push_back({c, start, i});
  }
  return out;
}

// Start indices (in code points) of adjacent alphanumeric pairs that differ.
std::vector<int> SwappablePairs(const std::vector<CodePoint>& cps) {
  std::vector<int> out;
  for (size_t i = 0; i + 1 < cps.size(); ++i) {
    if (IsAlnumCodePoint(cps[i].value) && IsAlnumCodePoint(cps[i + 1].value) &&
        cps[i].value != cps[i + 1].value) {
      out.push_back(static_cast<int>(i));
    }
  }
  return out;
}

std::string SwapAt(const std::string& word, const std::vector<CodePoint>& cps,
                   int i) {
  const CodePoint& a = cps[i];
  const CodePoint& b = cps[i + 1];
  return word.substr(0, a.start) + word.substr(b.start, b.end - b.start) +
         word.substr(a.start, a.end - a.start) + word.substr(b.end);
}

std::vector<int> Pick(CounterRng& rng, const std::vector<int>& pool, int count) {
  std::vector<int> out;
  for (int i : rng.SampleDistinct(static_cast<int>(pool.size()), count)) {
    out.push_back(pool[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string VocabularyWordOtherThan(CounterRng& rng, std::string_view avoid) {
  const auto& vocab = Vocabulary();
  const std::string folded = AsciiLower(avoid);
  while (true) {
    const std::string& w = vocab[rng.Below(vocab.size())];
    if (w != folded) return w;
  }
}

// Random usable infill candidate different from `avoid`, if any.
std::optional<std::string> ContextualWord(CounterRng& rng,
                                          const CandidateDist& dist,
                                          std::string_view avoid) {
  std::vector<std::string> pool;
  for (const Candidate& c : dist.entries) {
    if (c.subword || !IsSingleWord(c.token)) continue;
    if (AsciiLower(c.token) == AsciiLower(avoid)) continue;
    pool.push_back(c.token);
  }
  if (pool.empty()) return std::nullopt;
  return pool[rng.Below(pool.size())];
}

absl::Status TooFew(int eligible, int budget) {
  return MakeError(ErrorKind::kNothingToCorrupt,
                   "only " + std::to_string(eligible) +
                       " editable words for a budget of " +
                       std::to_string(budget));
}

absl::StatusOr<Corruption> Draw(const TokenizedSentence& sentence,
                                const CorruptionSpec& spec, int budget,
                                CounterRng& rng, Backend* backend,
                                const Protection& protection) {
  const int n = sentence.word_count();
  Corruption out;
  out.edits = budget;
  std::vector<int> words;
  for (int i = 0; i < n; ++i) {
    if (!protection.words.count(i)) words.push_back(i);
  }
  switch (spec.kind) {
    case CorruptionKind::kDelete: {
      if (static_cast<int>(words.size()) < budget) {
        return TooFew(words.size(), budget);
      }
      out.touched = Pick(rng, words, budget);
      NLWM_ASSIGN_OR_RETURN(out.text, DeleteWords(sentence, out.touched));
      for (int i = 0; i < n; ++i) {
        if (!std::binary_search(out.touched.begin(), out.touched.end(), i)) {
          out.origin.push_back(i);
        }
      }
      return out;
    }
    case CorruptionKind::kInsert: {
      std::vector<int> gaps;
      for (int g = 0; g <= n; ++g) {
        if (!protection.gaps.count(g)) gaps.push_back(g);
      }
      if (static_cast<int>(gaps.size()) < budget) {
        return TooFew(gaps.size(), budget);
      }
      out.inserted_gaps = Pick(rng, gaps, budget);
      std::vector<std::pair<int, std::string>> gap_words;
      for (int g : out.inserted_gaps) {
        gap_words.emplace_back(g, VocabularyWordOtherThan(rng, ""));
      }
      NLWM_ASSIGN_OR_RETURN(out.text, InsertWords(sentence, gap_words));
      std::vector<int> new_positions;
      for (int g = 0; g <= n; ++g) {
        if (std::binary_search(out.inserted_gaps.begin(),
                               out.inserted_gaps.end(), g)) {
          new_positions.push_back(static_cast<int>(out.origin.size()));
          out.origin.push_back(-1);
        }
        if (g < n) out.origin.push_back(g);
      }
      if (spec.contextual) {
        NLWM_ASSIGN_OR_RETURN(
            std::vector<CandidateDist> dists,
            backend->InfillTopK(out.text, new_positions, kContextualK));
        std::map<int, std::string> assignment;
        for (size_t i = 0; i < dists.size(); ++i) {
          if (auto w = ContextualWord(rng, dists[i], "")) {
            assignment[new_positions[i]] = *w;
          }
        }
        NLWM_ASSIGN_OR_RETURN(out.text, Substitute(out.text, assignment));
      }
      return out;
    }
    case CorruptionKind::kSubstitute: {
      if (static_cast<int>(words.size()) < budget) {
        return TooFew(words.size(), budget);
      }
      out.touched = Pick(rng, words, budget);
      std::vector<CandidateDist> dists;
      if (spec.contextual) {
        NLWM_ASSIGN_OR_RETURN(
            dists, backend->InfillTopK(sentence, out.touched, kContextualK));
      }
      std::map<int, std::string> assignment;
      for (size_t i = 0; i < out.touched.size(); ++i) {
        const std::string& old = sentence.word(out.touched[i]);
        std::optional<std::string> w;
        if (spec.contextual) w = ContextualWord(rng, dists[i], old);
        if (!w) w = VocabularyWordOtherThan(rng, old);
        assignment[out.touched[i]] = MatchInitialCase(old, *w);
      }
      NLWM_ASSIGN_OR_RETURN(out.text, Substitute(sentence, assignment));
      for (int i = 0; i < n; ++i) out.origin.push_back(i);
      return out;
    }
    case CorruptionKind::kCharSwap: {
      std::vector<int> swappable;
      for (int i : words) {
        if (!SwappablePairs(Decode(sentence.word(i))).empty()) {
          swappable.push_back(i);
        }
      }
      if (static_cast<int>(swappable.size()) < budget) {
        return TooFew(swappable.size(), budget);
      }
      out.touched = Pick(rng, swappable, budget);
      std::map<int, std::string> assignment;
      for (int p : out.touched) {
        const std::string& word = sentence.word(p);
        const auto cps = Decode(word);
        const auto pairs = SwappablePairs(cps);
        assignment[p] = SwapAt(word, cps, pairs[rng.Below(pairs.size())]);
      }
      NLWM_ASSIGN_OR_RETURN(out.text, Substitute(sentence, assignment));
      for (int i = 0; i < n; ++i) out.origin.push_back(i);
      return out;
    }
  }
  return MakeError(ErrorKind::kDegenerateConfig, "unknown corruption kind");
}

}  // namespace

std::string_view CorruptionKindName(CorruptionKind kind) {
  switch (kind) {
    case CorruptionKind::kInsert:
      return "insert";
    case CorruptionKind::kDelete:
      return "delete";
    case CorruptionKind::kSubstitute:
      return "substitute";
    case CorruptionKind::kCharSwap:
      return "charswap";
  }
  return "?";
}

std::string CorruptionSpec::ToString() const {
  std::ostringstream out;
  out << CorruptionKindName(kind) << ':' << cr << ':' << seed;
  if (similarity_floor) out << ':' << *similarity_floor;
  return out.str();
}

absl::StatusOr<CorruptionSpec> ParseCorruptionSpec(std::string_view text) {
  auto bad = [&](const std::string& why) {
    return MakeError(ErrorKind::kDegenerateConfig,
                     "corruption spec '" + std::string(text) + "': " + why);
  };
  const std::vector<std::string> parts = Split(text, ':');
  if (parts.size() < 3 || parts.size() > 4) {
    return bad("expected kind:cr:seed[:floor]");
  }
  CorruptionSpec spec;
  const std::string kind = AsciiLower(parts[0]);
  bool known = false;
  for (CorruptionKind k :
       {CorruptionKind::kInsert, CorruptionKind::kDelete,
        CorruptionKind::kSubstitute, CorruptionKind::kCharSwap}) {
    if (CorruptionKindName(k) == kind) {
      spec.kind = k;
      known = true;
    }
  }
  if (!known) return bad("unknown kind");
  const auto cr = ParseDouble(parts[1]);
  if (!cr || *cr < 0 || *cr > 1) return bad("cr must be in [0, 1]");
  spec.cr = *cr;
  if (parts[2].empty() ||
      parts[2].find_first_not_of("0123456789") != std::string::npos) {
    return bad("seed must be a non-negative integer");
  }
  errno = 0;
  spec.seed = std::strtoull(parts[2].c_str(), nullptr, 10);
  if (errno == ERANGE) return bad("seed out of range");
  if (parts.size() == 4) {
    const auto floor = ParseDouble(parts[3]);
    if (!floor || *floor <= 0 || *floor > 1) {
      return bad("floor must be in (0, 1]");
    }
    spec.similarity_floor = *floor;
  }
  return spec;
}

absl::StatusOr<std::vector<CorruptionSpec>> ParseCorruptionSpecs(
    std::string_view text) {
  std::vector<CorruptionSpec> out;
  for (const std::string& part : Split(text, ',')) {
    if (part.empty()) continue;
    NLWM_ASSIGN_OR_RETURN(CorruptionSpec spec, ParseCorruptionSpec(part));
    out.push_back(spec);
  }
  return out;
}

int EditBudget(double cr, int word_count) {
  return RatioCount(cr, word_count);
}

Corruption Unchanged(const TokenizedSentence& sentence) {
  Corruption out;
  out.text = sentence;
  out.attempts = 0;
  for (int i = 0; i < sentence.word_count(); ++i) out.origin.push_back(i);
  return out;
}

absl::StatusOr<Corruption> Corrupt(const TokenizedSentence& sentence,
                                   const CorruptionSpec& spec, int index,
                                   int replicate, Backend* backend,
                                   const Protection& protection) {
  if (sentence.word_count() == 0) {
    return MakeError(ErrorKind::kEmptyInput, "sentence has no words");
  }
  if ((spec.similarity_floor || spec.contextual) && backend == nullptr) {
    return MakeError(ErrorKind::kDegenerateConfig,
                     "similarity floor and contextual words need a backend");
  }
  const int budget = EditBudget(spec.cr, sentence.word_count());
  if (budget == 0) {
    return MakeError(ErrorKind::kNothingToCorrupt,
                     "edit budget rounds to zero");
  }
  std::vector<double> reference;
  if (spec.similarity_floor) {
    NLWM_ASSIGN_OR_RETURN(reference, backend->EmbedSentence(sentence.text()));
  }
  const int draws = spec.similarity_floor ? 1 + std::max(spec.retries, 0) : 1;
  Corruption last;
  for (int attempt = 0; attempt < draws; ++attempt) {
    CounterRng rng({spec.seed, static_cast<std::uint64_t>(index),
                    static_cast<std::uint64_t>(attempt),
                    static_cast<std::uint64_t>(replicate),
                    static_cast<std::uint64_t>(spec.kind)});
    NLWM_ASSIGN_OR_RETURN(
        last, Draw(sentence, spec, budget, rng, backend, protection));
    last.attempts = attempt + 1;
    if (!spec.similarity_floor) return last;
    double similarity = 0.0;
    if (last.text.word_count() > 0) {
      NLWM_ASSIGN_OR_RETURN(std::vector<double> v,
                            backend->EmbedSentence(last.text.text()));
      similarity = Cosine(reference, v);
    }
    if (similarity >= *spec.similarity_floor) return last;
  }
  last.passed_floor = false;
  return last;
}

}  // namespace nlwm
