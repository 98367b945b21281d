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

#include "nlwm/backend.h"

#include <algorithm>
#include <cmath>

#include "nlwm/status.h"

namespace nlwm {
namespace {

absl::Status Violation(const std::string& message) {
  return MakeError(ErrorKind::kProtocolViolation, message);
}

absl::Status ExactFields(const Json& object, std::string_view where,
                         std::initializer_list<std::string_view> fields) {
  if (!object.is_object() || object.size() != fields.size()) {
    return Violation(std::string(where) + " must have exactly " +
                     std::to_string(fields.size()) + " fields");
  }
  for (std::string_view f : fields) {
    if (!object.contains(std::string(f))) {
      return Violation(std::string(where) + " lacks '" + std::string(f) + "'");
    }
  }
  return absl::OkStatus();
}

bool IsUnitInterval(const Json& value) {
  if (!value.is_number()) return false;
  const double v = value.get<double>();
  return std::isfinite(v) && v >= 0.0 && v <= 1.0;
}

}  // namespace

const std::set<std::string, std::less<>>& DependencyLabels() {
  static const auto* const kLabels = new std::set<std::string, std::less<>>{
      "ROOT",  "acl",       "acomp",  "advcl",    "advmod",    "agent",
      "amod",  "appos",     "attr",   "aux",      "auxpass",   "case",
      "cc",    "ccomp",     "compound", "conj",   "csubj",     "csubjpass",
      "dative", "dep",      "det",    "dobj",     "expl",      "intj",
      "mark",  "meta",      "neg",    "nmod",     "npadvmod",  "nsubj",
      "nsubjpass", "nummod", "oprd",  "parataxis", "pcomp",    "pobj",
      "poss",  "preconj",   "predet", "prep",     "prt",       "punct",
      "quantmod", "relcl",  "xcomp",
  };
  return *kLabels;
}

absl::StatusOr<std::vector<CandidateDist>> DecodeInfill(const Json& request,
                                                        const Json& result) {
  NLWM_RETURN_IF_ERROR(ExactFields(result, "infill result", {"masks"}));
  const Json& masks = result["masks"];
  const Json& wanted = request["masks"];
  const int k = request["k"].get<int>();
  if (!masks.is_array() || masks.size() != wanted.size()) {
    return Violation("infill result has wrong number of masks");
  }
  std::vector<CandidateDist> out;
  for (size_t i = 0; i < masks.size(); ++i) {
    const Json& m = masks[i];
    NLWM_RETURN_IF_ERROR(ExactFields(m, "mask", {"position", "candidates"}));
    if (m["position"] != wanted[i]) {
      return Violation("mask " + std::to_string(i) + " answers position " +
                       m["position"].dump());
    }
    const Json& cands = m["candidates"];
    if (!cands.is_array() || cands.empty() ||
        cands.size() > static_cast<size_t>(k)) {
      return Violation("candidate count must be in [1, k]");
    }
    CandidateDist dist;
    dist.mask_position = wanted[i].get<int>();
    double total = 0;
    for (const Json& c : cands) {
      NLWM_RETURN_IF_ERROR(
          ExactFields(c, "candidate", {"token", "prob", "subword"}));
      if (!c["token"].is_string() || c["token"].get<std::string>().empty() ||
          !IsUnitInterval(c["prob"]) || !c["subword"].is_boolean()) {
        return Violation("malformed candidate " + c.dump());
      }
      Candidate cand{c["token"].get<std::string>(), c["prob"].get<double>(),
                     c["subword"].get<bool>()};
      if (!dist.entries.empty()) {
        const Candidate& prev = dist.entries.back();
        const bool ordered =
            prev.prob > cand.prob ||
            (prev.prob == cand.prob && prev.token < cand.token);
        if (!ordered) {
          return Violation("candidates out of order at '" + cand.token + "'");
        }
      }
      total += cand.prob;
      dist.entries.push_back(std::move(cand));
    }
    if (total > 1.0 + 1e-6) return Violation("candidate mass exceeds 1");
    out.push_back(std::move(dist));
  }
  return out;
}

absl::StatusOr<DepTree> DecodeParse(const Json& request, const Json& result) {
  NLWM_RETURN_IF_ERROR(ExactFields(result, "parse result", {"words"}));
  const Json& words = result["words"];
  const int n = static_cast<int>(request["words"].size());
  if (!words.is_array() || static_cast<int>(words.size()) != n) {
    return Violation("parse result has wrong number of words");
  }
  DepTree tree;
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const Json& w = words[i];
    NLWM_RETURN_IF_ERROR(ExactFields(w, "parse word", {"head", "label"}));
    if (!w["label"].is_string() ||
        DependencyLabels().count(w["label"].get<std::string>()) == 0) {
      return Violation("unknown dependency label " + w["label"].dump());
    }
    DepArc arc;
    arc.label = w["label"].get<std::string>();
    if (w["head"].is_null()) {
      ++roots;
      if (arc.label != "ROOT") return Violation("root word not labelled ROOT");
    } else {
      if (!w["head"].is_number_integer()) return Violation("head not integer");
      arc.head = w["head"].get<int>();
      if (arc.head < 0 || arc.head >= n || arc.head == i) {
        return Violation("head out of range for word " + std::to_string(i));
      }
      if (arc.label == "ROOT") return Violation("ROOT label on non-root word");
    }
    tree.arcs.push_back(std::move(arc));
  }
  if (n > 0 && roots != 1) {
    return Violation("parse has " + std::to_string(roots) + " roots");
  }
  for (int i = 0; i < n; ++i) {
    int at = i;
    int steps = 0;
    while (tree.arcs[at].head != kRootHead) {
      at = tree.arcs[at].head;
      if (++steps > n) return Violation("parse contains a cycle");
    }
  }
  return tree;
}

absl::StatusOr<std::vector<EntitySpan>> DecodeNer(const Json& request,
                                                  const Json& result) {
  NLWM_RETURN_IF_ERROR(ExactFields(result, "ner result", {"entities"}));
  const Json& entities = result["entities"];
  const int n = static_cast<int>(request["words"].size());
  if (!entities.is_array()) return Violation("entities is not an array");
  std::vector<EntitySpan> out;
  for (const Json& e : entities) {
    NLWM_RETURN_IF_ERROR(ExactFields(e, "entity", {"start", "end", "kind"}));
    if (!e["start"].is_number_integer() || !e["end"].is_number_integer() ||
        !e["kind"].is_string() || e["kind"].get<std::string>().empty()) {
      return Violation("malformed entity " + e.dump());
    }
    EntitySpan span{e["start"].get<int>(), e["end"].get<int>(),
                    e["kind"].get<std::string>()};
    if (span.start < 0 || span.start > span.end || span.end >= n) {
      return Violation("entity span out of bounds " + e.dump());
    }
    out.push_back(std::move(span));
  }
  std::sort(out.begin(), out.end(), [](const EntitySpan& a, const EntitySpan& b) {
    return a.start < b.start;
  });
  for (size_t i = 1; i < out.size(); ++i) {
    if (out[i].start <= out[i - 1].end) return Violation("overlapping entities");
  }
  return out;
}

absl::StatusOr<double> DecodeNli(const Json& result) {
  NLWM_RETURN_IF_ERROR(ExactFields(result, "nli result", {"entailment"}));
  if (!IsUnitInterval(result["entailment"])) {
    return Violation("entailment outside [0, 1]: " + result["entailment"].dump());
  }
  return result["entailment"].get<double>();
}

absl::StatusOr<std::vector<double>> DecodeEmbed(const Json& result) {
  NLWM_RETURN_IF_ERROR(ExactFields(result, "embed result", {"vector"}));
  const Json& v = result["vector"];
  if (!v.is_array() || v.empty()) return Violation("empty embedding");
  std::vector<double> out;
  out.reserve(v.size());
  for (const Json& x : v) {
    if (!x.is_number() || !std::isfinite(x.get<double>())) {
      return Violation("non-finite embedding component");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

std::string MaskedText(const TokenizedSentence& sentence,
                       const std::vector<int>& mask_positions) {
  std::map<int, std::string> masks;
  for (int p : mask_positions) masks[p] = kMaskToken;
  std::string out;
  int cursor = 0;
  for (const auto& [p, token] : masks) {
    const Token& t = sentence.word_token(p);
    out.append(sentence.text(), cursor, t.start - cursor);
    out.append(token);
    cursor = t.end;
  }
  out.append(sentence.text(), cursor, std::string::npos);
  return out;
}

double Cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0;
  return dot / std::sqrt(na * nb);
}

Backend::Backend(std::shared_ptr<Transport> transport, bool memoize)
    : transport_(std::move(transport)), memoize_(memoize) {}

absl::StatusOr<Json> Backend::Roundtrip(const Json& request) {
  const std::string key = memoize_ ? CanonicalJson(request) : std::string();
  if (memoize_) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) {
      ++counters_.cache_hits;
      return absl::StatusOr<Json>(absl::in_place, it->second);
    }
  }
  const Op op = ParseOp(request["op"].get<std::string>()).value();
  {
    std::lock_guard<std::mutex> lock(mu_);
    ++counters_.calls[static_cast<int>(op)];
  }
  NLWM_ASSIGN_OR_RETURN(Json response, transport_->Call(request));
  NLWM_ASSIGN_OR_RETURN(Json result, OpenResponse(request, response));
  if (memoize_) {
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(key, result);
  }
  return absl::StatusOr<Json>(absl::in_place, std::move(result));
}

absl::StatusOr<std::vector<CandidateDist>> Backend::InfillTopK(
    const TokenizedSentence& sentence, const std::vector<int>& mask_positions,
    int k) {
  if (k < 1) return MakeError(ErrorKind::kDegenerateConfig, "k must be >= 1");
  std::set<int> distinct;
  for (int p : mask_positions) {
    if (p < 0 || p >= sentence.word_count()) {
      return MakeError(ErrorKind::kIndexOutOfRange,
                       "mask position " + std::to_string(p));
    }
    if (!distinct.insert(p).second) {
      return MakeError(ErrorKind::kDegenerateConfig, "duplicate mask position");
    }
  }
  if (mask_positions.empty()) return std::vector<CandidateDist>{};
  const Json request =
      MakeInfillRequest(MaskedText(sentence, mask_positions), mask_positions, k);
  NLWM_ASSIGN_OR_RETURN(Json result, Roundtrip(request));
  return DecodeInfill(request, result);
}

absl::StatusOr<DepTree> Backend::ParseDependencies(
    const TokenizedSentence& sentence) {
  if (sentence.word_count() == 0) return DepTree{};
  const Json request = MakeParseRequest(sentence.WordSurfaces());
  NLWM_ASSIGN_OR_RETURN(Json result, Roundtrip(request));
  return DecodeParse(request, result);
}

absl::StatusOr<std::vector<EntitySpan>> Backend::RecognizeEntities(
    const TokenizedSentence& sentence) {
  if (sentence.word_count() == 0) return std::vector<EntitySpan>{};
  const Json request = MakeNerRequest(sentence.WordSurfaces());
  NLWM_ASSIGN_OR_RETURN(Json result, Roundtrip(request));
  return DecodeNer(request, result);
}

absl::StatusOr<double> Backend::NliEntail(std::string_view premise,
                                          std::string_view hypothesis) {
  const Json request = MakeNliRequest(premise, hypothesis);
  NLWM_ASSIGN_OR_RETURN(Json result, Roundtrip(request));
  return DecodeNli(result);
}

absl::StatusOr<std::vector<double>> Backend::EmbedSentence(
    std::string_view text) {
  const Json request = MakeEmbedRequest(text);
  NLWM_ASSIGN_OR_RETURN(Json result, Roundtrip(request));
  NLWM_ASSIGN_OR_RETURN(std::vector<double> vector, DecodeEmbed(result));
  std::lock_guard<std::mutex> lock(mu_);
  if (embed_dim_ == 0) embed_dim_ = static_cast<int>(vector.size());
  if (static_cast<int>(vector.size()) != embed_dim_) {
    return Violation("embedding dimension " + std::to_string(vector.size()) +
                     " differs from " + std::to_string(embed_dim_));
  }
  return vector;
}

Backend::Counters Backend::counters() const {
  std::lock_guard<std::mutex> lock(mu_);
  return counters_;
}

}  // namespace nlwm
