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

// JSON wire protocol spoken between the core and any model backend.
//
// Requests:
//   {"op":"infill","id":s,"text":s,"masks":[int],"k":int}
//   {"op":"parse","id":s,"words":[s]}
//   {"op":"ner","id":s,"words":[s]}
//   {"op":"nli","id":s,"premise":s,"hypothesis":s}
//   {"op":"embed","id":s,"text":s}
// Responses:
//   {"id":s,"ok":true,"result":{...}} or
//   {"id":s,"ok":false,"error":{"kind":s,"message":s}}
// Results:
//   infill: {"masks":[{"position":int,"candidates":
//              [{"token":s,"prob":num,"subword":bool}]}]}
//   parse:  {"words":[{"head":int|null,"label":s}]}
//   ner:    {"entities":[{"start":int,"end":int,"kind":s}]}   (end inclusive)
//   nli:    {"entailment":num}
//   embed:  {"vector":[num]}
//
// For infill, `text` is the sentence with every masked word replaced by
// kMaskToken; `masks` are word indices in that text.
//
// Unknown fields anywhere are a protocol violation. The request id is the
// first 16 hex digits of RequestDigest, so equal requests share an id.

#ifndef NLWM_WIRE_H_
#define NLWM_WIRE_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"

namespace nlwm {

using Json = nlohmann::json;

inline constexpr char kMaskToken[] = "[MASK]";

enum class Op { kInfill, kParse, kNer, kNli, kEmbed };
inline constexpr int kOpCount = 5;

std::string_view OpName(Op op);
absl::StatusOr<Op> ParseOp(std::string_view name);

// Canonical serialization: keys sorted, no insignificant whitespace, UTF-8
// emitted verbatim.
std::string CanonicalJson(const Json& value);

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view bytes);

// Lowercase hex SHA-256 of the canonical request with "id" removed.
std::string RequestDigest(const Json& request);

// Fills in "id" from the digest.
Json Stamp(Json request);

Json MakeInfillRequest(std::string_view masked_text,
                       const std::vector<int>& masks, int k);
Json MakeParseRequest(const std::vector<std::string>& words);
Json MakeNerRequest(const std::vector<std::string>& words);
Json MakeNliRequest(std::string_view premise, std::string_view hypothesis);
Json MakeEmbedRequest(std::string_view text);

Json OkResponse(const Json& request, Json result);
Json ErrorResponse(std::string_view id, std::string_view kind,
                   std::string_view message);

// Schema check of a request. Used by servers; violations are reported back
// as error replies.
absl::Status ValidateRequest(const Json& request);

// Checks the envelope of `response` against `request` and returns the
// result object. An error reply becomes BackendUnavailable, a malformed
// reply ProtocolViolation.
absl::StatusOr<Json> OpenResponse(const Json& request, const Json& response);

// Length-prefixed framing for stream transports: "<decimal length>\n<json>".
std::string Frame(std::string_view payload);

}  // namespace nlwm

#endif  // NLWM_WIRE_H_
