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

#include "nlwm/wire.h"

#include <array>
#include <initializer_list>
#include <set>

#include "nlwm/status.h"
#include "openssl/sha.h"

namespace nlwm {
namespace {

constexpr std::array<std::string_view, kOpCount> kOpNames = {
    "infill", "parse", "ner", "nli", "embed"};

absl::Status Violation(const std::string& message) {
  return MakeError(ErrorKind::kProtocolViolation, message);
}

// Rejects fields outside `allowed` and reports the first missing one of
// `allowed`.
absl::Status CheckFields(const Json& object, std::string_view where,
                         std::initializer_list<std::string_view> allowed) {
  if (!object.is_object()) {
    return Violation(std::string(where) + " is not an object");
  }
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (std::string_view name : allowed) known |= (key == name);
    if (!known) {
      return Violation("unknown field '" + key + "' in " + std::string(where));
    }
  }
  for (std::string_view name : allowed) {
    if (!object.contains(std::string(name))) {
      return Violation("missing field '" + std::string(name) + "' in " +
                       std::string(where));
    }
  }
  return absl::OkStatus();
}

bool IsStringArray(const Json& value) {
  if (!value.is_array()) return false;
  for (const Json& item : value) {
    if (!item.is_string()) return false;
  }
  return true;
}

}  // namespace

std::string_view OpName(Op op) { return kOpNames[static_cast<int>(op)]; }

absl::StatusOr<Op> ParseOp(std::string_view name) {
  for (int i = 0; i < kOpCount; ++i) {
    if (kOpNames[i] == name) return static_cast<Op>(i);
  }
  return Violation("unknown op '" + std::string(name) + "'");
}

std::string CanonicalJson(const Json& value) {
  return value.dump(-1, ' ', false, Json::error_handler_t::strict);
}

std::string Sha256Hex(std::string_view bytes) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(),
         digest);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * SHA256_DIGEST_LENGTH);
  for (unsigned char b : digest) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 15]);
  }
  return out;
}

std::string RequestDigest(const Json& request) {
  Json copy = request;
  copy.erase("id");
  return Sha256Hex(CanonicalJson(copy));
}

Json Stamp(Json request) {
  request["id"] = RequestDigest(request).substr(0, 16);
  return request;
}

Json MakeInfillRequest(std::string_view masked_text,
                       const std::vector<int>& masks, int k) {
  return Stamp(Json{{"op", "infill"},
                    {"text", std::string(masked_text)},
                    {"masks", masks},
                    {"k", k}});
}

Json MakeParseRequest(const std::vector<std::string>& words) {
  return Stamp(Json{{"op", "parse"}, {"words", words}});
}

Json MakeNerRequest(const std::vector<std::string>& words) {
  return Stamp(Json{{"op", "ner"}, {"words", words}});
}

Json MakeNliRequest(std::string_view premise, std::string_view hypothesis) {
  return Stamp(Json{{"op", "nli"},
                    {"premise", std::string(premise)},
                    {"hypothesis", std::string(hypothesis)}});
}

Json MakeEmbedRequest(std::string_view text) {
  return Stamp(Json{{"op", "embed"}, {"text", std::string(text)}});
}

Json OkResponse(const Json& request, Json result) {
  return Json{{"id", request.value("id", "")},
              {"ok", true},
              {"result", std::move(result)}};
}

Json ErrorResponse(std::string_view id, std::string_view kind,
                   std::string_view message) {
  return Json{{"id", std::string(id)},
              {"ok", false},
              {"error",
               {{"kind", std::string(kind)}, {"message", std::string(message)}}}};
}

absl::Status ValidateRequest(const Json& request) {
  if (!request.is_object() || !request.contains("op") ||
      !request["op"].is_string()) {
    return Violation("request without string 'op'");
  }
  NLWM_ASSIGN_OR_RETURN(Op op, ParseOp(request["op"].get<std::string>()));
  switch (op) {
    case Op::kInfill: {
      NLWM_RETURN_IF_ERROR(
          CheckFields(request, "infill request", {"op", "id", "text", "masks", "k"}));
      if (!request["text"].is_string()) return Violation("text must be a string");
      if (!request["k"].is_number_integer() || request["k"].get<int>() < 1) {
        return Violation("k must be a positive integer");
      }
      if (!request["masks"].is_array()) return Violation("masks must be an array");
      std::set<int> seen;
      for (const Json& m : request["masks"]) {
        if (!m.is_number_integer() || m.get<int>() < 0 ||
            !seen.insert(m.get<int>()).second) {
          return Violation("masks must be distinct non-negative integers");
        }
      }
      break;
    }
    case Op::kParse:
    case Op::kNer:
      NLWM_RETURN_IF_ERROR(CheckFields(request, "request", {"op", "id", "words"}));
      if (!IsStringArray(request["words"])) {
        return Violation("words must be an array of strings");
      }
      break;
    case Op::kNli:
      NLWM_RETURN_IF_ERROR(
          CheckFields(request, "nli request", {"op", "id", "premise", "hypothesis"}));
      if (!request["premise"].is_string() || !request["hypothesis"].is_string()) {
        return Violation("premise and hypothesis must be strings");
      }
      break;
    case Op::kEmbed:
      NLWM_RETURN_IF_ERROR(CheckFields(request, "embed request", {"op", "id", "text"}));
      if (!request["text"].is_string()) return Violation("text must be a string");
      break;
  }
  if (!request["id"].is_string()) return Violation("id must be a string");
  return absl::OkStatus();
}

absl::StatusOr<Json> OpenResponse(const Json& request, const Json& response) {
  if (!response.is_object() || !response.contains("ok") ||
      !response["ok"].is_boolean()) {
    return Violation("response without boolean 'ok'");
  }
  const bool ok = response["ok"].get<bool>();
  NLWM_RETURN_IF_ERROR(CheckFields(response, "response",
                                   {"id", "ok", ok ? "result" : "error"}));
  if (response["id"] != request["id"]) {
    return Violation("response id " + response["id"].dump() +
                     " does not match request id " + request["id"].dump());
  }
  if (!ok) {
    const Json& error = response["error"];
    NLWM_RETURN_IF_ERROR(CheckFields(error, "error", {"kind", "message"}));
    if (!error["kind"].is_string() || !error["message"].is_string()) {
      return Violation("error kind and message must be strings");
    }
    return MakeError(ErrorKind::kBackendUnavailable,
                     "backend replied " + error["kind"].get<std::string>() +
                         ": " + error["message"].get<std::string>());
  }
  if (!response["result"].is_object()) {
    return Violation("result is not an object");
  }
  return absl::StatusOr<Json>(absl::in_place, response["result"]);
}

std::string Frame(std::string_view payload) {
  return std::to_string(payload.size()) + "\n" + std::string(payload);
}

}  // namespace nlwm
