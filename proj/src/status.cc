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

#include "nlwm/status.h"

#include <array>
#include <string>

#include "absl/strings/cord.h"

namespace nlwm {
namespace {

constexpr char kPayloadUrl[] = "type.nlwm/error-kind";

struct KindInfo {
  ErrorKind kind;
  std::string_view name;
  absl::StatusCode code;
};

constexpr std::array<KindInfo, 11> kKinds = {{
    {ErrorKind::kEmptyInput, "EmptyInput", absl::StatusCode::kInvalidArgument},
    {ErrorKind::kIndexOutOfRange, "IndexOutOfRange",
     absl::StatusCode::kOutOfRange},
    {ErrorKind::kNonWordReplacement, "NonWordReplacement",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kBackendUnavailable, "BackendUnavailable",
     absl::StatusCode::kUnavailable},
    {ErrorKind::kProtocolViolation, "ProtocolViolation",
     absl::StatusCode::kDataLoss},
    {ErrorKind::kNoMaskAvailable, "NoMaskAvailable",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kProductTooLarge, "ProductTooLarge",
     absl::StatusCode::kResourceExhausted},
    {ErrorKind::kNothingToCorrupt, "NothingToCorrupt",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kEmptyTruth, "EmptyTruth", absl::StatusCode::kInvalidArgument},
    {ErrorKind::kDegenerateConfig, "DegenerateConfig",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kIo, "Io", absl::StatusCode::kNotFound},
}};

const KindInfo& Info(ErrorKind kind) {
  for (const KindInfo& info : kKinds) {
    if (info.kind == kind) return info;
  }
  return kKinds[0];
}

}  // namespace

std::string_view ErrorKindName(ErrorKind kind) { return Info(kind).name; }

absl::Status MakeError(ErrorKind kind, std::string_view message) {
  const KindInfo& info = Info(kind);
  absl::Status status(info.code, std::string(info.name) + ": " + std::string(message));
  status.SetPayload(kPayloadUrl, absl::Cord(std::string(info.name)));
  return status;
}

std::optional<ErrorKind> ErrorKindOf(const absl::Status& status) {
  absl::optional<absl::Cord> payload = status.GetPayload(kPayloadUrl);
  if (!payload.has_value()) return std::nullopt;
  const std::string name(*payload);
  for (const KindInfo& info : kKinds) {
    if (info.name == name) return info.kind;
  }
  return std::nullopt;
}

}  // namespace nlwm
