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

#ifndef NLWM_STATUS_H_
#define NLWM_STATUS_H_

#include <optional>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace nlwm {

// Domain error kinds. Each is carried as a payload on an absl::Status whose
// canonical code is chosen to match (see MakeError).
enum class ErrorKind {
  kEmptyInput,
  kIndexOutOfRange,
  kNonWordReplacement,
  kBackendUnavailable,
  kProtocolViolation,
  kNoMaskAvailable,
  kProductTooLarge,
  kNothingToCorrupt,
  kEmptyTruth,
  kDegenerateConfig,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

absl::Status MakeError(ErrorKind kind, std::string_view message);

// Returns the domain kind attached to `status`, if any.
std::optional<ErrorKind> ErrorKindOf(const absl::Status& status);

inline bool IsKind(const absl::Status& status, ErrorKind kind) {
  return ErrorKindOf(status) == kind;
}

}  // namespace nlwm

#define NLWM_STATUS_CONCAT_INNER_(a, b) a##b
#define NLWM_STATUS_CONCAT_(a, b) NLWM_STATUS_CONCAT_INNER_(a, b)

#define NLWM_RETURN_IF_ERROR(expr)             \
  do {                                         \
    ::absl::Status nlwm_status_ = (expr);      \
    if (!nlwm_status_.ok()) return nlwm_status_; \
  } while (0)

#define NLWM_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                                \
  if (!tmp.ok()) return tmp.status();               \
  lhs = std::move(tmp).value()

#define NLWM_ASSIGN_OR_RETURN(lhs, expr) \
  NLWM_ASSIGN_OR_RETURN_IMPL_(           \
      NLWM_STATUS_CONCAT_(nlwm_statusor_, __LINE__), lhs, expr)

#endif  // NLWM_STATUS_H_
