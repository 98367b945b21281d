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

// Run configuration as read from a JSON document or a named preset.

#ifndef NLWM_CONFIG_H_
#define NLWM_CONFIG_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "nlwm/codec.h"
#include "nlwm/wire.h"

namespace nlwm {

struct RunConfig {
  Component component = Component::kKeyword;
  double keyword_ratio = 0.06;
  int k1 = kDefaultK1;
  int k2 = 4;
  std::string ordering_file;  // Empty: built-in default ordering.
  bool discard_coordination = false;
  std::string stopword_file;  // Empty: built-in candidate list.
  std::string stopword_sha256;
  std::string backend;  // Transport spec; empty defers to flags and env.
  std::uint64_t seed = 1;
  int enumeration_cap = kDefaultEnumerationCap;

  Json ToJson() const;
  // Keys present in `value` override `base`. Unknown keys are rejected.
  static absl::StatusOr<RunConfig> FromJson(const Json& value,
                                            const RunConfig& base);
  static absl::StatusOr<RunConfig> FromJson(const Json& value);
  static absl::StatusOr<RunConfig> Load(const std::string& path,
                                        const RunConfig& base);
  static absl::StatusOr<RunConfig> Load(const std::string& path);

  // Resolves files and validates.
  absl::StatusOr<CodecConfig> ToCodecConfig() const;
};

struct Preset {
  std::string name;
  Component component;
  double keyword_ratio;
  int k2;
};

// Per-dataset settings, e.g. "imdb-keyword" or "dracula-syntactic".
const std::vector<Preset>& Presets();
absl::StatusOr<RunConfig> PresetConfig(std::string_view name);

}  // namespace nlwm

#endif  // NLWM_CONFIG_H_
