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

#include "nlwm/config.h"

#include <fstream>
#include <sstream>

#include "nlwm/status.h"

namespace nlwm {

Json RunConfig::ToJson() const {
  return Json{{"component", std::string(ComponentName(component))},
              {"keyword_ratio", keyword_ratio},
              {"k1", k1},
              {"k2", k2},
              {"ordering_file", ordering_file},
              {"discard_coordination", discard_coordination},
              {"stopword_file", stopword_file},
              {"stopword_sha256", stopword_sha256},
              {"backend", backend},
              {"seed", seed},
              {"enumeration_cap", enumeration_cap}};
}

absl::StatusOr<RunConfig> RunConfig::FromJson(const Json& value,
                                              const RunConfig& base) {
  auto bad = [](const std::string& why) {
    return MakeError(ErrorKind::kDegenerateConfig, "config: " + why);
  };
  if (!value.is_object()) return bad("expected a JSON object");
  const Json known = base.ToJson();
  RunConfig c = base;
  for (const auto& [key, v] : value.items()) {
    if (!known.contains(key)) return bad("unknown key '" + key + "'");
    try {
      if (key == "component") {
        NLWM_ASSIGN_OR_RETURN(c.component, ParseComponent(v.get<std::string>()));
      } else if (key == "keyword_ratio") {
        if (!v.is_number()) return bad("keyword_ratio must be a number");
        c.keyword_ratio = v.get<double>();
      } else if (key == "k1" || key == "k2" || key == "enumeration_cap") {
        if (!v.is_number_integer()) return bad(key + " must be an integer");
        (key == "k1" ? c.k1 : key == "k2" ? c.k2 : c.enumeration_cap) =
            v.get<int>();
      } else if (key == "ordering_file") {
        c.ordering_file = v.get<std::string>();
      } else if (key == "discard_coordination") {
        if (!v.is_boolean()) return bad(key + " must be a boolean");
        c.discard_coordination = v.get<bool>();
      } else if (key == "stopword_file") {
        c.stopword_file = v.get<std::string>();
      } else if (key == "stopword_sha256") {
        c.stopword_sha256 = v.get<std::string>();
      } else if (key == "backend") {
        c.backend = v.get<std::string>();
      } else if (key == "seed") {
        if (!v.is_number_unsigned()) return bad("seed must be non-negative");
        c.seed = v.get<std::uint64_t>();
      }
    } catch (const Json::exception& e) {
      return bad(key + ": " + e.what());
    }
  }
  return c;
}

absl::StatusOr<RunConfig> RunConfig::Load(const std::string& path,
                                          const RunConfig& base) {
  std::ifstream in(path);
  if (!in) return MakeError(ErrorKind::kIo, "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json value = Json::parse(buffer.str(), nullptr, false);
  if (value.is_discarded()) {
    return MakeError(ErrorKind::kDegenerateConfig, path + " is not JSON");
  }
  return FromJson(value, base);
}

absl::StatusOr<RunConfig> RunConfig::FromJson(const Json& value) {
  return FromJson(value, RunConfig());
}

absl::StatusOr<RunConfig> RunConfig::Load(const std::string& path) {
  return Load(path, RunConfig());
}

absl::StatusOr<CodecConfig> RunConfig::ToCodecConfig() const {
  CodecConfig out;
  out.k1 = k1;
  out.k2 = k2;
  out.enumeration_cap = enumeration_cap;
  out.anchor.component = component;
  out.anchor.keyword_ratio = keyword_ratio;
  out.anchor.random_key = seed;
  if (!ordering_file.empty()) {
    NLWM_ASSIGN_OR_RETURN(out.anchor.ordering,
                          DependencyOrdering::Load(ordering_file));
  }
  if (discard_coordination) {
    out.anchor.ordering.discard_coordination = true;
    std::erase(out.anchor.ordering.labels, "cc");
  }
  if (!stopword_file.empty()) {
    NLWM_ASSIGN_OR_RETURN(out.stopwords,
                          LoadStopwordFile(stopword_file, stopword_sha256));
  }
  NLWM_RETURN_IF_ERROR(ValidateCodecConfig(out));
  return out;
}

const std::vector<Preset>& Presets() {
  static const auto* presets = new std::vector<Preset>{
      {"imdb-keyword", Component::kKeyword, 0.06, 4},
      {"imdb-syntactic", Component::kSyntactic, 0.05, 4},
      {"wikitext-keyword", Component::kKeyword, 0.06, 4},
      {"wikitext-syntactic", Component::kSyntactic, 0.07, 4},
      {"dracula-keyword", Component::kKeyword, 0.07, 4},
      {"dracula-syntactic", Component::kSyntactic, 0.03, 3},
      {"wh-keyword", Component::kKeyword, 0.05, 4},
      {"wh-syntactic", Component::kSyntactic, 0.03, 4},
  };
  return *presets;
}

absl::StatusOr<RunConfig> PresetConfig(std::string_view name) {
  for (const Preset& p : Presets()) {
    if (p.name == name) {
      RunConfig c;
      c.component = p.component;
      c.keyword_ratio = p.keyword_ratio;
      c.k2 = p.k2;
      return c;
    }
  }
  return MakeError(ErrorKind::kDegenerateConfig,
                   "unknown preset '" + std::string(name) + "'");
}

}  // namespace nlwm
