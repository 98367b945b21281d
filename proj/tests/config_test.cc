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

#include "gtest/gtest.h"
#include "nlwm/status.h"

namespace nlwm {
namespace {

TEST(RunConfigTest, JsonRoundTrip) {
  RunConfig c;
  c.component = Component::kSyntactic;
  c.keyword_ratio = 0.03;
  c.k2 = 3;
  c.seed = 12;
  auto back = RunConfig::FromJson(c.ToJson());
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->ToJson(), c.ToJson());
}

TEST(RunConfigTest, PartialDocumentOverridesBase) {
  RunConfig base;
  base.k2 = 3;
  auto c = RunConfig::FromJson(Json{{"k1", 16}}, base);
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c->k1, 16);
  EXPECT_EQ(c->k2, 3);
}

TEST(RunConfigTest, RejectsUnknownKeysAndBadTypes) {
  for (const Json& bad :
       {Json{{"k3", 1}}, Json{{"k2", "4"}}, Json{{"k2", 2.5}},
        Json{{"component", "semantic"}}, Json{{"seed", -1}},
        Json{{"discard_coordination", 1}}, Json::array()}) {
    EXPECT_TRUE(IsKind(RunConfig::FromJson(bad).status(),
                       ErrorKind::kDegenerateConfig))
        << bad.dump();
  }
}

TEST(RunConfigTest, CodecConfigIsValidated) {
  RunConfig c;
  c.k2 = 1;
  EXPECT_TRUE(IsKind(c.ToCodecConfig().status(), ErrorKind::kDegenerateConfig));
  c.k2 = 4;
  c.discard_coordination = true;
  c.seed = 5;
  auto codec = c.ToCodecConfig();
  ASSERT_TRUE(codec.ok());
  EXPECT_EQ(codec->anchor.random_key, 5u);
  EXPECT_TRUE(codec->anchor.ordering.discard_coordination);
  for (const std::string& label : codec->anchor.ordering.Effective()) {
    EXPECT_NE(label, "cc");
  }
}

TEST(RunConfigTest, MissingFilesAreIoErrors) {
  EXPECT_TRUE(IsKind(RunConfig::Load("/nonexistent/run.json").status(),
                     ErrorKind::kIo));
  RunConfig c;
  c.ordering_file = "/nonexistent/order.json";
  EXPECT_FALSE(c.ToCodecConfig().ok());
}

TEST(PresetTest, TableValues) {
  auto c = PresetConfig("dracula-syntactic");
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c->component, Component::kSyntactic);
  EXPECT_EQ(c->keyword_ratio, 0.03);
  EXPECT_EQ(c->k2, 3);
  c = PresetConfig("wikitext-syntactic");
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c->keyword_ratio, 0.07);
  EXPECT_EQ(Presets().size(), 8u);
  for (const Preset& p : Presets()) {
    auto config = PresetConfig(p.name);
    ASSERT_TRUE(config.ok());
    EXPECT_TRUE(config->ToCodecConfig().ok()) << p.name;
  }
  EXPECT_TRUE(IsKind(PresetConfig("imdb").status(), ErrorKind::kDegenerateConfig));
}

}  // namespace
}  // namespace nlwm
