// Copyright 2026 The uniped Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uniped/config.hpp"

#include <gtest/gtest.h>

#include "uniped/errors.hpp"

namespace uniped {
namespace {

TEST(Config, ParsesNestedSectionsAndLists) {
  const std::string text = R"(format: 1
model:
  name: demo
  planar: true
link:
  name: a
  length: 0.5
link:
  name: b
  length: 40/9
)";
  const ConfigNode root = parse_config_text(text, "test");
  EXPECT_EQ(root.child("model").get_string("name"), "demo");
  EXPECT_TRUE(root.child("model").get_bool("planar", false));
  const auto links = root.all("link");
  ASSERT_EQ(links.size(), 2u);
  EXPECT_EQ(links[0]->get_string("name"), "a");
  EXPECT_DOUBLE_EQ(links[1]->get_double("length"), 40.0 / 9.0);
}

TEST(Config, RequiresFormatHeader) {
  EXPECT_THROW(parse_config_text("model:\n  name: x\n", "t"), ConfigError);
  EXPECT_THROW(parse_config_text("format: 2\n", "t"), ConfigError);
  EXPECT_THROW(parse_config_text("", "t"), ConfigError);
  EXPECT_NO_THROW(parse_config_text("format: 1\n", "t"));
}

TEST(Config, ErrorsCarryFileAndLine) {
  try {
    parse_config_text("format: 1\nbad line without colon\n", "myfile.cfg");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("myfile.cfg:2"), std::string::npos);
  }
}

TEST(Config, VectorsAndComments) {
  const ConfigNode root = parse_config_text(
      "format: 1\noffset: 1 2 3  # trailing comment\n", "t");
  const Eigen::Vector3d v = root.child("offset").as_vec3();
  EXPECT_EQ(v, Eigen::Vector3d(1, 2, 3));
}

TEST(Config, RejectsTabsAndDuplicateUniqueKeys) {
  EXPECT_THROW(parse_config_text("format: 1\n\tkey: 1\n", "t"), ConfigError);
  const ConfigNode root =
      parse_config_text("format: 1\nk: 1\nk: 2\n", "t");
  EXPECT_THROW(root.child("k"), ConfigError);  // repeated, child() is unique
  EXPECT_EQ(root.all("k").size(), 2u);
}

TEST(Config, RejectsChildrenUnderLeaf) {
  EXPECT_THROW(
      parse_config_text("format: 1\nkey: 1\n  nested: 2\n", "t"),
      ConfigError);
}

TEST(Config, MissingKeyNamesTheKey) {
  const ConfigNode root = parse_config_text("format: 1\nmodel:\n  a: 1\n", "t");
  try {
    root.child("model").get_double("mass");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("mass"), std::string::npos);
  }
}

}  // namespace
}  // namespace uniped
