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

#ifndef UNIPED_CONFIG_HPP_
#define UNIPED_CONFIG_HPP_

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace uniped {

// Line-oriented configuration tree.
//
// Syntax, one entry per line:
//   key: value        leaf entry
//   key:              opens a nested section; children are indented deeper
//   # ...             comment (also allowed after a value)
//
// Repeated keys are allowed and preserved in order (used for link:/joint:/
// contact: lists). Numeric values accept plain decimals and exact fractions
// such as 40/9. The first non-comment line of a file must be `format: 1`.
class ConfigNode {
 public:
  std::string key;
  std::string value;  // empty for section nodes
  std::string file;
  int line = 0;
  std::vector<ConfigNode> children;

  bool is_section() const { return value.empty() && !children.empty(); }
  bool has(const std::string& key) const;

  /// Unique child lookup; throws ConfigError if missing or repeated.
  const ConfigNode& child(const std::string& key) const;
  /// All children with the given key, in file order.
  std::vector<const ConfigNode*> all(const std::string& key) const;

  // Typed accessors on this node's value.
  double as_double() const;
  int as_int() const;
  bool as_bool() const;
  const std::string& as_string() const;
  std::vector<double> as_doubles() const;
  Eigen::Vector3d as_vec3() const;
  std::vector<std::string> as_strings() const;

  // Convenience: child(key).as_*() with optional defaults.
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  Eigen::Vector3d get_vec3(const std::string& key,
                           const Eigen::Vector3d& fallback) const;

  [[noreturn]] void fail(const std::string& message) const;
};

/// Parses configuration text. `origin` is used in error messages.
/// Requires the leading `format: 1` header.
ConfigNode parse_config_text(const std::string& text,
                             const std::string& origin);

/// Reads and parses a configuration file.
ConfigNode parse_config_file(const std::string& path);

}  // namespace uniped

#endif  // UNIPED_CONFIG_HPP_
