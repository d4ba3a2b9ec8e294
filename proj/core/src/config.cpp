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

#include <charconv>
#include <fstream>
#include <sstream>

#include "uniped/errors.hpp"

namespace uniped {
namespace {

std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const ConfigNode& at, const std::string& token) {
  // Exact fractions (e.g. 40/9) are allowed anywhere a number is.
  const size_t slash = token.find('/');
  try {
    if (slash != std::string::npos) {
      const double num = std::stod(token.substr(0, slash));
      const double den = std::stod(token.substr(slash + 1));
      if (den == 0.0) at.fail("division by zero in '" + token + "'");
      return num / den;
    }
    size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) at.fail("trailing junk in number '" + token + "'");
    return v;
  } catch (const std::logic_error&) {
    at.fail("expected a number, got '" + token + "'");
  }
}

}  // namespace

void ConfigNode::fail(const std::string& message) const {
  throw ConfigError(file, line, "key '" + key + "': " + message);
}

bool ConfigNode::has(const std::string& k) const {
  for (const auto& c : children) {
    if (c.key == k) return true;
  }
  return false;
}

const ConfigNode& ConfigNode::child(const std::string& k) const {
  const ConfigNode* found = nullptr;
  for (const auto& c : children) {
    if (c.key != k) continue;
    if (found) c.fail("repeated key; expected a single entry");
    found = &c;
  }
  if (!found) fail("missing required key '" + k + "'");
  return *found;
}

std::vector<const ConfigNode*> ConfigNode::all(const std::string& k) const {
  std::vector<const ConfigNode*> out;
  for (const auto& c : children) {
    if (c.key == k) out.push_back(&c);
  }
  return out;
}

double ConfigNode::as_double() const { return parse_number(*this, value); }

int ConfigNode::as_int() const {
  const double v = as_double();
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) fail("expected an integer");
  return i;
}

bool ConfigNode::as_bool() const {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  fail("expected true/false");
}

const std::string& ConfigNode::as_string() const {
  if (value.empty()) fail("expected a value, found a section");
  return value;
}

std::vector<double> ConfigNode::as_doubles() const {
  std::vector<double> out;
  std::istringstream in(value);
  std::string tok;
  while (in >> tok) out.push_back(parse_number(*this, tok));
  if (out.empty()) fail("expected one or more numbers");
  return out;
}

Eigen::Vector3d ConfigNode::as_vec3() const {
  const auto v = as_doubles();
  if (v.size() != 3) fail("expected exactly 3 numbers");
  return Eigen::Vector3d(v[0], v[1], v[2]);
}

std::vector<std::string> ConfigNode::as_strings() const {
  std::vector<std::string> out;
  std::istringstream in(value);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double ConfigNode::get_double(const std::string& k) const {
  return child(k).as_double();
}
double ConfigNode::get_double(const std::string& k, double fallback) const {
  return has(k) ? child(k).as_double() : fallback;
}
int ConfigNode::get_int(const std::string& k, int fallback) const {
  return has(k) ? child(k).as_int() : fallback;
}
bool ConfigNode::get_bool(const std::string& k, bool fallback) const {
  return has(k) ? child(k).as_bool() : fallback;
}
std::string ConfigNode::get_string(const std::string& k) const {
  return child(k).as_string();
}
std::string ConfigNode::get_string(const std::string& k,
                                   const std::string& fallback) const {
  return has(k) ? child(k).as_string() : fallback;
}
Eigen::Vector3d ConfigNode::get_vec3(const std::string& k,
                                     const Eigen::Vector3d& fallback) const {
  return has(k) ? child(k).as_vec3() : fallback;
}

ConfigNode parse_config_text(const std::string& text,
                             const std::string& origin) {
  ConfigNode root;
  root.key = "<root>";
  root.file = origin;
  root.value = " ";  // never looks like an empty leaf

  // Stack of (indent column, node) for the open sections.
  std::vector<std::pair<int, ConfigNode*>> stack{{-1, &root}};

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool saw_format = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const size_t hash = raw.find('#');
    std::string content = hash == std::string::npos ? raw : raw.substr(0, hash);
    if (strip(content).empty()) continue;
    if (content.find('\t') != std::string::npos) {
      throw ConfigError(origin, line_no, "tabs are not allowed; use spaces");
    }
    const int indent = static_cast<int>(content.find_first_not_of(' '));
    const std::string entry = strip(content);
    const size_t colon = entry.find(':');
    if (colon == std::string::npos) {
      throw ConfigError(origin, line_no, "expected 'key: value' or 'key:'");
    }
    ConfigNode node;
    node.key = strip(entry.substr(0, colon));
    node.value = strip(entry.substr(colon + 1));
    node.file = origin;
    node.line = line_no;
    if (node.key.empty()) {
      throw ConfigError(origin, line_no, "empty key");
    }

    if (!saw_format) {
      if (node.key != "format" || node.value != "1") {
        throw ConfigError(origin, line_no,
                          "first entry must be the header 'format: 1'");
      }
      saw_format = true;
      continue;
    }

    while (stack.size() > 1 && indent <= stack.back().first) stack.pop_back();
    if (indent > stack.back().first && stack.size() > 1 &&
        !stack.back().second->value.empty()) {
      throw ConfigError(origin, line_no,
                        "indentation under a leaf entry ('" +
                            stack.back().second->key + "' has a value)");
    }
    ConfigNode* parent = stack.back().second;
    parent->children.push_back(std::move(node));
    stack.emplace_back(indent, &parent->children.back());
  }
  if (!saw_format) {
    throw ConfigError(origin, 1, "missing mandatory 'format: 1' header");
  }
  return root;
}

ConfigNode parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

}  // namespace uniped
