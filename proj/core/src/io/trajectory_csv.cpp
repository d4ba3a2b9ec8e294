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

#include "uniped/io/trajectory_csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "uniped/errors.hpp"

namespace uniped::io {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<std::string> header_columns(int n, int nc) {
  std::vector<std::string> cols = {"k",   "t",   "p_x", "p_y", "p_z"};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      cols.push_back("R" + std::to_string(r) + std::to_string(c));
    }
  }
  for (const char* v : {"v_x", "v_y", "v_z", "w_x", "w_y", "w_z"}) {
    cols.push_back(v);
  }
  for (int j = 0; j < n; ++j) cols.push_back("q_" + std::to_string(j));
  for (int i = 0; i < nc; ++i) {
    const std::string s = std::to_string(i);
    for (const char* v : {"x", "y", "z"}) {
      cols.push_back("r_" + s + v);
    }
    for (const char* v : {"x", "y", "z"}) {
      cols.push_back("f_" + s + v);
    }
    cols.push_back("c_" + s);
  }
  return cols;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream in(line);
  while (std::getline(in, token, ',')) out.push_back(token);
  return out;
}

}  // namespace

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write file: " + tmp);
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

void write_trajectory_csv(const std::string& path,
                          const trajopt::ContactSchedule& schedule,
                          const trajopt::DecisionVariables& vars) {
  const int N = vars.layout.N;
  const int n = vars.layout.n;
  const int nc = vars.layout.nc;
  std::ostringstream out;

  const auto cols = header_columns(n, nc);
  for (size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << "\n";

  for (int k = 0; k < N; ++k) {
    out << k << "," << fmt(k * schedule.dt);
    const Eigen::Vector3d p = vars.p(k);
    for (int d = 0; d < 3; ++d) out << "," << fmt(p(d));
    const Eigen::Matrix3d R = vars.R(k);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) out << "," << fmt(R(r, c));
    }
    const Eigen::Vector3d v = vars.v(k);
    for (int d = 0; d < 3; ++d) out << "," << fmt(v(d));
    const Eigen::Vector3d w = vars.w(k);
    for (int d = 0; d < 3; ++d) out << "," << fmt(w(d));
    const Eigen::VectorXd q = vars.q(k);
    for (int j = 0; j < n; ++j) out << "," << fmt(q(j));
    for (int i = 0; i < nc; ++i) {
      const Eigen::Vector3d r = vars.r(k, i);
      const Eigen::Vector3d f = vars.f(k, i);
      for (int d = 0; d < 3; ++d) out << "," << fmt(r(d));
      for (int d = 0; d < 3; ++d) out << "," << fmt(f(d));
      out << "," << (schedule.active(k, i) ? 1 : 0);
    }
    out << "\n";
  }
  write_text_atomic(path, out.str());
}

TrajectoryFileData read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trajectory file: " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError(path + ": empty trajectory file");
  }
  const auto header = split_csv(line);

  // Infer the joint and contact counts from the header.
  int n = 0, nc = 0;
  for (const auto& h : header) {
    if (h.rfind("q_", 0) == 0) ++n;
    if (h.rfind("c_", 0) == 0) ++nc;
  }
  const auto expected = header_columns(n, nc);
  if (header.size() != expected.size()) {
    throw ConfigError(path + ": header has " + std::to_string(header.size()) +
                      " columns, expected " + std::to_string(expected.size()));
  }
  for (size_t i = 0; i < expected.size(); ++i) {
    if (header[i] != expected[i]) {
      throw ConfigError(path + ": unexpected column '" + header[i] +
                        "' where '" + expected[i] + "' belongs");
    }
  }

  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
    const auto tokens = split_csv(line);
    if (tokens.size() != expected.size()) {
      const size_t at = std::min(tokens.size(), expected.size() - 1);
      throw ConfigError(path, line_no,
                        "row has " + std::to_string(tokens.size()) +
                            " columns, expected " +
                            std::to_string(expected.size()) + " (near column '" +
                            expected[at] + "')");
    }
    std::vector<double> row(tokens.size());
    for (size_t i = 0; i < tokens.size(); ++i) {
      try {
        row[i] = std::stod(tokens[i]);
      } catch (const std::logic_error&) {
        throw ConfigError(path, line_no,
                          "malformed number in column '" + expected[i] + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) {
    throw ConfigError(path + ": trajectory needs at least two knots");
  }

  const int N = static_cast<int>(rows.size());
  TrajectoryFileData data;
  data.vars = trajopt::DecisionVariables(trajopt::VarLayout{N, n, nc});
  data.t.resize(N);
  data.contact_active.resize(N, nc);
  for (int k = 0; k < N; ++k) {
    const auto& row = rows[k];
    int col = 1;  // skip k
    data.t(k) = row[col++];
    for (int d = 0; d < 3; ++d) data.vars.p(k)(d) = row[col++];
    Eigen::Matrix3d R;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) R(r, c) = row[col++];
    }
    data.vars.set_R(k, R);
    for (int d = 0; d < 3; ++d) data.vars.v(k)(d) = row[col++];
    for (int d = 0; d < 3; ++d) data.vars.w(k)(d) = row[col++];
    for (int j = 0; j < n; ++j) data.vars.q(k)(j) = row[col++];
    for (int i = 0; i < nc; ++i) {
      for (int d = 0; d < 3; ++d) data.vars.r(k, i)(d) = row[col++];
      for (int d = 0; d < 3; ++d) data.vars.f(k, i)(d) = row[col++];
      const double c = row[col++];
      if (c != 0.0 && c != 1.0) {
        throw ConfigError(path, k + 2, "contact flag c_" + std::to_string(i) +
                                            " must be 0 or 1");
      }
      data.contact_active(k, i) = static_cast<int>(c);
    }
  }
  data.dt = N > 1 ? data.t(1) - data.t(0) : 0.0;
  for (int k = 1; k < N; ++k) {
    if (data.t(k) <= data.t(k - 1)) {
      throw ConfigError(path + ": time column must be strictly increasing");
    }
  }
  return data;
}

}  // namespace uniped::io
