// Copyright 2026 The pctadw Authors.
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

#include "pctadw/embedding_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "pctadw/errors.hpp"

namespace pctadw {

void write_text_embedding(const std::filesystem::path& path, const std::vector<std::string>& names,
                          const Eigen::MatrixXf& vectors) {
  if (static_cast<Eigen::Index>(names.size()) != vectors.rows()) {
    throw ValidationError("name count does not match embedding rows");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << vectors.rows() << ' ' << vectors.cols() << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    out << names[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, vectors(i, j));
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(end - buf));
    }
    out << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());
}

NamedEmbedding read_text_embedding(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const auto file = path.string();
  std::string line;
  if (!std::getline(in, line)) throw ParseError(file, 1, "missing header");
  std::istringstream header(line);
  long long rows = -1, cols = -1;
  if (!(header >> rows >> cols) || rows < 0 || cols < 1) {
    throw ParseError(file, 1, "expected 'count dim' header");
  }
  NamedEmbedding e;
  e.names.reserve(static_cast<std::size_t>(rows));
  e.vectors.resize(rows, cols);
  for (long long i = 0; i < rows; ++i) {
    const auto lineno = static_cast<std::size_t>(i + 2);
    if (!std::getline(in, line)) throw ParseError(file, lineno, "missing row");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view rest(line);
    auto space = rest.find(' ');
    if (space == std::string_view::npos || space == 0) throw ParseError(file, lineno, "bad row");
    e.names.emplace_back(rest.substr(0, space));
    rest.remove_prefix(space + 1);
    for (long long j = 0; j < cols; ++j) {
      while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
      float value = 0;
      auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
      if (ec != std::errc()) throw ParseError(file, lineno, "bad value in column " + std::to_string(j + 1));
      e.vectors(i, j) = value;
      rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
    }
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    if (!rest.empty()) throw ParseError(file, lineno, "expected " + std::to_string(cols) + " values");
  }
  return e;
}

}  // namespace pctadw
