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

#include "pctadw/analogy.hpp"

#include <fstream>
#include <unordered_map>

namespace pctadw {

std::vector<std::size_t> cumulative_histogram(const std::vector<AnalogyTest>& tests,
                                              std::size_t node_count) {
  std::vector<std::size_t> hist(node_count, 0);
  for (const auto& t : tests) {
    if (t.rank >= 1 && t.rank <= node_count) ++hist[t.rank - 1];
  }
  for (std::size_t r = 1; r < hist.size(); ++r) hist[r] += hist[r - 1];
  return hist;
}

AnalogyPair resolve_pair(std::string_view first, std::string_view second,
                         const std::vector<std::string>& names) {
  auto find = [&](std::string_view name) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return static_cast<NodeId>(i);
    }
    throw LookupError("unknown node '" + std::string(name) + "'");
  };
  return {find(first), find(second)};
}

std::vector<AnalogyPair> read_analogy_pairs(const std::string& path,
                                            const std::vector<std::string>& names) {
  std::unordered_map<std::string, NodeId> index;
  for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], static_cast<NodeId>(i));
  auto find = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw LookupError("unknown node '" + name + "'");
    return it->second;
  };

  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<AnalogyPair> pairs;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(path, lineno, "expected 'first<TAB>second'");
    }
    pairs.push_back({find(line.substr(0, tab)), find(line.substr(tab + 1))});
  }
  return pairs;
}

}  // namespace pctadw
