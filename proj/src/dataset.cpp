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

#include "pctadw/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pctadw/errors.hpp"

namespace pctadw {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

DirectedGraph::DirectedGraph(std::vector<std::string> names, std::vector<Edge> edges)
    : names_(std::move(names)), edges_(std::move(edges)) {
  const auto n = names_.size();
  index_.reserve(n);
  for (NodeId v = 0; v < n; ++v) {
    if (!index_.emplace(names_[v], v).second) {
      throw ValidationError("duplicate node name '" + names_[v] + "'");
    }
  }

  std::vector<std::string> problems;
  std::set<Edge> seen;
  for (const auto& e : edges_) {
    if (e.from >= n || e.to >= n) {
      throw ValidationError("edge references node id out of range");
    }
    if (e.from == e.to) {
      problems.push_back("self-loop " + names_[e.from]);
    } else if (!seen.insert(e).second) {
      problems.push_back("duplicate edge " + names_[e.from] + " -> " + names_[e.to]);
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid edges:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
  }

  out_adj_.assign(n, {});
  in_adj_.assign(n, {});
  for (const auto& e : edges_) {
    out_adj_[e.from].push_back(e.to);
    in_adj_[e.to].push_back(e.from);
  }
}

DirectedGraph DirectedGraph::from_edges(std::size_t node_count, std::vector<Edge> edges) {
  std::vector<std::string> names(node_count);
  for (std::size_t i = 0; i < node_count; ++i) names[i] = std::to_string(i);
  return DirectedGraph(std::move(names), std::move(edges));
}

std::optional<NodeId> DirectedGraph::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

DirectedGraph DirectedGraph::without_edges(const std::vector<Edge>& removed) const {
  std::set<Edge> drop(removed.begin(), removed.end());
  std::vector<Edge> kept;
  kept.reserve(edges_.size());
  for (const auto& e : edges_) {
    if (!drop.count(e)) kept.push_back(e);
  }
  return DirectedGraph(names_, std::move(kept));
}

WordId Vocabulary::intern(std::string_view word) {
  auto [it, inserted] = index_.try_emplace(std::string(word), static_cast<WordId>(words_.size()));
  if (inserted) {
    words_.emplace_back(word);
    counts_.push_back(0);
  }
  return it->second;
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

LabelSet::LabelSet(std::vector<std::string> names, Membership membership)
    : names_(std::move(names)), membership_(std::move(membership)) {
  if (static_cast<std::size_t>(membership_.cols()) != names_.size()) {
    throw ValidationError("label membership width does not match label count");
  }
}

std::vector<LabelId> LabelSet::labels_of(NodeId v) const {
  std::vector<LabelId> out;
  for (LabelId l = 0; l < label_count(); ++l) {
    if (membership_(v, l)) out.push_back(l);
  }
  return out;
}

DatasetPaths DatasetPaths::in_directory(const std::filesystem::path& dir) {
  return {dir / "edges.tsv", dir / "docs.tsv", dir / "labels.tsv"};
}

Dataset load_dataset(const DatasetPaths& paths, const LoadOptions& options) {
  Dataset ds;

  // Edges. Nodes are numbered by first appearance.
  std::vector<std::string> names;
  std::unordered_map<std::string, NodeId> ids;
  auto node_id = [&](std::string_view name) {
    auto [it, inserted] = ids.try_emplace(std::string(name), static_cast<NodeId>(names.size()));
    if (inserted) names.emplace_back(name);
    return it->second;
  };

  std::vector<Edge> edges;
  {
    auto in = open_input(paths.edges);
    const auto file = paths.edges.string();
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
      auto text = strip_cr(line);
      if (text.empty()) continue;
      auto fields = split(text, '\t');
      if (fields.size() > 2) throw ParseError(file, lineno, "expected 'parent<TAB>child'");
      for (auto f : fields) {
        if (f.empty()) throw ParseError(file, lineno, "empty node name");
      }
      auto from = node_id(fields[0]);
      if (fields.size() == 2) edges.push_back({from, node_id(fields[1])});
    }
  }
  ds.graph = DirectedGraph(std::move(names), std::move(edges));
  if (options.break_cycles) {
    auto removed = cycle_breaking_edges(ds.graph);
    if (!removed.empty()) ds.graph = ds.graph.without_edges(removed);
  }
  const auto n = ds.graph.node_count();

  auto lookup = [&](std::string_view name, const std::string& file, std::size_t lineno) {
    auto v = ds.graph.find(name);
    if (!v) {
      throw ValidationError(file + ":" + std::to_string(lineno) + ": unknown node '" +
                            std::string(name) + "'");
    }
    return *v;
  };

  // Documents. Tokens are collected first so min_count can prune.
  ds.raw_text.assign(n, std::nullopt);
  std::vector<std::vector<std::string>> words(n);
  {
    auto in = open_input(paths.docs);
    const auto file = paths.docs.string();
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
      auto text = strip_cr(line);
      if (text.empty()) continue;
      auto tab = text.find('\t');
      if (tab == std::string_view::npos || tab == 0) {
        throw ParseError(file, lineno, "expected 'node<TAB>text'");
      }
      auto v = lookup(text.substr(0, tab), file, lineno);
      if (ds.raw_text[v]) throw ParseError(file, lineno, "second document for node");
      ds.raw_text[v] = std::string(text.substr(tab + 1));
      words[v] = tokenize(*ds.raw_text[v], options.tokenizer);
    }
  }

  std::map<std::string, std::uint64_t> freq;
  if (options.tokenizer.min_count > 1) {
    for (const auto& doc : words)
      for (const auto& w : doc) ++freq[w];
  }
  ds.documents.assign(n, {});
  for (NodeId v = 0; v < n; ++v) {
    for (const auto& w : words[v]) {
      if (options.tokenizer.min_count > 1 && freq[w] < options.tokenizer.min_count) continue;
      auto id = ds.vocabulary.intern(w);
      ds.vocabulary.add_count(id);
      ds.documents[v].tokens.push_back(id);
    }
  }

  // Labels.
  std::vector<std::vector<std::string>> node_labels(n);
  std::set<std::string> label_names;
  {
    auto in = open_input(paths.labels);
    const auto file = paths.labels.string();
    std::string line;
    std::vector<bool> seen(n, false);
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
      auto text = strip_cr(line);
      if (text.empty()) continue;
      auto fields = split(text, '\t');
      if (fields.size() != 2 || fields[0].empty()) {
        throw ParseError(file, lineno, "expected 'node<TAB>label1,label2,...'");
      }
      auto v = lookup(fields[0], file, lineno);
      if (seen[v]) throw ParseError(file, lineno, "second label line for node");
      seen[v] = true;
      if (fields[1].empty()) continue;
      for (auto l : split(fields[1], ',')) {
        if (l.empty()) throw ParseError(file, lineno, "empty label name");
        node_labels[v].emplace_back(l);
        label_names.emplace(l);
      }
    }
  }
  std::vector<std::string> label_vec(label_names.begin(), label_names.end());
  LabelSet::Membership membership =
      LabelSet::Membership::Constant(static_cast<Eigen::Index>(n),
                                     static_cast<Eigen::Index>(label_vec.size()), false);
  for (NodeId v = 0; v < n; ++v) {
    for (const auto& l : node_labels[v]) {
      auto pos = std::lower_bound(label_vec.begin(), label_vec.end(), l) - label_vec.begin();
      membership(v, pos) = true;
    }
  }
  ds.labels = LabelSet(std::move(label_vec), std::move(membership));
  return ds;
}

void save_dataset(const Dataset& ds, const DatasetPaths& paths) {
  const auto& g = ds.graph;
  {
    auto out = open_output(paths.edges);
    std::vector<bool> mentioned(g.node_count(), false);
    for (const auto& e : g.edges()) {
      out << g.name(e.from) << '\t' << g.name(e.to) << '\n';
      mentioned[e.from] = mentioned[e.to] = true;
    }
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (!mentioned[v]) out << g.name(v) << '\n';
    }
  }
  {
    auto out = open_output(paths.docs);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (v < ds.raw_text.size() && ds.raw_text[v]) out << g.name(v) << '\t' << *ds.raw_text[v] << '\n';
    }
  }
  {
    auto out = open_output(paths.labels);
    for (NodeId v = 0; v < ds.labels.node_count(); ++v) {
      auto ls = ds.labels.labels_of(v);
      if (ls.empty()) continue;
      out << g.name(v) << '\t';
      for (std::size_t i = 0; i < ls.size(); ++i) {
        if (i) out << ',';
        out << ds.labels.name(ls[i]);
      }
      out << '\n';
    }
  }
  auto out = open_output(paths.edges.parent_path() / "manifest.json");
  out << dataset_manifest_json(ds) << '\n';
}

std::string dataset_manifest_json(const Dataset& ds) {
  nlohmann::ordered_json j;
  j["node_count"] = ds.graph.node_count();
  j["edge_count"] = ds.graph.edge_count();
  j["label_count"] = ds.labels.label_count();
  j["vocabulary_size"] = ds.vocabulary.size();
  std::size_t tokens = 0;
  for (const auto& d : ds.documents) tokens += d.length();
  j["token_count"] = tokens;
  j["nodes"] = ds.graph.names();
  j["labels"] = ds.labels.names();
  return j.dump(2);
}

}  // namespace pctadw
