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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace pctadw {

using NodeId = std::uint32_t;
using WordId = std::uint32_t;
using LabelId = std::uint32_t;

/// u -> v: u depends on (points to) v.
struct Edge {
  NodeId from;
  NodeId to;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Named directed graph with dense node ids and both adjacency directions.
/// Immutable after construction; no self-loops, no duplicate edges.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  /// Throws ValidationError listing every self-loop and duplicate edge.
  DirectedGraph(std::vector<std::string> names, std::vector<Edge> edges);

  /// Unnamed graph; nodes are called "0", "1", ...
  static DirectedGraph from_edges(std::size_t node_count, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return names_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<NodeId>& out_adj(NodeId v) const { return out_adj_[v]; }
  const std::vector<NodeId>& in_adj(NodeId v) const { return in_adj_[v]; }
  std::size_t deg_out(NodeId v) const { return out_adj_[v].size(); }
  std::size_t deg_in(NodeId v) const { return in_adj_[v].size(); }

  const std::string& name(NodeId v) const { return names_[v]; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<NodeId> find(std::string_view name) const;

  /// Same nodes, without the listed edges.
  DirectedGraph without_edges(const std::vector<Edge>& removed) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> out_adj_;
  std::vector<std::vector<NodeId>> in_adj_;
};

/// Word <-> id table with corpus frequencies. Ids are assigned in order of
/// first occurrence.
class Vocabulary {
 public:
  /// Returns the id of `word`, adding it (with count 0) if absent.
  WordId intern(std::string_view word);
  void add_count(WordId id, std::uint64_t n = 1) { counts_[id] += n; }

  std::optional<WordId> find(std::string_view word) const;
  const std::string& word(WordId id) const { return words_[id]; }
  std::uint64_t count(WordId id) const { return counts_[id]; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }

 private:
  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, WordId> index_;
};

struct NodeDocument {
  std::vector<WordId> tokens;

  std::size_t length() const noexcept { return tokens.size(); }
  bool empty() const noexcept { return tokens.empty(); }
};

/// Multi-label assignment. `membership(v, l)` is true when node v carries
/// label l. Label ids follow the sorted order of label names.
class LabelSet {
 public:
  using Membership = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

  LabelSet() = default;
  LabelSet(std::vector<std::string> names, Membership membership);

  std::size_t label_count() const noexcept { return names_.size(); }
  std::size_t node_count() const noexcept { return static_cast<std::size_t>(membership_.rows()); }
  const std::string& name(LabelId l) const { return names_[l]; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const Membership& membership() const noexcept { return membership_; }
  bool has(NodeId v, LabelId l) const { return membership_(v, l); }
  bool labeled(NodeId v) const { return membership_.row(v).any(); }
  std::vector<LabelId> labels_of(NodeId v) const;

 private:
  std::vector<std::string> names_;
  Membership membership_;
};

struct TokenizerConfig {
  std::unordered_set<std::string> stopwords;
  /// Words seen fewer times than this across the corpus are dropped.
  std::uint64_t min_count = 1;

  static TokenizerConfig english();
};

/// Built-in English stopword list.
const std::vector<std::string>& english_stopwords();

/// Lowercases, splits on runs of ASCII non-alphanumerics and drops
/// stopwords. Bytes >= 0x80 are kept as word characters so UTF-8 text
/// is not shredded.
std::vector<std::string> tokenize(std::string_view raw, const TokenizerConfig& config);

struct Dataset {
  DirectedGraph graph;
  std::vector<NodeDocument> documents;
  Vocabulary vocabulary;
  LabelSet labels;
  /// Raw document text per node; absent for nodes without a docs line.
  std::vector<std::optional<std::string>> raw_text;
};

struct DatasetPaths {
  std::filesystem::path edges;
  std::filesystem::path docs;
  std::filesystem::path labels;

  /// `dir/edges.tsv`, `dir/docs.tsv`, `dir/labels.tsv`.
  static DatasetPaths in_directory(const std::filesystem::path& dir);
};

struct LoadOptions {
  TokenizerConfig tokenizer;
  /// Drop the lexicographically last edge of every cycle until acyclic.
  bool break_cycles = false;
};

/// Loads the three TSV files.
///
/// edges: `parent<TAB>child` per line, or a lone `node` to declare an
/// isolated node. docs: `node<TAB>raw text`. labels: `node<TAB>l1,l2,...`.
/// Empty lines are ignored. Node ids follow first appearance in the edges
/// file.
Dataset load_dataset(const DatasetPaths& paths, const LoadOptions& options = {});

/// Writes the canonical TSV form: edges in stored order, then docs and
/// labels in node-id order. Also writes `manifest.json` next to the edges
/// file.
void save_dataset(const Dataset& dataset, const DatasetPaths& paths);

/// JSON manifest with counts and the node/label id maps.
std::string dataset_manifest_json(const Dataset& dataset);

/// Every elementary cycle, each rotated to start at its smallest node id,
/// sorted. Empty iff the graph is a DAG.
std::vector<std::vector<NodeId>> detect_cycles(const DirectedGraph& graph);

/// Edges removed by repeatedly dropping the lexicographically last
/// (by parent name, child name) edge of each cycle.
std::vector<Edge> cycle_breaking_edges(const DirectedGraph& graph);

}  // namespace pctadw
