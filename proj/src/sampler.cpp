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

#include "pctadw/sampler.hpp"

#include <algorithm>
#include <numeric>

#include "pctadw/errors.hpp"

namespace pctadw {

namespace {

template <typename Neighbors>
std::size_t count_within(NodeId v, int s, Neighbors&& neighbors,
                         std::vector<std::uint32_t>& mark, std::uint32_t stamp) {
  std::vector<NodeId> frontier{v}, next;
  mark[v] = stamp;
  std::size_t reached = 0;
  for (int depth = 0; depth < s && !frontier.empty(); ++depth) {
    next.clear();
    for (auto x : frontier) {
      for (auto y : neighbors(x)) {
        if (mark[y] == stamp) continue;
        mark[y] = stamp;
        next.push_back(y);
        ++reached;
      }
    }
    std::swap(frontier, next);
  }
  return reached;
}

template <typename Neighbors>
std::optional<NodeId> walk_and_pick(NodeId v, int s, Rng& rng, Neighbors&& neighbors) {
  if (neighbors(v).empty()) return std::nullopt;
  // Reservoir of size one over the visited path keeps the walk allocation-free.
  NodeId current = v;
  NodeId picked = v;
  std::size_t visited = 0;
  for (int step = 0; step < s; ++step) {
    const auto& next = neighbors(current);
    if (next.empty()) break;
    current = next[rng.index(next.size())];
    ++visited;
    if (rng.index(visited) == 0) picked = current;
  }
  return picked;
}

}  // namespace

void SamplerConfig::validate() const {
  if (walk_length < 1) throw ConfigError("walk length s must be >= 1");
  if (max_repeats < 1) throw ConfigError("repeat cap m must be >= 1");
}

std::size_t WalkCounts::total() const {
  return std::accumulate(repeats.begin(), repeats.end(), std::size_t{0});
}

WalkCounts compute_walk_counts(const DirectedGraph& graph, const SamplerConfig& config) {
  config.validate();
  const auto n = graph.node_count();
  WalkCounts wc;
  wc.parents.resize(n);
  wc.children.resize(n);
  wc.repeats.resize(n);
  std::vector<std::uint32_t> mark(n, 0);
  std::uint32_t stamp = 0;
  const auto m = static_cast<std::size_t>(config.max_repeats);
  for (NodeId v = 0; v < n; ++v) {
    wc.children[v] = count_within(
        v, config.walk_length, [&](NodeId x) -> const auto& { return graph.out_adj(x); }, mark,
        ++stamp);
    wc.parents[v] = count_within(
        v, config.walk_length, [&](NodeId x) -> const auto& { return graph.in_adj(x); }, mark,
        ++stamp);
    wc.repeats[v] = std::min(std::max(wc.parents[v], wc.children[v]), m);
  }
  return wc;
}

std::optional<NodeId> sample_child(const DirectedGraph& graph, NodeId v, int s, Rng& rng) {
  return walk_and_pick(v, s, rng, [&](NodeId x) -> const auto& { return graph.out_adj(x); });
}

std::optional<NodeId> sample_parent(const DirectedGraph& graph, NodeId v, int s, Rng& rng) {
  return walk_and_pick(v, s, rng, [&](NodeId x) -> const auto& { return graph.in_adj(x); });
}

std::optional<WordId> sample_word(std::span<const NodeDocument> docs, NodeId v, Rng& rng) {
  if (v >= docs.size() || docs[v].empty()) return std::nullopt;
  const auto& tokens = docs[v].tokens;
  return tokens[rng.index(tokens.size())];
}

Sampler::Sampler(const DirectedGraph& graph, std::span<const NodeDocument> docs,
                 SamplerConfig config)
    : graph_(&graph), docs_(docs), config_(config), counts_(compute_walk_counts(graph, config)) {}

std::vector<NodeId> Sampler::epoch_order(Rng& rng) const {
  std::vector<NodeId> order;
  order.reserve(graph_->node_count());
  for (NodeId v = 0; v < graph_->node_count(); ++v) {
    if (counts_.repeats[v] > 0) order.push_back(v);
  }
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

TrainingSample Sampler::sample(NodeId v, Rng& rng) const {
  TrainingSample s;
  s.focus = v;
  s.word = sample_word(docs_, v, rng);
  s.child = sample_child(*graph_, v, config_.walk_length, rng);
  s.parent = sample_parent(*graph_, v, config_.walk_length, rng);
  return s;
}

std::vector<TrainingSample> Sampler::epoch_samples(Rng& rng) const {
  std::vector<TrainingSample> out;
  out.reserve(counts_.total());
  for_each_epoch_sample(rng, [&](const TrainingSample& s) { out.push_back(s); });
  return out;
}

}  // namespace pctadw
