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

#include <algorithm>
#include <set>

#include "pctadw/dataset.hpp"

namespace pctadw {

namespace {

// Tarjan's SCC, iterative. Returns component index per node.
std::vector<std::size_t> strongly_connected(const std::vector<std::vector<NodeId>>& adj,
                                            std::size_t& component_count) {
  const auto n = adj.size();
  constexpr auto unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<NodeId> stack;
  std::size_t counter = 0;
  component_count = 0;

  struct Frame {
    NodeId v;
    std::size_t next;
  };
  std::vector<Frame> call;
  for (NodeId root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& f = call.back();
      if (f.next < adj[f.v].size()) {
        auto w = adj[f.v][f.next++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      auto v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = component_count;
        } while (w != v);
        ++component_count;
      }
    }
  }
  return comp;
}

// Johnson's elementary circuit enumeration restricted to `allowed` nodes,
// reporting circuits through `start` where every other node id > start.
class CircuitFinder {
 public:
  CircuitFinder(const std::vector<std::vector<NodeId>>& adj, std::vector<std::vector<NodeId>>& out)
      : adj_(adj), out_(out), blocked_(adj.size(), false), blocked_by_(adj.size()) {}

  void run(NodeId start, const std::vector<bool>& allowed) {
    start_ = start;
    allowed_ = &allowed;
    path_.clear();
    circuit(start);
  }

 private:
  void unblock(NodeId u) {
    std::vector<NodeId> work{u};
    while (!work.empty()) {
      auto x = work.back();
      work.pop_back();
      if (!blocked_[x]) continue;
      blocked_[x] = false;
      for (auto w : blocked_by_[x]) work.push_back(w);
      blocked_by_[x].clear();
    }
  }

  bool circuit(NodeId v) {
    bool found = false;
    path_.push_back(v);
    blocked_[v] = true;
    for (auto w : adj_[v]) {
      if (!(*allowed_)[w]) continue;
      if (w == start_) {
        out_.push_back(path_);
        found = true;
      } else if (!blocked_[w] && circuit(w)) {
        found = true;
      }
    }
    if (found) {
      unblock(v);
    } else {
      for (auto w : adj_[v]) {
        if (!(*allowed_)[w]) continue;
        auto& b = blocked_by_[w];
        if (std::find(b.begin(), b.end(), v) == b.end()) b.push_back(v);
      }
    }
    path_.pop_back();
    return found;
  }

  const std::vector<std::vector<NodeId>>& adj_;
  std::vector<std::vector<NodeId>>& out_;
  std::vector<bool> blocked_;
  std::vector<std::vector<NodeId>> blocked_by_;
  std::vector<NodeId> path_;
  NodeId start_ = 0;
  const std::vector<bool>* allowed_ = nullptr;
};

}  // namespace

std::vector<std::vector<NodeId>> detect_cycles(const DirectedGraph& graph) {
  const auto n = graph.node_count();
  std::vector<std::vector<NodeId>> adj(n);
  std::vector<std::vector<NodeId>> cycles;
  for (NodeId v = 0; v < n; ++v) {
    adj[v] = graph.out_adj(v);
    if (std::find(adj[v].begin(), adj[v].end(), v) != adj[v].end()) cycles.push_back({v});
  }

  std::size_t component_count = 0;
  auto comp = strongly_connected(adj, component_count);
  std::vector<std::vector<NodeId>> members(component_count);
  for (NodeId v = 0; v < n; ++v) members[comp[v]].push_back(v);

  for (const auto& nodes : members) {
    if (nodes.size() < 2) continue;
    // Local ids follow global id order, so rotation by least local id is
    // rotation by least global id.
    const auto k = nodes.size();
    std::vector<std::vector<NodeId>> local(k);
    for (NodeId i = 0; i < k; ++i) {
      for (auto w : adj[nodes[i]]) {
        if (comp[w] != comp[nodes[i]] || w == nodes[i]) continue;
        auto j = std::lower_bound(nodes.begin(), nodes.end(), w) - nodes.begin();
        local[i].push_back(static_cast<NodeId>(j));
      }
    }

    // Johnson: circuits whose least vertex is s, searched inside the SCC of
    // s in the subgraph induced by {s, ..., k-1}.
    std::vector<std::vector<NodeId>> found;
    for (NodeId s = 0; s < k; ++s) {
      std::vector<std::vector<NodeId>> sub(k);
      for (NodeId v = s; v < k; ++v) {
        for (auto w : local[v]) {
          if (w >= s) sub[v].push_back(w);
        }
      }
      std::size_t count = 0;
      auto sub_comp = strongly_connected(sub, count);
      std::vector<bool> allowed(k, false);
      std::size_t size = 0;
      for (NodeId v = s; v < k; ++v) {
        allowed[v] = sub_comp[v] == sub_comp[s];
        size += allowed[v];
      }
      if (size < 2) continue;
      CircuitFinder finder(sub, found);
      finder.run(s, allowed);
    }
    for (auto& c : found) {
      for (auto& v : c) v = nodes[v];
      cycles.push_back(std::move(c));
    }
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

std::vector<Edge> cycle_breaking_edges(const DirectedGraph& graph) {
  std::vector<Edge> removed;
  DirectedGraph current = graph;
  while (true) {
    auto cycles = detect_cycles(current);
    if (cycles.empty()) break;
    std::set<Edge> drop;
    for (const auto& c : cycles) {
      Edge last{c.back(), c.front()};
      auto before = [&](const Edge& a, const Edge& b) {
        const auto& an = graph.name(a.from);
        const auto& bn = graph.name(b.from);
        if (an != bn) return an < bn;
        return graph.name(a.to) < graph.name(b.to);
      };
      for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        Edge e{c[i], c[i + 1]};
        if (before(last, e)) last = e;
      }
      drop.insert(last);
    }
    std::vector<Edge> batch(drop.begin(), drop.end());
    removed.insert(removed.end(), batch.begin(), batch.end());
    current = current.without_edges(batch);
  }
  return removed;
}

}  // namespace pctadw
