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
#include <optional>
#include <span>
#include <vector>

#include "pctadw/dataset.hpp"
#include "pctadw/rng.hpp"

namespace pctadw {

struct SamplerConfig {
  /// Walk length s.
  int walk_length = 2;
  /// Cap m on the per-node repeat count.
  int max_repeats = 5;

  void validate() const;
};

/// One network input: the focus node and what each head should predict.
/// An absent target means that head is skipped for this sample.
struct TrainingSample {
  NodeId focus = 0;
  std::optional<WordId> word;
  std::optional<NodeId> child;
  std::optional<NodeId> parent;

  friend bool operator==(const TrainingSample&, const TrainingSample&) = default;
};

struct WalkCounts {
  std::vector<std::size_t> parents;   // n_p(v): distinct nodes reaching v within s hops
  std::vector<std::size_t> children;  // n_c(v): distinct nodes reached from v within s hops
  std::vector<std::size_t> repeats;   // t_v = min(max(n_p, n_c), m)

  std::size_t total() const;
};

WalkCounts compute_walk_counts(const DirectedGraph& graph, const SamplerConfig& config);

/// Walks up to `s` steps along out-edges (stopping early at a node without
/// out-edges) and returns a uniform pick among the visited nodes, excluding
/// the start. Absent iff `v` has no out-edges.
std::optional<NodeId> sample_child(const DirectedGraph& graph, NodeId v, int s, Rng& rng);

/// Same as sample_child, walking against edge direction.
std::optional<NodeId> sample_parent(const DirectedGraph& graph, NodeId v, int s, Rng& rng);

/// Uniform over token occurrences of d_v.
std::optional<WordId> sample_word(std::span<const NodeDocument> docs, NodeId v, Rng& rng);

/// Per-epoch sample generator over immutable graph and documents.
class Sampler {
 public:
  Sampler(const DirectedGraph& graph, std::span<const NodeDocument> docs, SamplerConfig config);

  const WalkCounts& counts() const noexcept { return counts_; }
  const SamplerConfig& config() const noexcept { return config_; }

  /// Seeded permutation of the nodes with t_v > 0.
  std::vector<NodeId> epoch_order(Rng& rng) const;

  /// One draw of (word, child, parent) for `v`.
  TrainingSample sample(NodeId v, Rng& rng) const;

  /// Emits t_v samples for each node of a fresh epoch order.
  template <typename Fn>
  void for_each_epoch_sample(Rng& rng, Fn&& fn) const {
    for (auto v : epoch_order(rng)) {
      for (std::size_t i = 0; i < counts_.repeats[v]; ++i) fn(sample(v, rng));
    }
  }

  std::vector<TrainingSample> epoch_samples(Rng& rng) const;

 private:
  const DirectedGraph* graph_;
  std::span<const NodeDocument> docs_;
  SamplerConfig config_;
  WalkCounts counts_;
};

}  // namespace pctadw
