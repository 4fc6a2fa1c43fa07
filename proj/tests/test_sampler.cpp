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

#include <cmath>
#include <functional>
#include <map>

#include <Eigen/Dense>

#include "doctest.h"
#include "pctadw/errors.hpp"
#include "pctadw/sampler.hpp"

using namespace pctadw;

namespace {

// Exact pick distribution of a truncating walk of up to s steps, by
// enumerating every walk.
std::map<NodeId, double> exact_walk_pick(const DirectedGraph& g, NodeId v, int s, bool forward) {
  std::map<NodeId, double> dist;
  auto next = [&](NodeId x) -> const std::vector<NodeId>& { return forward ? g.out_adj(x) : g.in_adj(x); };
  std::vector<NodeId> path;
  std::function<void(NodeId, double)> walk = [&](NodeId x, double p) {
    const auto& nb = next(x);
    if (static_cast<int>(path.size()) == s || nb.empty()) {
      for (auto u : path) dist[u] += p / static_cast<double>(path.size());
      return;
    }
    for (auto y : nb) {
      path.push_back(y);
      walk(y, p / static_cast<double>(nb.size()));
      path.pop_back();
    }
  };
  if (!next(v).empty()) walk(v, 1.0);
  return dist;
}

// Distinct nodes at distance 1..s via boolean matrix powers.
std::size_t reach_count(const DirectedGraph& g, NodeId v, int s, bool forward) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(n, n);
  for (const auto& e : g.edges()) {
    if (forward) adj(e.from, e.to) = 1;
    else adj(e.to, e.from) = 1;
  }
  Eigen::RowVectorXi frontier = Eigen::RowVectorXi::Zero(n);
  frontier(v) = 1;
  Eigen::RowVectorXi reached = Eigen::RowVectorXi::Zero(n);
  for (int i = 0; i < s; ++i) {
    frontier = (frontier * adj).cwiseMin(1);
    reached = (reached + frontier).cwiseMin(1);
  }
  reached(v) = 0;
  return static_cast<std::size_t>(reached.sum());
}

template <typename Draw>
std::map<NodeId, int> histogram(int draws, Draw&& draw) {
  std::map<NodeId, int> h;
  for (int i = 0; i < draws; ++i) {
    auto x = draw();
    REQUIRE(x.has_value());
    ++h[*x];
  }
  return h;
}

// |observed - n p| <= 3 sqrt(n p (1 - p))
bool within_3_sigma(int observed, int n, double p) {
  const double mean = n * p;
  const double sd = std::sqrt(n * p * (1 - p));
  return std::abs(observed - mean) <= 3 * sd + 1e-12;
}

const DirectedGraph kDiamond = DirectedGraph::from_edges(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});

}  // namespace

TEST_CASE("config validation") {
  SamplerConfig c;
  c.walk_length = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.walk_length = 2;
  c.max_repeats = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("compute_walk_counts") {
  SamplerConfig cfg;  // s = 2, m = 5
  SUBCASE("path graph") {
    auto g = DirectedGraph::from_edges(3, {{0, 1}, {1, 2}});
    auto wc = compute_walk_counts(g, cfg);
    CHECK(wc.children[0] == 2);
    CHECK(wc.parents[0] == 0);
    CHECK(wc.repeats[0] == 2);
    CHECK(wc.repeats == std::vector<std::size_t>{2, 1, 2});
  }
  SUBCASE("cap applies") {
    // 3 parents, 7 children within one hop.
    std::vector<Edge> edges;
    for (NodeId p = 1; p <= 3; ++p) edges.push_back({p, 0});
    for (NodeId c = 4; c <= 10; ++c) edges.push_back({0, c});
    auto wc = compute_walk_counts(DirectedGraph::from_edges(11, edges), cfg);
    CHECK(wc.parents[0] == 3);
    CHECK(wc.children[0] == 7);
    CHECK(wc.repeats[0] == 5);
  }
  SUBCASE("star") {
    std::vector<Edge> edges;
    for (NodeId i = 1; i <= 10; ++i) edges.push_back({0, i});
    auto g = DirectedGraph::from_edges(11, edges);
    auto wc = compute_walk_counts(g, cfg);
    CHECK(wc.children[0] == reach_count(g, 0, 2, true));
    CHECK(wc.children[0] == 10);
    CHECK(wc.repeats[0] == 5);
    for (NodeId i = 1; i <= 10; ++i) CHECK(wc.repeats[i] == 1);
  }
  SUBCASE("isolated node gets zero repeats") {
    auto wc = compute_walk_counts(DirectedGraph::from_edges(3, {{0, 1}}), cfg);
    CHECK(wc.repeats[2] == 0);
  }
  SUBCASE("matches matrix-power reachability on random graphs") {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 2 + rng.index(9);
      std::vector<Edge> edges;
      for (NodeId u = 0; u < n; ++u)
        for (NodeId v = 0; v < n; ++v)
          if (u != v && rng.uniform(0, 1) < 0.25) edges.push_back({u, v});
      auto g = DirectedGraph::from_edges(n, edges);
      SamplerConfig c;
      c.walk_length = 1 + static_cast<int>(rng.index(3));
      c.max_repeats = 1 + static_cast<int>(rng.index(6));
      auto wc = compute_walk_counts(g, c);
      for (NodeId v = 0; v < n; ++v) {
        CHECK(wc.children[v] == reach_count(g, v, c.walk_length, true));
        CHECK(wc.parents[v] == reach_count(g, v, c.walk_length, false));
        CHECK(wc.repeats[v] ==
              std::min<std::size_t>(std::max(wc.parents[v], wc.children[v]), c.max_repeats));
      }
    }
  }
}

TEST_CASE("sample_child and sample_parent") {
  Rng rng(42);
  auto path = DirectedGraph::from_edges(3, {{0, 1}, {1, 2}});
  SUBCASE("dead ends are absent") {
    CHECK_FALSE(sample_child(path, 2, 2, rng).has_value());
    CHECK_FALSE(sample_parent(path, 0, 2, rng).has_value());
  }
  SUBCASE("forced path, uniform pick") {
    const int n = 20000;
    auto h = histogram(n, [&] { return sample_child(path, 0, 2, rng); });
    CHECK(h.size() == 2);
    CHECK(within_3_sigma(h[1], n, 0.5));
    auto hp = histogram(n, [&] { return sample_parent(path, 2, 2, rng); });
    CHECK(hp.size() == 2);
    CHECK(within_3_sigma(hp[0], n, 0.5));
  }
  SUBCASE("diamond child distribution") {
    auto exact = exact_walk_pick(kDiamond, 0, 2, true);
    CHECK(exact[3] == doctest::Approx(0.5));
    CHECK(exact[1] == doctest::Approx(0.25));
    CHECK(exact[2] == doctest::Approx(0.25));
    const int n = 40000;
    auto h = histogram(n, [&] { return sample_child(kDiamond, 0, 2, rng); });
    for (auto [u, p] : exact) CHECK(within_3_sigma(h[u], n, p));
    CHECK(h.count(0) == 0);
  }
  SUBCASE("diamond parent distribution") {
    auto exact = exact_walk_pick(kDiamond, 3, 2, false);
    CHECK(exact[0] == doctest::Approx(0.5));
    CHECK(exact[1] == doctest::Approx(0.25));
    CHECK(exact[2] == doctest::Approx(0.25));
    const int n = 40000;
    auto h = histogram(n, [&] { return sample_parent(kDiamond, 3, 2, rng); });
    for (auto [u, p] : exact) CHECK(within_3_sigma(h[u], n, p));
  }
  SUBCASE("truncated walks match enumeration") {
    // 0 -> {1, 2}, 1 -> 3, 2 is a dead end; s = 3.
    auto g = DirectedGraph::from_edges(4, {{0, 1}, {0, 2}, {1, 3}});
    auto exact = exact_walk_pick(g, 0, 3, true);
    const int n = 40000;
    auto h = histogram(n, [&] { return sample_child(g, 0, 3, rng); });
    for (auto [u, p] : exact) CHECK(within_3_sigma(h[u], n, p));
  }
  SUBCASE("samples stay within s hops") {
    auto g = DirectedGraph::from_edges(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
    for (int i = 0; i < 1000; ++i) {
      auto c = sample_child(g, 0, 2, rng);
      REQUIRE(c);
      CHECK(*c >= 1);
      CHECK(*c <= 2);
      auto p = sample_parent(g, 5, 3, rng);
      REQUIRE(p);
      CHECK(*p >= 2);
      CHECK(*p <= 4);
    }
  }
}

TEST_CASE("sample_word") {
  Rng rng(5);
  std::vector<NodeDocument> docs = {{}, {{7}}, {{0, 0, 1}}};
  CHECK_FALSE(sample_word(docs, 0, rng).has_value());
  for (int i = 0; i < 100; ++i) CHECK(sample_word(docs, 1, rng) == WordId{7});
  const int n = 30000;
  int zeros = 0;
  for (int i = 0; i < n; ++i) zeros += *sample_word(docs, 2, rng) == 0;
  CHECK(within_3_sigma(zeros, n, 2.0 / 3.0));
}

TEST_CASE("epoch samples") {
  // t = [2, 1, 2, 0]: 0 -> 1 -> 2, node 3 isolated.
  auto g = DirectedGraph::from_edges(4, {{0, 1}, {1, 2}});
  std::vector<NodeDocument> docs = {{{0}}, {}, {{1, 2}}, {}};
  Sampler sampler(g, docs, SamplerConfig{});
  CHECK(sampler.counts().repeats == std::vector<std::size_t>{2, 1, 2, 0});

  Rng rng(9);
  auto samples = sampler.epoch_samples(rng);
  CHECK(samples.size() == 5);
  std::map<NodeId, int> per_node;
  for (const auto& s : samples) {
    ++per_node[s.focus];
    CHECK(s.word.has_value() == !docs[s.focus].empty());
    CHECK(s.child.has_value() == (g.deg_out(s.focus) > 0));
    CHECK(s.parent.has_value() == (g.deg_in(s.focus) > 0));
  }
  CHECK(per_node[0] == 2);
  CHECK(per_node[1] == 1);
  CHECK(per_node[2] == 2);
  CHECK(per_node.count(3) == 0);

  SUBCASE("fixed seed reproduces the stream") {
    Rng a(123), b(123);
    for (int epoch = 0; epoch < 5; ++epoch) CHECK(sampler.epoch_samples(a) == sampler.epoch_samples(b));
  }
  SUBCASE("each node's samples are contiguous") {
    Rng r(1);
    auto s = sampler.epoch_samples(r);
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      if (s[i - 1].focus == s[i + 1].focus) CHECK(s[i].focus == s[i - 1].focus);
    }
  }
}

TEST_CASE("expected child weight law on a small DAG") {
  // Layered 2-2-2 DAG. Walks from 0 and 1 never truncate with s = 2.
  auto g = DirectedGraph::from_edges(
      6, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 4}, {2, 5}, {3, 4}, {3, 5}});
  std::vector<NodeDocument> docs(6);
  Sampler sampler(g, docs, SamplerConfig{});
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 6);
  for (const auto& e : g.edges()) a(e.from, e.to) = 1.0 / static_cast<double>(g.deg_out(e.from));
  const Eigen::MatrixXd walk = a + a * a;

  const int epochs = 20000;
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(6, 6);
  Rng rng(77);
  for (int e = 0; e < epochs; ++e) {
    sampler.for_each_epoch_sample(rng, [&](const TrainingSample& s) {
      if (s.child) ++counts(s.focus, *s.child);
    });
  }
  for (NodeId v : {0u, 1u}) {
    const auto t = static_cast<int>(sampler.counts().repeats[v]);
    for (NodeId u = 0; u < 6; ++u) {
      const double p = walk(v, u) / 2.0;
      if (p == 0) {
        CHECK(counts(v, u) == 0);
      } else {
        CHECK(within_3_sigma(counts(v, u), epochs * t, p));
      }
    }
  }
}
