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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pctadw/dataset.hpp"
#include "pctadw/errors.hpp"

namespace pctadw {

enum class Metric { euclidean, cosine };

/// (first, second) such as ("python-foo", "python3-foo").
struct AnalogyPair {
  NodeId first;
  NodeId second;

  friend bool operator==(const AnalogyPair&, const AnalogyPair&) = default;
};

/// One query q = v(a.second) - v(a.first) + v(b.first); `rank` is the
/// 1-based position of b.second among all nodes sorted by distance to q.
struct AnalogyTest {
  AnalogyPair a;
  AnalogyPair b;
  std::size_t rank = 0;
};

struct AnalogyResult {
  std::vector<AnalogyTest> tests;
  /// cumulative[r - 1] = number of tests with rank <= r, for r = 1..node_count.
  std::vector<std::size_t> cumulative;
};

std::vector<std::size_t> cumulative_histogram(const std::vector<AnalogyTest>& tests,
                                              std::size_t node_count);

/// Rank of b2 for the query built from (a1, a2, b1). Candidates are every
/// node except a1, a2 and b1 (b2 itself is always a candidate). Ties are
/// broken by node id.
template <typename Derived>
std::size_t analogy_rank(const Eigen::MatrixBase<Derived>& vectors, const AnalogyPair& a,
                         const AnalogyPair& b, Metric metric = Metric::euclidean) {
  using Scalar = typename Derived::Scalar;
  const auto n = vectors.rows();
  for (auto id : {a.first, a.second, b.first, b.second}) {
    if (static_cast<Eigen::Index>(id) >= n) throw LookupError("analogy node id out of range");
  }
  const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> q =
      vectors.row(a.second) - vectors.row(a.first) + vectors.row(b.first);

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> dist;
  if (metric == Metric::euclidean) {
    dist = (vectors.rowwise() - q).rowwise().squaredNorm();
  } else {
    const Scalar qn = q.norm();
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> norms = vectors.rowwise().norm();
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> dots = vectors * q.transpose();
    dist.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Scalar denom = norms(i) * qn;
      dist(i) = Scalar(1) - (denom > Scalar(0) ? dots(i) / denom : Scalar(0));
    }
  }

  const auto target = static_cast<Eigen::Index>(b.second);
  const Scalar d_target = dist(target);
  std::size_t rank = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i == target) continue;
    const auto id = static_cast<NodeId>(i);
    if (id == a.first || id == a.second || id == b.first) continue;
    if (dist(i) < d_target || (dist(i) == d_target && i < target)) ++rank;
  }
  return rank;
}

/// Every ordered pair of distinct pairs (a, b) from `pairs`.
template <typename Derived>
AnalogyResult analogy_all_pairs(const Eigen::MatrixBase<Derived>& vectors,
                                const std::vector<AnalogyPair>& pairs,
                                Metric metric = Metric::euclidean) {
  if (pairs.size() < 2) throw ValidationError("analogy test needs at least two pairs");
  AnalogyResult result;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      if (i == j) continue;
      result.tests.push_back({pairs[i], pairs[j], analogy_rank(vectors, pairs[i], pairs[j], metric)});
    }
  }
  result.cumulative = cumulative_histogram(result.tests, static_cast<std::size_t>(vectors.rows()));
  return result;
}

/// Every pair b in `pairs` other than `anchor`, tested against a = anchor.
template <typename Derived>
AnalogyResult analogy_with_anchor(const Eigen::MatrixBase<Derived>& vectors,
                                  const std::vector<AnalogyPair>& pairs, const AnalogyPair& anchor,
                                  Metric metric = Metric::euclidean) {
  AnalogyResult result;
  for (const auto& b : pairs) {
    if (b == anchor) continue;
    result.tests.push_back({anchor, b, analogy_rank(vectors, anchor, b, metric)});
  }
  result.cumulative = cumulative_histogram(result.tests, static_cast<std::size_t>(vectors.rows()));
  return result;
}

/// Resolves tab-separated "first<TAB>second" name lines. Throws LookupError
/// naming the first unknown node.
std::vector<AnalogyPair> read_analogy_pairs(const std::string& path,
                                            const std::vector<std::string>& names);

AnalogyPair resolve_pair(std::string_view first, std::string_view second,
                         const std::vector<std::string>& names);

}  // namespace pctadw
