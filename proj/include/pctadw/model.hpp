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

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pctadw/dataset.hpp"
#include "pctadw/rng.hpp"
#include "pctadw/sampler.hpp"

namespace pctadw {

// PCTADW-1 ties each node's child and parent vectors into one vector.
// PCTADW-2 keeps them separate and represents a node by their concatenation.
enum class Architecture : std::uint32_t { pctadw1 = 1, pctadw2 = 2 };

enum class LossMode : std::uint32_t { exact_softmax = 0, negative_sampling = 1 };

std::string_view to_string(Architecture arch);
std::string_view to_string(LossMode mode);
Architecture parse_architecture(std::string_view text);
LossMode parse_loss_mode(std::string_view text);

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct ModelConfig {
  Architecture architecture = Architecture::pctadw2;
  /// Width of the node representation. PCTADW-2 splits it evenly between
  /// the child and parent vectors.
  int dim = 128;
  LossMode loss_mode = LossMode::negative_sampling;
  int negatives = 5;
  AdamConfig adam;
  /// Input vectors start uniform in [-init_scale/dim, init_scale/dim].
  double init_scale = 0.5;

  void validate() const;
};

/// Parameter matrices. Row i of a node block belongs to node i, row i of
/// `word_output` to word i.
enum class Block : std::uint8_t { input = 0, child_output = 1, parent_output = 2, word_output = 3 };

inline constexpr std::array<Block, 4> kBlocks = {Block::input, Block::child_output,
                                                 Block::parent_output, Block::word_output};

/// Column range of an input row.
struct Segment {
  Eigen::Index offset = 0;
  Eigen::Index size = 0;
};

/// Trainable parameters plus Adam state.
///
/// The `input` block holds one row of width `dim` per node. Under PCTADW-1
/// the whole row is both the child vector v_c and the parent vector v_p.
/// Under PCTADW-2 columns [0, dim/2) hold v_c and [dim/2, dim) hold v_p, so
/// the row is the concatenation used as the node representation.
///
/// The child head predicts an s-child of the focus from the focus's parent
/// vector against `child_output` rows (v_c-dagger). The parent head predicts
/// an s-parent from the child vector against `parent_output` rows (v_p-dagger).
/// The word head scores the whole representation against `word_output`.
template <typename Scalar>
class EmbeddingModel {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  EmbeddingModel() = default;
  /// All parameters and moments zero.
  EmbeddingModel(const ModelConfig& config, std::size_t node_count, std::size_t vocab_size);

  const ModelConfig& config() const noexcept { return config_; }
  Architecture architecture() const noexcept { return config_.architecture; }
  Eigen::Index dim() const noexcept { return config_.dim; }
  std::size_t node_count() const noexcept { return static_cast<std::size_t>(params_[0].rows()); }
  std::size_t vocab_size() const noexcept { return static_cast<std::size_t>(params_[3].rows()); }

  Matrix& params(Block b) { return params_[index(b)]; }
  const Matrix& params(Block b) const { return params_[index(b)]; }
  Matrix& first_moment(Block b) { return first_moment_[index(b)]; }
  const Matrix& first_moment(Block b) const { return first_moment_[index(b)]; }
  Matrix& second_moment(Block b) { return second_moment_[index(b)]; }
  const Matrix& second_moment(Block b) const { return second_moment_[index(b)]; }

  /// v_c within an input row.
  Segment child_segment() const noexcept;
  /// v_p within an input row.
  Segment parent_segment() const noexcept;

  auto child_vector(NodeId v) const {
    auto s = child_segment();
    return params(Block::input).row(v).segment(s.offset, s.size);
  }
  auto parent_vector(NodeId v) const {
    auto s = parent_segment();
    return params(Block::input).row(v).segment(s.offset, s.size);
  }
  auto representation(NodeId v) const { return params(Block::input).row(v); }
  const Matrix& representations() const { return params(Block::input); }

  /// Adam step counter of the last applied update.
  std::uint64_t step() const noexcept { return step_; }
  void set_step(std::uint64_t t) noexcept { step_ = t; }
  std::uint64_t epochs_completed() const noexcept { return epochs_; }
  void set_epochs_completed(std::uint64_t e) noexcept { epochs_ = e; }

  template <typename Other>
  EmbeddingModel<Other> cast() const {
    EmbeddingModel<Other> out(config_, node_count(), vocab_size());
    for (auto b : kBlocks) {
      out.params(b) = params(b).template cast<Other>();
      out.first_moment(b) = first_moment(b).template cast<Other>();
      out.second_moment(b) = second_moment(b).template cast<Other>();
    }
    out.set_step(step_);
    out.set_epochs_completed(epochs_);
    return out;
  }

 private:
  static constexpr std::size_t index(Block b) { return static_cast<std::size_t>(b); }

  ModelConfig config_;
  std::array<Matrix, 4> params_;
  std::array<Matrix, 4> first_moment_;
  std::array<Matrix, 4> second_moment_;
  std::uint64_t step_ = 0;
  std::uint64_t epochs_ = 0;
};

/// Inputs uniform in +-init_scale/dim, outputs and moments zero.
template <typename Scalar>
EmbeddingModel<Scalar> init_model(const ModelConfig& config, std::size_t node_count,
                                  std::size_t vocab_size, Rng& rng);

/// Row-sparse gradient. Each touched row records the column range
/// [begin, end) that received gradient; Adam only touches that range.
template <typename Scalar>
class SparseGradient {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Row {
    Block block;
    Eigen::Index row;
    Eigen::Index begin;
    Eigen::Index end;
    Vector values;  // full block width
  };

  template <typename Derived>
  void add(Block block, Eigen::Index row, Eigen::Index width, Eigen::Index offset,
           const Eigen::MatrixBase<Derived>& g) {
    auto [it, inserted] = index_.try_emplace({block, row}, rows_.size());
    if (inserted) {
      rows_.push_back({block, row, offset, offset + g.size(), Vector::Zero(width)});
    }
    auto& r = rows_[it->second];
    r.begin = std::min(r.begin, offset);
    r.end = std::max(r.end, offset + static_cast<Eigen::Index>(g.size()));
    r.values.segment(offset, g.size()) += g.reshaped();
  }

  const std::vector<Row>& rows() const noexcept { return rows_; }
  const Row* find(Block block, Eigen::Index row) const {
    auto it = index_.find({block, row});
    return it == index_.end() ? nullptr : &rows_[it->second];
  }
  bool empty() const noexcept { return rows_.empty(); }
  void clear() {
    rows_.clear();
    index_.clear();
  }

 private:
  std::vector<Row> rows_;
  std::map<std::pair<Block, Eigen::Index>, std::size_t> index_;
};

/// Per-sample loss of each head. A skipped head has loss 0 and no gradient.
struct HeadLoss {
  double word = 0.0;
  double child = 0.0;
  double parent = 0.0;
  bool has_word = false;
  bool has_child = false;
  bool has_parent = false;

  double total() const { return word + child + parent; }
};

/// Noise distribution over ids with weights w_i^power.
class NoiseDistribution {
 public:
  NoiseDistribution() = default;
  NoiseDistribution(const std::vector<double>& weights, double power);

  std::uint32_t draw(Rng& rng) const { return dist_(rng); }
  double probability(std::uint32_t id) const { return dist_.probabilities().at(id); }
  std::size_t size() const { return dist_.probabilities().size(); }

 private:
  mutable std::discrete_distribution<std::uint32_t> dist_;
};

/// Noise for negative sampling: words by frequency^0.75, child targets by
/// (deg_in+1)^0.75, parent targets by (deg_out+1)^0.75.
struct NoiseTables {
  NoiseDistribution words;
  NoiseDistribution child_targets;
  NoiseDistribution parent_targets;

  static NoiseTables build(const DirectedGraph& graph, const Vocabulary& vocab,
                           double power = 0.75);
};

/// Noise ids drawn for one sample, per head.
struct NegativeDraws {
  std::vector<std::uint32_t> word;
  std::vector<std::uint32_t> child;
  std::vector<std::uint32_t> parent;
};

/// k draws for each present head, in word, child, parent order.
NegativeDraws draw_negatives(const TrainingSample& sample, int k, const NoiseTables& noise,
                             Rng& rng);

/// Loss of `sample` under the model's loss mode. Negative sampling uses the
/// given draws; draws equal to the target are ignored. Gradients are added
/// into `grad` when it is non-null. Throws std::out_of_range on bad ids.
template <typename Scalar>
HeadLoss evaluate_sample(const EmbeddingModel<Scalar>& model, const TrainingSample& sample,
                         const NegativeDraws& negatives, SparseGradient<Scalar>* grad);

/// Draws negatives (negative-sampling mode only) and evaluates the sample.
template <typename Scalar>
HeadLoss sample_loss_and_grads(const EmbeddingModel<Scalar>& model, const TrainingSample& sample,
                               const NoiseTables* noise, Rng& rng, SparseGradient<Scalar>& grad);

/// Sparse Adam with bias correction at step `t` (t >= 1). Only the touched
/// column range of each touched row changes, moments included.
template <typename Scalar>
void adam_step(EmbeddingModel<Scalar>& model, const SparseGradient<Scalar>& grad, std::uint64_t t);

// Exact-softmax distributions.
template <typename Scalar>
Eigen::VectorXd child_distribution(const EmbeddingModel<Scalar>& model, NodeId u);
template <typename Scalar>
Eigen::VectorXd parent_distribution(const EmbeddingModel<Scalar>& model, NodeId v);
template <typename Scalar>
Eigen::VectorXd word_distribution(const EmbeddingModel<Scalar>& model, NodeId v);

/// p_c(v | u): probability that v is an s-child of u.
template <typename Scalar>
double prob_child(const EmbeddingModel<Scalar>& model, NodeId u, NodeId v) {
  return child_distribution(model, u)(v);
}

/// p_p(u | v): probability that u is an s-parent of v.
template <typename Scalar>
double prob_parent(const EmbeddingModel<Scalar>& model, NodeId v, NodeId u) {
  return parent_distribution(model, v)(u);
}

template <typename Scalar>
double prob_word(const EmbeddingModel<Scalar>& model, NodeId v, WordId w) {
  return word_distribution(model, v)(w);
}

#define PCTADW_DECLARE_MODEL(S)                                                                  \
  extern template class EmbeddingModel<S>;                                                       \
  extern template EmbeddingModel<S> init_model<S>(const ModelConfig&, std::size_t, std::size_t,  \
                                                  Rng&);                                         \
  extern template HeadLoss evaluate_sample<S>(const EmbeddingModel<S>&, const TrainingSample&,   \
                                              const NegativeDraws&, SparseGradient<S>*);         \
  extern template HeadLoss sample_loss_and_grads<S>(const EmbeddingModel<S>&,                    \
                                                    const TrainingSample&, const NoiseTables*,   \
                                                    Rng&, SparseGradient<S>&);                   \
  extern template void adam_step<S>(EmbeddingModel<S>&, const SparseGradient<S>&, std::uint64_t); \
  extern template Eigen::VectorXd child_distribution<S>(const EmbeddingModel<S>&, NodeId);       \
  extern template Eigen::VectorXd parent_distribution<S>(const EmbeddingModel<S>&, NodeId);      \
  extern template Eigen::VectorXd word_distribution<S>(const EmbeddingModel<S>&, NodeId);

PCTADW_DECLARE_MODEL(float)
PCTADW_DECLARE_MODEL(double)

#undef PCTADW_DECLARE_MODEL

}  // namespace pctadw
