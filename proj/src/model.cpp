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

#include "pctadw/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pctadw/errors.hpp"

namespace pctadw {

namespace {

// -log(sigmoid(x)), stable for large |x|.
double softplus_neg(double x) { return std::log1p(std::exp(-std::abs(x))) + std::max(-x, 0.0); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  const double top = logits.maxCoeff();
  Eigen::VectorXd p = (logits.array() - top).exp().matrix();
  return p / p.sum();
}

void check_node(std::size_t v, std::size_t n, const char* what) {
  if (v >= n) {
    throw std::out_of_range(std::string(what) + " id " + std::to_string(v) + " out of range [0, " +
                            std::to_string(n) + ")");
  }
}

// One prediction head: `x` (a segment of the focus's input row) scored
// against every row of `outputs`. Returns -log p(target).
template <typename Scalar>
double head_loss(const EmbeddingModel<Scalar>& model, Block out_block, NodeId focus, Segment seg,
                 std::uint32_t target, const std::vector<std::uint32_t>& negatives,
                 SparseGradient<Scalar>* grad) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const auto& outputs = model.params(out_block);
  const auto width = outputs.cols();
  const Vector x = model.params(Block::input).row(focus).segment(seg.offset, seg.size).transpose();

  if (model.config().loss_mode == LossMode::exact_softmax) {
    const Eigen::VectorXd logits = (outputs * x).template cast<double>();
    const double top = logits.maxCoeff();
    const double lse = top + std::log((logits.array() - top).exp().sum());
    const double loss = lse - logits(target);
    if (grad) {
      Eigen::VectorXd coeff = (logits.array() - lse).exp().matrix();
      coeff(target) -= 1.0;
      const Vector c = coeff.cast<Scalar>();
      const Vector gx = outputs.transpose() * c;
      for (Eigen::Index j = 0; j < outputs.rows(); ++j) {
        grad->add(out_block, j, width, 0, (c(j) * x).eval());
      }
      grad->add(Block::input, focus, model.dim(), seg.offset, gx);
    }
    return loss;
  }

  double loss = 0.0;
  Vector gx = Vector::Zero(seg.size);
  auto score = [&](std::uint32_t id, bool positive) {
    const double z = static_cast<double>(outputs.row(id).dot(x.transpose()));
    loss += positive ? softplus_neg(z) : softplus_neg(-z);
    if (!grad) return;
    const auto dz = static_cast<Scalar>(positive ? sigmoid(z) - 1.0 : sigmoid(z));
    gx += dz * outputs.row(id).transpose();
    grad->add(out_block, id, width, 0, (dz * x).eval());
  };
  score(target, true);
  for (auto id : negatives) {
    if (id != target) score(id, false);
  }
  if (grad) grad->add(Block::input, focus, model.dim(), seg.offset, gx);
  return loss;
}

template <typename Scalar>
Eigen::VectorXd distribution(const EmbeddingModel<Scalar>& model, Block out_block, NodeId focus,
                             Segment seg) {
  check_node(focus, model.node_count(), "node");
  const auto x = model.params(Block::input).row(focus).segment(seg.offset, seg.size);
  const Eigen::VectorXd logits = (model.params(out_block) * x.transpose()).template cast<double>();
  return softmax(logits);
}

}  // namespace

std::string_view to_string(Architecture arch) {
  return arch == Architecture::pctadw1 ? "pctadw1" : "pctadw2";
}

std::string_view to_string(LossMode mode) {
  return mode == LossMode::exact_softmax ? "exact_softmax" : "negative_sampling";
}

Architecture parse_architecture(std::string_view text) {
  if (text == "pctadw1" || text == "PCTADW1" || text == "PCTADW-1") return Architecture::pctadw1;
  if (text == "pctadw2" || text == "PCTADW2" || text == "PCTADW-2") return Architecture::pctadw2;
  throw ConfigError("unknown architecture '" + std::string(text) + "'");
}

LossMode parse_loss_mode(std::string_view text) {
  if (text == "exact_softmax" || text == "exact" || text == "softmax") return LossMode::exact_softmax;
  if (text == "negative_sampling" || text == "ns" || text == "negative") {
    return LossMode::negative_sampling;
  }
  throw ConfigError("unknown loss mode '" + std::string(text) + "'");
}

void ModelConfig::validate() const {
  if (dim < 1) throw ConfigError("dim must be positive");
  if (architecture == Architecture::pctadw2 && dim % 2 != 0) {
    throw ConfigError("dim must be even for pctadw2 (got " + std::to_string(dim) + ")");
  }
  if (loss_mode == LossMode::negative_sampling && negatives < 1) {
    throw ConfigError("negatives must be >= 1");
  }
  if (!(adam.learning_rate > 0) || !(adam.beta1 >= 0 && adam.beta1 < 1) ||
      !(adam.beta2 >= 0 && adam.beta2 < 1) || !(adam.epsilon > 0)) {
    throw ConfigError("invalid Adam settings");
  }
  if (!(init_scale >= 0)) throw ConfigError("init_scale must be non-negative");
}

template <typename Scalar>
EmbeddingModel<Scalar>::EmbeddingModel(const ModelConfig& config, std::size_t node_count,
                                       std::size_t vocab_size)
    : config_(config) {
  config_.validate();
  const auto n = static_cast<Eigen::Index>(node_count);
  const auto w = static_cast<Eigen::Index>(vocab_size);
  const Eigen::Index d = config_.dim;
  const Eigen::Index role = config_.architecture == Architecture::pctadw1 ? d : d / 2;
  const std::array<std::pair<Eigen::Index, Eigen::Index>, 4> shapes = {
      std::pair{n, d}, std::pair{n, role}, std::pair{n, role}, std::pair{w, d}};
  for (std::size_t i = 0; i < 4; ++i) {
    params_[i] = Matrix::Zero(shapes[i].first, shapes[i].second);
    first_moment_[i] = Matrix::Zero(shapes[i].first, shapes[i].second);
    second_moment_[i] = Matrix::Zero(shapes[i].first, shapes[i].second);
  }
}

template <typename Scalar>
Segment EmbeddingModel<Scalar>::child_segment() const noexcept {
  if (config_.architecture == Architecture::pctadw1) return {0, config_.dim};
  return {0, config_.dim / 2};
}

template <typename Scalar>
Segment EmbeddingModel<Scalar>::parent_segment() const noexcept {
  if (config_.architecture == Architecture::pctadw1) return {0, config_.dim};
  return {config_.dim / 2, config_.dim / 2};
}

template <typename Scalar>
EmbeddingModel<Scalar> init_model(const ModelConfig& config, std::size_t node_count,
                                  std::size_t vocab_size, Rng& rng) {
  if (node_count == 0) throw ConfigError("model needs at least one node");
  EmbeddingModel<Scalar> model(config, node_count, vocab_size);
  const double bound = config.init_scale / config.dim;
  auto& input = model.params(Block::input);
  for (Eigen::Index i = 0; i < input.rows(); ++i) {
    for (Eigen::Index j = 0; j < input.cols(); ++j) {
      input(i, j) = static_cast<Scalar>(rng.uniform(-bound, bound));
    }
  }
  return model;
}

NoiseDistribution::NoiseDistribution(const std::vector<double>& weights, double power) {
  std::vector<double> w(weights.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(weights[i], power);
  dist_ = std::discrete_distribution<std::uint32_t>(w.begin(), w.end());
}

NoiseTables NoiseTables::build(const DirectedGraph& graph, const Vocabulary& vocab, double power) {
  std::vector<double> words(vocab.counts().begin(), vocab.counts().end());
  std::vector<double> in(graph.node_count()), out(graph.node_count());
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    in[v] = static_cast<double>(graph.deg_in(v) + 1);
    out[v] = static_cast<double>(graph.deg_out(v) + 1);
  }
  NoiseTables t;
  if (!words.empty()) t.words = NoiseDistribution(words, power);
  t.child_targets = NoiseDistribution(in, power);
  t.parent_targets = NoiseDistribution(out, power);
  return t;
}

NegativeDraws draw_negatives(const TrainingSample& sample, int k, const NoiseTables& noise,
                             Rng& rng) {
  NegativeDraws d;
  auto fill = [&](std::vector<std::uint32_t>& out, const NoiseDistribution& dist) {
    out.resize(static_cast<std::size_t>(k));
    for (auto& id : out) id = dist.draw(rng);
  };
  if (sample.word) fill(d.word, noise.words);
  if (sample.child) fill(d.child, noise.child_targets);
  if (sample.parent) fill(d.parent, noise.parent_targets);
  return d;
}

template <typename Scalar>
HeadLoss evaluate_sample(const EmbeddingModel<Scalar>& model, const TrainingSample& sample,
                         const NegativeDraws& negatives, SparseGradient<Scalar>* grad) {
  const auto n = model.node_count();
  check_node(sample.focus, n, "focus node");
  if (sample.word) check_node(*sample.word, model.vocab_size(), "word");
  if (sample.child) check_node(*sample.child, n, "child node");
  if (sample.parent) check_node(*sample.parent, n, "parent node");

  HeadLoss loss;
  if (sample.word) {
    loss.has_word = true;
    loss.word = head_loss(model, Block::word_output, sample.focus, Segment{0, model.dim()},
                          *sample.word, negatives.word, grad);
  }
  if (sample.child) {
    // p_c(child | focus) reads the focus's parent vector.
    loss.has_child = true;
    loss.child = head_loss(model, Block::child_output, sample.focus, model.parent_segment(),
                           *sample.child, negatives.child, grad);
  }
  if (sample.parent) {
    // p_p(parent | focus) reads the focus's child vector.
    loss.has_parent = true;
    loss.parent = head_loss(model, Block::parent_output, sample.focus, model.child_segment(),
                            *sample.parent, negatives.parent, grad);
  }
  return loss;
}

template <typename Scalar>
HeadLoss sample_loss_and_grads(const EmbeddingModel<Scalar>& model, const TrainingSample& sample,
                               const NoiseTables* noise, Rng& rng, SparseGradient<Scalar>& grad) {
  NegativeDraws draws;
  if (model.config().loss_mode == LossMode::negative_sampling) {
    if (!noise) throw ConfigError("negative sampling needs noise tables");
    draws = draw_negatives(sample, model.config().negatives, *noise, rng);
  }
  return evaluate_sample(model, sample, draws, &grad);
}

template <typename Scalar>
void adam_step(EmbeddingModel<Scalar>& model, const SparseGradient<Scalar>& grad, std::uint64_t t) {
  if (t < 1) throw std::invalid_argument("Adam step counter must be >= 1");
  const auto& cfg = model.config().adam;
  const double td = static_cast<double>(t);
  const auto b1 = static_cast<Scalar>(cfg.beta1);
  const auto b2 = static_cast<Scalar>(cfg.beta2);
  const auto correction1 = static_cast<Scalar>(1.0 - std::pow(cfg.beta1, td));
  const auto correction2 = static_cast<Scalar>(1.0 - std::pow(cfg.beta2, td));
  const auto lr = static_cast<Scalar>(cfg.learning_rate);
  const auto eps = static_cast<Scalar>(cfg.epsilon);
  const Scalar one(1);

  for (const auto& r : grad.rows()) {
    auto p = model.params(r.block).row(r.row);
    auto m = model.first_moment(r.block).row(r.row);
    auto v = model.second_moment(r.block).row(r.row);
    for (Eigen::Index j = r.begin; j < r.end; ++j) {
      const Scalar g = r.values(j);
      m(j) = b1 * m(j) + (one - b1) * g;
      v(j) = b2 * v(j) + (one - b2) * g * g;
      const Scalar m_hat = m(j) / correction1;
      const Scalar v_hat = v(j) / correction2;
      p(j) -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
  }
  model.set_step(t);
}

template <typename Scalar>
Eigen::VectorXd child_distribution(const EmbeddingModel<Scalar>& model, NodeId u) {
  return distribution(model, Block::child_output, u, model.parent_segment());
}

template <typename Scalar>
Eigen::VectorXd parent_distribution(const EmbeddingModel<Scalar>& model, NodeId v) {
  return distribution(model, Block::parent_output, v, model.child_segment());
}

template <typename Scalar>
Eigen::VectorXd word_distribution(const EmbeddingModel<Scalar>& model, NodeId v) {
  if (model.vocab_size() == 0) throw std::out_of_range("empty vocabulary");
  return distribution(model, Block::word_output, v, Segment{0, model.dim()});
}

#define PCTADW_INSTANTIATE_MODEL(S)                                                              \
  template class EmbeddingModel<S>;                                                              \
  template EmbeddingModel<S> init_model<S>(const ModelConfig&, std::size_t, std::size_t, Rng&);  \
  template HeadLoss evaluate_sample<S>(const EmbeddingModel<S>&, const TrainingSample&,          \
                                       const NegativeDraws&, SparseGradient<S>*);                \
  template HeadLoss sample_loss_and_grads<S>(const EmbeddingModel<S>&, const TrainingSample&,    \
                                             const NoiseTables*, Rng&, SparseGradient<S>&);      \
  template void adam_step<S>(EmbeddingModel<S>&, const SparseGradient<S>&, std::uint64_t);       \
  template Eigen::VectorXd child_distribution<S>(const EmbeddingModel<S>&, NodeId);              \
  template Eigen::VectorXd parent_distribution<S>(const EmbeddingModel<S>&, NodeId);             \
  template Eigen::VectorXd word_distribution<S>(const EmbeddingModel<S>&, NodeId);

PCTADW_INSTANTIATE_MODEL(float)
PCTADW_INSTANTIATE_MODEL(double)

}  // namespace pctadw
