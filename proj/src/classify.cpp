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

#include "pctadw/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pctadw/errors.hpp"
#include "pctadw/rng.hpp"

namespace pctadw {

int folds_for_fraction(double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("training fraction must be in (0, 1)");
  const auto k = std::lround(1.0 / fraction);
  if (k < 2) throw ConfigError("training fraction leaves no test folds");
  return static_cast<int>(k);
}

double MicroCounts::micro_f1() const {
  const auto denom = 2 * true_positive + false_positive + false_negative;
  if (denom == 0) return 1.0;
  return 2.0 * static_cast<double>(true_positive) / static_cast<double>(denom);
}

MicroCounts count_decisions(const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& truth,
                            const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& predicted) {
  MicroCounts c;
  c.true_positive = static_cast<std::size_t>((truth && predicted).count());
  c.false_positive = static_cast<std::size_t>((!truth && predicted).count());
  c.false_negative = static_cast<std::size_t>((truth && !predicted).count());
  return c;
}

Eigen::MatrixXd OneVsRestLogistic::prepare(const Eigen::MatrixXd& features) const {
  Eigen::MatrixXd x(features.rows(), features.cols() + 1);
  x.leftCols(features.cols()) =
      ((features.rowwise() - mean_).array().rowwise() / scale_.array()).matrix();
  x.col(features.cols()).setOnes();
  return x;
}

void OneVsRestLogistic::fit(const Eigen::MatrixXd& features, const LabelMatrix& labels) {
  const auto n = features.rows();
  const auto d = features.cols();
  if (labels.rows() != n) throw ValidationError("label rows do not match feature rows");
  if (n == 0) throw ValidationError("no training rows");

  if (config_.standardize) {
    mean_ = features.colwise().mean();
    Eigen::RowVectorXd var = (features.rowwise() - mean_).array().square().colwise().mean();
    scale_ = var.array().sqrt().unaryExpr([](double s) { return s > 1e-12 ? s : 1.0; });
  } else {
    mean_ = Eigen::RowVectorXd::Zero(d);
    scale_ = Eigen::RowVectorXd::Ones(d);
  }

  const Eigen::MatrixXd x = prepare(features);
  const Eigen::MatrixXd y = labels.cast<double>().matrix();
  trainable_ = labels.colwise().any().transpose();
  weights_ = Eigen::MatrixXd::Zero(d + 1, labels.cols());
  const double step = config_.learning_rate / static_cast<double>(n);
  for (int epoch = 0; epoch < config_.epochs; ++epoch) {
    Eigen::MatrixXd p = (x * weights_).unaryExpr([](double z) { return 1.0 / (1.0 + std::exp(-z)); });
    weights_.noalias() -= step * (x.transpose() * (p - y));
  }
}

Eigen::MatrixXd OneVsRestLogistic::scores(const Eigen::MatrixXd& features) const {
  return (prepare(features) * weights_).unaryExpr([](double z) { return 1.0 / (1.0 + std::exp(-z)); });
}

OneVsRestLogistic::LabelMatrix OneVsRestLogistic::predict(const Eigen::MatrixXd& features) const {
  const Eigen::MatrixXd s = scores(features);
  LabelMatrix out = LabelMatrix::Constant(s.rows(), s.cols(), false);
  if (!trainable_.any()) return out;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    Eigen::Index best = -1;
    for (Eigen::Index l = 0; l < s.cols(); ++l) {
      if (!trainable_(l)) continue;
      out(i, l) = s(i, l) >= config_.threshold;
      if (best < 0 || s(i, l) > s(i, best)) best = l;
    }
    if (!out.row(i).any()) out(i, best) = true;
  }
  return out;
}

std::vector<int> reversed_fold_assignment(const std::vector<NodeId>& nodes, const LabelSet& labels,
                                          int folds, std::uint64_t seed) {
  if (folds < 1) throw ConfigError("fold count must be >= 1");
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  auto first_label = [&](std::size_t i) {
    const auto row = labels.membership().row(nodes[i]);
    for (Eigen::Index l = 0; l < row.size(); ++l) {
      if (row(l)) return l;
    }
    return row.size();
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return first_label(a) < first_label(b); });
  std::vector<int> fold(nodes.size());
  for (std::size_t k = 0; k < order.size(); ++k) fold[order[k]] = static_cast<int>(k % folds);
  return fold;
}

ClassificationReport classify(const Eigen::MatrixXd& representations, const LabelSet& labels,
                              const std::vector<double>& fractions, const LogisticConfig& config,
                              std::uint64_t seed) {
  std::vector<NodeId> nodes;
  for (NodeId v = 0; v < labels.node_count(); ++v) {
    if (labels.labeled(v)) nodes.push_back(v);
  }
  if (static_cast<std::size_t>(representations.rows()) < labels.node_count()) {
    throw ValidationError("fewer representations than labeled nodes");
  }
  if (nodes.empty()) throw ValidationError("no labeled nodes");

  ClassificationReport report;
  for (double fraction : fractions) {
    const int k = folds_for_fraction(fraction);
    if (static_cast<std::size_t>(k) > nodes.size()) {
      throw ValidationError("more folds than labeled nodes");
    }
    const auto fold = reversed_fold_assignment(nodes, labels, k, derive_seed(seed, static_cast<std::uint64_t>(k)));

    FractionReport fr;
    fr.fraction = fraction;
    fr.folds = k;
    MicroCounts pooled;
    for (int f = 0; f < k; ++f) {
      std::vector<Eigen::Index> train_rows, test_rows;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        (fold[i] == f ? train_rows : test_rows).push_back(nodes[i]);
      }
      const Eigen::MatrixXd x_train = representations(train_rows, Eigen::all);
      const OneVsRestLogistic::LabelMatrix y_train = labels.membership()(train_rows, Eigen::all);
      OneVsRestLogistic model(config);
      model.fit(x_train, y_train);

      MicroCounts counts;
      if (!test_rows.empty()) {
        const Eigen::MatrixXd x_test = representations(test_rows, Eigen::all);
        const OneVsRestLogistic::LabelMatrix y_test = labels.membership()(test_rows, Eigen::all);
        counts = count_decisions(y_test, model.predict(x_test));
      }
      pooled += counts;
      fr.fold_micro_f1.push_back(counts.micro_f1());
    }
    fr.micro_f1 = pooled.micro_f1();
    fr.mean_fold_micro_f1 =
        std::accumulate(fr.fold_micro_f1.begin(), fr.fold_micro_f1.end(), 0.0) / k;
    report.fractions.push_back(std::move(fr));
  }
  return report;
}

}  // namespace pctadw
