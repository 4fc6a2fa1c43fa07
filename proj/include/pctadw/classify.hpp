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
#include <vector>

#include <Eigen/Core>

#include "pctadw/dataset.hpp"

namespace pctadw {

/// Training fractions evaluated by default: 5%, 10%, 20%, 25%, 33%, 50%.
inline const std::vector<double> kDefaultFractions = {0.05, 0.10, 0.20, 0.25, 0.33, 0.50};

/// Reversed k-fold uses k = round(1 / fraction) folds.
int folds_for_fraction(double fraction);

struct LogisticConfig {
  double learning_rate = 0.1;
  int epochs = 100;
  /// Z-score features with training-fold statistics before fitting.
  bool standardize = true;
  double threshold = 0.5;
};

/// Pooled binary decisions over (node, label).
struct MicroCounts {
  std::size_t true_positive = 0;
  std::size_t false_positive = 0;
  std::size_t false_negative = 0;

  MicroCounts& operator+=(const MicroCounts& o) {
    true_positive += o.true_positive;
    false_positive += o.false_positive;
    false_negative += o.false_negative;
    return *this;
  }
  /// 2TP / (2TP + FP + FN); 1 when there is nothing to predict.
  double micro_f1() const;
};

MicroCounts count_decisions(const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& truth,
                            const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& predicted);

/// One binary logistic regression per label, full-batch gradient descent,
/// no regularization.
class OneVsRestLogistic {
 public:
  using LabelMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

  explicit OneVsRestLogistic(LogisticConfig config = {}) : config_(config) {}

  void fit(const Eigen::MatrixXd& features, const LabelMatrix& labels);

  /// Sigmoid score per (row, label).
  Eigen::MatrixXd scores(const Eigen::MatrixXd& features) const;

  /// Thresholded scores; a row clearing no threshold gets its top label.
  /// Labels with no positive training example are never predicted.
  LabelMatrix predict(const Eigen::MatrixXd& features) const;

 private:
  Eigen::MatrixXd prepare(const Eigen::MatrixXd& features) const;

  LogisticConfig config_;
  Eigen::RowVectorXd mean_;
  Eigen::RowVectorXd scale_;
  Eigen::MatrixXd weights_;  // (dim + 1) x labels, bias last
  Eigen::Array<bool, Eigen::Dynamic, 1> trainable_;
};

struct FractionReport {
  double fraction = 0.0;
  int folds = 0;
  /// Micro-F1 of each fold's test split.
  std::vector<double> fold_micro_f1;
  /// Micro-F1 pooled over all folds' decisions.
  double micro_f1 = 0.0;
  double mean_fold_micro_f1 = 0.0;
};

struct ClassificationReport {
  std::vector<FractionReport> fractions;
};

/// Fold index per node in `nodes`: shuffled, grouped by first label and
/// dealt round-robin so each label spreads across folds.
std::vector<int> reversed_fold_assignment(const std::vector<NodeId>& nodes, const LabelSet& labels,
                                          int folds, std::uint64_t seed);

/// Reversed k-fold one-vs-rest evaluation over the labeled nodes: for each
/// fraction, train on one fold and test on the remaining k-1, for every
/// fold. Row v of `representations` belongs to node v.
ClassificationReport classify(const Eigen::MatrixXd& representations, const LabelSet& labels,
                              const std::vector<double>& fractions = kDefaultFractions,
                              const LogisticConfig& config = {}, std::uint64_t seed = 1);

}  // namespace pctadw
