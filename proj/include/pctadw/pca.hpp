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

#include <Eigen/Core>
#include <Eigen/SVD>

#include "pctadw/errors.hpp"

namespace pctadw {

struct PcaResult {
  Eigen::MatrixXd coordinates;         // rows x out_dim
  Eigen::MatrixXd components;          // cols x out_dim, orthonormal
  Eigen::VectorXd explained_variance;  // per component, sample variance
};

/// Projects mean-centered rows onto the top `out_dim` principal
/// components. Each component is signed so its largest-magnitude loading
/// is positive.
template <typename Derived>
PcaResult pca_project(const Eigen::MatrixBase<Derived>& data, Eigen::Index out_dim = 2) {
  const auto n = data.rows();
  if (n < 2) throw ValidationError("PCA needs at least two rows");
  if (out_dim < 1 || out_dim > data.cols()) throw ValidationError("bad PCA output dimension");

  const Eigen::MatrixXd x = data.template cast<double>();
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);

  PcaResult r;
  const auto available = std::min<Eigen::Index>(out_dim, svd.singularValues().size());
  r.components = Eigen::MatrixXd::Zero(x.cols(), out_dim);
  r.explained_variance = Eigen::VectorXd::Zero(out_dim);
  r.components.leftCols(available) = svd.matrixV().leftCols(available);
  r.explained_variance.head(available) =
      svd.singularValues().head(available).array().square() / static_cast<double>(n - 1);
  for (Eigen::Index c = 0; c < available; ++c) {
    Eigen::Index top = 0;
    r.components.col(c).cwiseAbs().maxCoeff(&top);
    if (r.components(top, c) < 0) r.components.col(c) *= -1.0;
  }
  r.coordinates = centered * r.components;
  return r;
}

}  // namespace pctadw
