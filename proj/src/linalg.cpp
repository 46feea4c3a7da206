// Copyright 2026 The sparsense Authors
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

#include "sparsense/linalg.hpp"

#include <algorithm>
#include <string>

#include "sparsense/error.hpp"

namespace sparsense {

SupportSet::SupportSet(std::initializer_list<Index> indices) {
  for (Index i : indices) add(i);
}

SupportSet::SupportSet(const std::vector<Index>& indices) {
  for (Index i : indices) add(i);
}

void SupportSet::add(Index index) {
  if (index < 0) fail(ErrorCode::InvalidArgument, "support index must be nonnegative");
  if (contains(index)) {
    fail(ErrorCode::InvalidArgument, "duplicate support index " + std::to_string(index));
  }
  indices_.push_back(index);
}

bool SupportSet::contains(Index index) const {
  return std::find(indices_.begin(), indices_.end(), index) != indices_.end();
}

std::vector<Index> SupportSet::sorted() const {
  auto out = indices_;
  std::sort(out.begin(), out.end());
  return out;
}

Eigen::MatrixXd gather_columns(const MeasurementMatrix& d, const SupportSet& support) {
  Eigen::MatrixXd sub(d.rows(), static_cast<Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) {
    const Index j = support[k];
    if (j >= d.cols()) {
      fail(ErrorCode::InvalidArgument, "support index " + std::to_string(j) + " out of range for N=" +
                                           std::to_string(d.cols()));
    }
    sub.col(static_cast<Index>(k)) = d.column(j);
  }
  return sub;
}

Eigen::VectorXd least_squares_coefficients(const MeasurementMatrix& d, const Eigen::VectorXd& y,
                                           const SupportSet& support) {
  if (y.size() != d.rows()) {
    fail(ErrorCode::DimensionMismatch, "measurement length " + std::to_string(y.size()) +
                                           " does not match M=" + std::to_string(d.rows()));
  }
  const Index k = static_cast<Index>(support.size());
  if (k == 0) return Eigen::VectorXd();
  if (k > d.rows()) {
    fail(ErrorCode::RankDeficient, "support size " + std::to_string(k) + " exceeds M=" +
                                       std::to_string(d.rows()));
  }
  const Eigen::MatrixXd sub = gather_columns(d, support);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(sub);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  // D_S and R share singular values.
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(r).singularValues();
  if (!(sv(k - 1) >= kRankTolerance * sv(0))) {
    fail(ErrorCode::RankDeficient, "D_S is numerically rank deficient (sigma_min/sigma_max = " +
                                       std::to_string(sv(k - 1) / sv(0)) + ")");
  }
  return qr.solve(y);
}

Eigen::VectorXd least_squares_on_support(const MeasurementMatrix& d, const Eigen::VectorXd& y,
                                         const SupportSet& support) {
  const Eigen::VectorXd coef = least_squares_coefficients(d, y, support);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d.cols());
  for (std::size_t k = 0; k < support.size(); ++k) x(support[k]) = coef(static_cast<Index>(k));
  return x;
}

double projection_residual_norm_sq(const MeasurementMatrix& d, const Eigen::VectorXd& y,
                                   const SupportSet& support) {
  if (support.empty()) {
    if (y.size() != d.rows()) fail(ErrorCode::DimensionMismatch, "measurement length does not match M");
    return y.squaredNorm();
  }
  const Eigen::VectorXd coef = least_squares_coefficients(d, y, support);
  return (y - gather_columns(d, support) * coef).squaredNorm();
}

Eigen::VectorXd residual(const MeasurementMatrix& d, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& x_hat) {
  if (y.size() != d.rows() || x_hat.size() != d.cols()) {
    fail(ErrorCode::DimensionMismatch, "residual: expected y of length " + std::to_string(d.rows()) +
                                           " and x of length " + std::to_string(d.cols()));
  }
  return y - d.entries() * x_hat;
}

}  // namespace sparsense
