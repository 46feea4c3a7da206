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

#pragma once

#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

#include "sparsense/matrix.hpp"

namespace sparsense {

/// Column indices in selection order, without duplicates.
class SupportSet {
 public:
  SupportSet() = default;
  SupportSet(std::initializer_list<Index> indices);
  explicit SupportSet(const std::vector<Index>& indices);

  void add(Index index);
  bool contains(Index index) const;

  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  Index operator[](std::size_t k) const { return indices_[k]; }
  const std::vector<Index>& indices() const noexcept { return indices_; }
  std::vector<Index> sorted() const;

  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  friend bool operator==(const SupportSet&, const SupportSet&) = default;

 private:
  std::vector<Index> indices_;
};

/// σ_min(D_S) below this multiple of σ_max(D_S) is rank deficiency.
inline constexpr double kRankTolerance = 1e-10;

/// D_S as a dense M×|S| matrix, columns in support order.
Eigen::MatrixXd gather_columns(const MeasurementMatrix& d, const SupportSet& support);

/// Coefficients (in support order) minimizing ‖y − D_S c‖₂, via Householder QR.
/// Throws RankDeficient per kRankTolerance.
Eigen::VectorXd least_squares_coefficients(const MeasurementMatrix& d, const Eigen::VectorXd& y,
                                           const SupportSet& support);

/// N-vector, zero off the support, minimizing ‖y − Dx‖₂ on the support.
Eigen::VectorXd least_squares_on_support(const MeasurementMatrix& d, const Eigen::VectorXd& y,
                                         const SupportSet& support);

/// ‖P⊥_S y‖₂² = ‖y − D_S D_S^† y‖₂².
double projection_residual_norm_sq(const MeasurementMatrix& d, const Eigen::VectorXd& y,
                                   const SupportSet& support);

/// y − D·x_hat.
Eigen::VectorXd residual(const MeasurementMatrix& d, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& x_hat);

}  // namespace sparsense
