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

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sparsense/linalg.hpp"
#include "sparsense/matrix.hpp"

namespace sparsense::testing {

inline Eigen::VectorXd random_vector(Index n, std::mt19937_64& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(engine);
  return v;
}

inline MeasurementMatrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  return gen_gaussian_normalized(rows, cols, RngSeed{seed});
}

// Columns of a random orthogonal matrix, unit norm to machine precision.
inline MeasurementMatrix orthonormal_matrix(Index n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  Eigen::MatrixXd a(n, n);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) a(i, j) = normal(engine);
  Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
  for (Index j = 0; j < n; ++j) q.col(j).normalize();
  return MeasurementMatrix(q);
}

inline std::vector<Index> random_subset(Index n, std::size_t k, std::mt19937_64& engine) {
  std::vector<Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index{0});
  std::shuffle(all.begin(), all.end(), engine);
  all.resize(k);
  return all;
}

// Explicit projector D_S (D_Sᵀ D_S)⁻¹ D_Sᵀ through a dense inverse.
inline Eigen::MatrixXd explicit_projector(const Eigen::MatrixXd& ds) {
  if (ds.cols() == 0) return Eigen::MatrixXd::Zero(ds.rows(), ds.rows());
  const Eigen::MatrixXd gram = ds.transpose() * ds;
  return ds * gram.inverse() * ds.transpose();
}

}  // namespace sparsense::testing
