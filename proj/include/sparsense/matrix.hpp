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

#include <atomic>
#include <filesystem>
#include <string_view>

#include <Eigen/Dense>

#include "sparsense/rng.hpp"

namespace sparsense {

using Index = Eigen::Index;

/// Tolerance on |‖column‖₂ − 1| accepted by MeasurementMatrix.
inline constexpr double kUnitNormTolerance = 1e-12;

enum class MatrixFamily { Gaussian, Hybrid };

std::string_view family_name(MatrixFamily family) noexcept;
MatrixFamily parse_family(std::string_view name);

/// Dense M×N real matrix with unit-norm columns and M ≤ N.
///
/// Immutable after construction. The coherence (largest absolute inner
/// product between two distinct columns) is computed on first request and
/// cached; concurrent first calls compute the same value and either store
/// wins, so sharing one instance across threads is safe.
class MeasurementMatrix {
 public:
  /// Validates the shape and unit-norm invariants; throws Error otherwise.
  explicit MeasurementMatrix(Eigen::MatrixXd entries);

  MeasurementMatrix(const MeasurementMatrix& other);
  MeasurementMatrix& operator=(const MeasurementMatrix& other);
  MeasurementMatrix(MeasurementMatrix&& other) noexcept;
  MeasurementMatrix& operator=(MeasurementMatrix&& other) noexcept;

  Index rows() const noexcept { return entries_.rows(); }
  Index cols() const noexcept { return entries_.cols(); }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  auto column(Index j) const { return entries_.col(j); }

  double coherence() const;
  bool coherence_cached() const noexcept;

 private:
  Eigen::MatrixXd entries_;
  mutable std::atomic<double> coherence_{-1.0};
};

/// Entries i.i.d. 𝒩(0, 1/M), then every column rescaled to unit norm.
/// Column j draws from its own stream keyed by (seed, family, j).
MeasurementMatrix gen_gaussian_normalized(Index rows, Index cols, RngSeed seed);

/// Column j = n_j + c_j·1 with n_j ~ 𝒩(0, I) and c_j ~ U[0, offset_max],
/// then unit-normalized. Offsets make the columns strongly correlated.
MeasurementMatrix gen_hybrid_normalized(Index rows, Index cols, double offset_max,
                                        RngSeed seed);

inline constexpr double kDefaultOffsetMax = 10.0;

/// max_{i≠j} |⟨D_i, D_j⟩| over the raw entries, blocked so memory stays
/// O(block·N). threads == 0 uses the hardware concurrency.
double compute_coherence(const Eigen::MatrixXd& entries, unsigned threads = 1);

inline double coherence(const MeasurementMatrix& matrix) { return matrix.coherence(); }

// Binary layout: "SPRSMAT1", u64 M, u64 N, then M·N doubles column-major,
// all little-endian.
void save_matrix_binary(const MeasurementMatrix& matrix, const std::filesystem::path& path);
MeasurementMatrix load_matrix_binary(const std::filesystem::path& path);
void save_matrix_csv(const MeasurementMatrix& matrix, const std::filesystem::path& path);

}  // namespace sparsense
